// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "isacdrt/estimation.hpp"
#include "isacdrt/numkit.hpp"
#include "oracles.hpp"

using namespace isacdrt;
using namespace isacdrt::estimation;

namespace {

Scenario scalar_scn(double power = 1.0, double prior = 1.0, double noise = 1.0) {
  Scenario scn;
  scn.transmit_power = power;
  scn.sense_noise_var = noise;
  scn.target_prior_cov = prior * CMatrix::Identity(1, 1);
  return scn;
}

Scenario vector_scn(std::uint64_t seed) {
  Scenario scn;
  scn.tx_antennas = 2;
  scn.sense_rx_antennas = 2;
  scn.block_len = 4;
  scn.target_prior_cov = oracles::random_pd(4, seed);
  return scn;
}

}  // namespace

TEST_CASE("scalar posterior mean") {
  CHECK(std::abs(scalar_posterior_mean(Complex(1, 1), Complex(0, 0), 1.0, 1.0)) == 0.0);

  // vanishing noise inverts the channel
  const Complex x(0.7, -0.2);
  const Complex h(1.2, 0.4);
  const Complex y = h * x;
  const Complex est = scalar_posterior_mean(y, x, 1.0, 1e-12);
  CHECK(std::abs(est - h) < 1e-9);

  // empirical MSE of the estimator matches the conditional closed form
  Rng rng(RngStream{21, 0});
  const double prior = 1.0, noise = 0.5;
  const Complex probe(0.9, 0.3);
  double acc = 0.0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    const Complex target = rng.cgaussian(prior);
    const Complex obs = target * probe + rng.cgaussian(noise);
    acc += std::norm(target - scalar_posterior_mean(obs, probe, prior, noise));
  }
  acc /= trials;
  const double expected = scalar_mmse_given_x(std::norm(probe), prior, noise);
  CHECK(acc == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("scalar conditional MMSE") {
  CHECK(scalar_mmse_given_x(1.0, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(scalar_mmse_given_x(0.0, 0.7, 1.0) == doctest::Approx(0.7));
  // the MMSE/MI exponent identity
  for (double x2 : {0.0, 0.5, 1.0, 4.0}) {
    const double mi = infomeasures::scalar_mi(x2, 1.3, 0.6);
    CHECK(scalar_mmse_given_x(x2, 1.3, 0.6) ==
          doctest::Approx(1.3 * std::exp2(-mi)).epsilon(1e-12));
  }
}

TEST_CASE("scalar averaged MMSE: constant modulus is exact") {
  const Scenario scn = scalar_scn();
  const MCEstimate mmse = scalar_avg_mmse(ConstantModulusPsk{4}, scn,
                                          Averaging::MonteCarlo, 10, RngStream{22, 0});
  CHECK(mmse.mean == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mmse.std_err == 0.0);
}

TEST_CASE("scalar averaged MMSE: gaussian via quadrature and Monte Carlo") {
  const Scenario scn = scalar_scn();
  const double expected = oracles::exp_mean_inv(1.0, 1.0);
  CHECK(expected == doctest::Approx(0.5963473623).epsilon(1e-8));

  const MCEstimate quad = scalar_avg_mmse(GaussianIid{}, scn, Averaging::Quadrature, 0,
                                          RngStream{23, 0});
  CHECK(quad.mean == doctest::Approx(expected).epsilon(1e-9));

  const MCEstimate mc = scalar_avg_mmse(GaussianIid{}, scn, Averaging::MonteCarlo, 60000,
                                        RngStream{23, 1}, 2);
  CHECK(std::abs(mc.mean - expected) < 3.0 * mc.std_err);

  // enormous noise pushes the answer to the prior variance
  const Scenario deaf = scalar_scn(1.0, 1.0, 1e9);
  const MCEstimate big =
      scalar_avg_mmse(GaussianIid{}, deaf, Averaging::Quadrature, 0, RngStream{23, 2});
  CHECK(big.mean == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(scalar_avg_mmse(GaussianIid{}, vector_scn(301), Averaging::MonteCarlo,
                                  100, RngStream{23, 3}),
                  ConfigError);
}

TEST_CASE("vector posterior mean") {
  const Scenario scn = vector_scn(311);

  const CMatrix zero_x = CMatrix::Zero(2, 4);
  const CMatrix y = oracles::random_cmatrix(2, 4, 312);
  const CMatrix est = vector_posterior_mean(y, zero_x, scn.target_prior_cov, 1.0);
  CHECK(est.cwiseAbs().maxCoeff() < 1e-14);

  // noiseless with full column rank recovers the target (vs least squares)
  Rng rng(RngStream{24, 0});
  const CMatrix x = sample_signal(GaussianIid{}, scn, rng);
  const auto [h_vec, h_mat] = sample_target(scn, rng);
  const CMatrix clean = forward_sense(x, h_mat, 0.0, rng);
  const CMatrix rec = vector_posterior_mean(clean, x, scn.target_prior_cov, 1e-10);
  CHECK((rec - h_mat).cwiseAbs().maxCoeff() < 1e-6);
  const CMatrix lifted = lift(x, 2);
  const CVector ls = lifted.colPivHouseholderQr().solve(numkit::vec(clean));
  CHECK((numkit::vec(rec) - ls).cwiseAbs().maxCoeff() < 1e-6);

  // scalar specialization
  CMatrix xs(1, 1), ys(1, 1), prior(1, 1);
  xs(0, 0) = Complex(0.8, 0.1);
  ys(0, 0) = Complex(0.5, -0.3);
  prior(0, 0) = 1.4;
  const CMatrix scalar_est = vector_posterior_mean(ys, xs, prior, 0.9);
  CHECK(std::abs(scalar_est(0, 0) -
                 scalar_posterior_mean(ys(0, 0), xs(0, 0), 1.4, 0.9)) < 1e-12);
}

TEST_CASE("conditional MMSE trace forms") {
  const Scenario scn = vector_scn(321);
  const auto fb = infomeasures::build_fblocks(scn.target_prior_cov, 2, 2);

  CHECK(vector_mmse_given_cov(CMatrix::Zero(2, 2), fb, 4, 1.0) ==
        doctest::Approx(scn.target_prior_cov.real().trace()).epsilon(1e-10));

  // scalar specialization
  CMatrix prior(1, 1);
  prior(0, 0) = 1.3;
  const auto fb1 = infomeasures::build_fblocks(prior, 1, 1);
  CMatrix r(1, 1);
  r(0, 0) = 0.8;
  CHECK(vector_mmse_given_cov(r, fb1, 1, 0.6) ==
        doctest::Approx(scalar_mmse_given_x(0.8, 1.3, 0.6)).epsilon(1e-12));

  // dual-route agreement on random instances
  for (int rep = 0; rep < 10; ++rep) {
    const CMatrix cov = oracles::random_psd_with_trace(2, 1.0, 700 + static_cast<std::uint64_t>(rep));
    const double rotated = vector_mmse_given_cov(cov, fb, 4, 0.8);
    const double unrotated =
        vector_mmse_unrotated(cov, scn.target_prior_cov, 4, 2, 0.8);
    CHECK(std::abs(rotated - unrotated) < 1e-9);
  }
}

TEST_CASE("conditional MMSE ordering and convexity") {
  const Scenario scn = vector_scn(331);
  const auto fb = infomeasures::build_fblocks(scn.target_prior_cov, 2, 2);
  const CMatrix base = oracles::random_psd_with_trace(2, 1.0, 332);
  const double at_base = vector_mmse_given_cov(base, fb, 4, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const CMatrix v = oracles::random_cmatrix(2, 1, 800 + static_cast<std::uint64_t>(rep));
    CHECK(vector_mmse_given_cov(base + 0.1 * (v * v.adjoint()), fb, 4, 1.0) <=
          at_base + 1e-12);
  }
  for (int rep = 0; rep < 20; ++rep) {
    const CMatrix r1 = oracles::random_psd_with_trace(2, 1.0, 900 + 2 * rep);
    const CMatrix r2 = oracles::random_psd_with_trace(2, 1.0, 901 + 2 * rep);
    const double mid = vector_mmse_given_cov(0.5 * r1 + 0.5 * r2, fb, 4, 1.0);
    const double avg = 0.5 * vector_mmse_given_cov(r1, fb, 4, 1.0) +
                       0.5 * vector_mmse_given_cov(r2, fb, 4, 1.0);
    CHECK(mid <= avg + 1e-9);
  }
}

TEST_CASE("empirical MSE: scalar baselines") {
  const Scenario scn = scalar_scn();
  const MCEstimate psk = empirical_mse(ConstantModulusPsk{4}, scn, 100000,
                                       RngStream{25, 0}, 2);
  CHECK(std::abs(psk.mean - 0.5) < 3.0 * psk.std_err);

  const double gauss_expected = oracles::exp_mean_inv(1.0, 1.0);
  const MCEstimate gauss = empirical_mse(GaussianIid{}, scn, 100000, RngStream{25, 1}, 2);
  CHECK(std::abs(gauss.mean - gauss_expected) < 3.0 * gauss.std_err);
}

TEST_CASE("empirical MSE pairs with the conditional average") {
  const Scenario scn = vector_scn(341);
  const PairedMse paired =
      empirical_mse_paired(GaussianIid{}, scn, 8000, RngStream{26, 0}, 2);
  // common random numbers: the empirical MSE and the averaged conditional
  // MMSE estimate the same number
  CHECK(std::abs(paired.mse.mean - paired.conditional_mmse.mean) <
        3.0 * (paired.mse.std_err + paired.conditional_mmse.std_err));
}

TEST_CASE("posterior-mean orthogonality") {
  const Scenario scn = vector_scn(351);
  Rng rng(RngStream{27, 0});
  Complex corr(0.0, 0.0);
  double scale = 0.0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    const CMatrix x = sample_signal(GaussianIid{}, scn, rng);
    const auto [h_vec, h_mat] = sample_target(scn, rng);
    const CMatrix y = forward_sense(x, h_mat, scn.sense_noise_var, rng);
    const CMatrix est = vector_posterior_mean(y, x, scn.target_prior_cov,
                                              scn.sense_noise_var);
    corr += ((h_mat - est).cwiseProduct(est.conjugate())).sum();
    scale += est.squaredNorm();
  }
  CHECK(std::abs(corr) / scale < 0.03);
}
