// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "isacdrt/infomeasures.hpp"
#include "isacdrt/numkit.hpp"
#include "oracles.hpp"

using namespace isacdrt;
using namespace isacdrt::infomeasures;

namespace {

Scenario make_scenario(int tx, int sense_rx, int block, std::uint64_t seed,
                       double noise = 1.0, double power = 1.0) {
  Scenario scn;
  scn.tx_antennas = tx;
  scn.sense_rx_antennas = sense_rx;
  scn.block_len = block;
  scn.transmit_power = power;
  scn.sense_noise_var = noise;
  scn.target_prior_cov = oracles::random_pd(static_cast<Index>(tx) * sense_rx, seed);
  return scn;
}

}  // namespace

TEST_CASE("scalar MI closed form") {
  CHECK(scalar_mi(1.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(scalar_mi(0.0, 2.0, 3.0) == doctest::Approx(0.0));
  CHECK(scalar_mi(3.0, 1.0, 1.0) == doctest::Approx(2.0));

  CHECK(scalar_mi_max(1.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(scalar_mi_max(1e-12, 1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-6));
  double prev = -1.0;
  for (double p = 0.0; p <= 4.0; p += 0.25) {
    const double v = scalar_mi_max(p, 1.0, 1.0);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("fblock construction: scalar and identity priors") {
  CMatrix prior(1, 1);
  prior(0, 0) = 0.8;
  const FBlockSet fb1 = build_fblocks(prior, 1, 1);
  CHECK(fb1.blocks.size() == 1);
  CHECK(std::abs(std::abs(fb1.blocks[0](0, 0)) - 1.0) < 1e-12);
  CHECK(fb1.lambdas(0) == doctest::Approx(0.8));

  const FBlockSet fbi = build_fblocks(CMatrix::Identity(4, 4), 2, 2);
  for (Index i = 0; i < 4; ++i) CHECK(fbi.lambdas(i) == doctest::Approx(1.0));
  CMatrix outer = CMatrix::Zero(4, 4);
  for (const auto& f : fbi.blocks) {
    CHECK((f.adjoint() * f - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
    outer += f * f.adjoint();
  }
  CHECK((outer - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fblock isometry on a random prior") {
  const FBlockSet fb = build_fblocks(oracles::random_pd(4, 201), 2, 2);
  for (const auto& f : fb.blocks) {
    CHECK((f.adjoint() * f - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("mi_given_cov closed cases") {
  const FBlockSet fb = build_fblocks(CMatrix::Identity(4, 4), 2, 2);
  CHECK(mi_given_cov(CMatrix::Zero(2, 2), fb, 4, 1.0) == doctest::Approx(0.0));

  // identity prior, isotropic signal: N_s M log2(1 + T P /(M sigma^2))
  const double power = 1.0;
  const CMatrix iso = (power / 2) * CMatrix::Identity(2, 2);
  CHECK(mi_given_cov(iso, fb, 4, 1.0) ==
        doctest::Approx(4.0 * std::log2(1.0 + 4.0 * power / 2.0)).epsilon(1e-12));

  CMatrix not_psd = CMatrix::Identity(2, 2);
  not_psd(0, 0) = -1.0;
  CHECK_THROWS_AS(mi_given_cov(not_psd, fb, 4, 1.0), std::domain_error);
}

TEST_CASE("lifted and sample-covariance MI routes agree") {
  // the core identity, across dimension combinations
  int checked = 0;
  for (int sense_rx = 1; sense_rx <= 3; ++sense_rx) {
    for (int tx = 1; tx <= 3; ++tx) {
      for (int block = 1; block <= 6; block += 2) {
        const std::uint64_t seed = 3000 + static_cast<std::uint64_t>(
                                              100 * sense_rx + 10 * tx + block);
        const CMatrix prior = oracles::random_pd(static_cast<Index>(sense_rx) * tx, seed);
        const FBlockSet fb = build_fblocks(prior, sense_rx, tx);
        for (int rep = 0; rep < 4; ++rep) {
          const CMatrix x = oracles::random_cmatrix(tx, block, seed + 17 * rep + 1);
          const double a = mi_direct(x, prior, 0.9);
          const double b = mi_given_cov(sample_cov(x), fb, block, 0.9);
          CHECK(std::abs(a - b) < 1e-9);
          ++checked;
        }
      }
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("mi_direct scalar reduction and zero signal") {
  CMatrix prior(1, 1);
  prior(0, 0) = 1.3;
  CMatrix x(1, 1);
  x(0, 0) = Complex(0.4, -0.7);
  CHECK(mi_direct(x, prior, 0.6) ==
        doctest::Approx(scalar_mi(std::norm(x(0, 0)), 1.3, 0.6)).epsilon(1e-12));
  CHECK(mi_direct(CMatrix::Zero(2, 3), oracles::random_pd(4, 211), 1.0) ==
        doctest::Approx(0.0));
}

TEST_CASE("ergodic MI: constant-modulus scalar is exact") {
  Scenario scn = make_scenario(1, 1, 1, 221);
  scn.target_prior_cov = CMatrix::Identity(1, 1);
  const MCEstimate mi = ergodic_sensing_mi(ConstantModulusPsk{4}, scn, 10, RngStream{1, 0});
  CHECK(mi.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mi.std_err == 0.0);
  CHECK(mi.trials == 1);
}

TEST_CASE("ergodic MI: scalar gaussian against quadrature oracle") {
  Scenario scn = make_scenario(1, 1, 1, 222);
  scn.target_prior_cov = CMatrix::Identity(1, 1);
  const double expected_bits = oracles::exp_mean_log1p(1.0) / std::numbers::ln2;
  CHECK(expected_bits == doctest::Approx(0.8603473823).epsilon(1e-8));

  const MCEstimate mi =
      ergodic_sensing_mi(GaussianIid{}, scn, 60000, RngStream{11, 0}, 2);
  CHECK(std::abs(mi.mean - expected_bits) < 3.0 * mi.std_err);
  CHECK(mi.std_err > 0.0);
}

TEST_CASE("ergodic MI: haar collapses to one exact evaluation") {
  const Scenario scn = make_scenario(2, 2, 4, 223);
  const CMatrix cov = oracles::random_psd_with_trace(2, scn.transmit_power, 224);
  const FBlockSet fb = build_fblocks(scn.target_prior_cov, 2, 2);
  const MCEstimate mi =
      ergodic_sensing_mi(HaarFixedCovariance{cov}, scn, 100, RngStream{12, 0});
  CHECK(mi.std_err == 0.0);
  CHECK(mi.mean ==
        doctest::Approx(mi_given_cov(cov, fb, scn.block_len, scn.sense_noise_var))
            .epsilon(1e-12));
}

TEST_CASE("ergodic MI is invariant to the worker count") {
  const Scenario scn = make_scenario(2, 2, 4, 225);
  const MCEstimate a = ergodic_sensing_mi(GaussianIid{}, scn, 500, RngStream{13, 5}, 1);
  const MCEstimate b = ergodic_sensing_mi(GaussianIid{}, scn, 500, RngStream{13, 5}, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.std_err == b.std_err);
}

TEST_CASE("gradient: zero covariance closed form") {
  const FBlockSet fb = build_fblocks(oracles::random_pd(4, 231), 2, 2);
  const double c = 4.0 / 0.8;
  const CMatrix g = mi_gradient(CMatrix::Zero(2, 2), fb, 4, 0.8);
  CMatrix expected = CMatrix::Zero(2, 2);
  for (const auto& f : fb.blocks) {
    expected += c * (f.adjoint() * fb.lambdas.cast<Complex>().asDiagonal() * f);
  }
  CHECK((g - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gradient matches central finite differences") {
  const int block = 3;
  const double noise = 0.7;
  const FBlockSet fb = build_fblocks(oracles::random_pd(6, 241), 2, 3);
  const CMatrix base = oracles::random_psd_with_trace(3, 1.0, 242);
  const CMatrix g = mi_gradient(base, fb, block, noise);
  const double log2e = std::numbers::log2e;
  const double eps = 1e-5;
  for (int rep = 0; rep < 50; ++rep) {
    const CMatrix dir = oracles::random_hermitian(3, 300 + static_cast<std::uint64_t>(rep));
    const double fd = (mi_given_cov(base + eps * dir, fb, block, noise) -
                       mi_given_cov(base - eps * dir, fb, block, noise)) /
                      (2.0 * eps);
    const double analytic = log2e * (g.cwiseProduct(dir.conjugate())).sum().real();
    CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(std::abs(fd), 1e-3));
  }

  // gradient is PSD on random PSD inputs
  const auto eig = numkit::hermitian_eig(g);
  CHECK(eig.lambdas(eig.lambdas.size() - 1) > -1e-12);
}

TEST_CASE("concavity of the MI in the sample covariance") {
  const FBlockSet fb = build_fblocks(oracles::random_pd(4, 251), 2, 2);
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const CMatrix r1 = oracles::random_psd_with_trace(2, 1.0, 400 + 2 * rep);
    const CMatrix r2 = oracles::random_psd_with_trace(2, 1.0, 401 + 2 * rep);
    const double t = unif(gen);
    const double mixed = mi_given_cov(t * r1 + (1.0 - t) * r2, fb, 4, 1.0);
    const double split = t * mi_given_cov(r1, fb, 4, 1.0) +
                         (1.0 - t) * mi_given_cov(r2, fb, 4, 1.0);
    CHECK(mixed >= split - 1e-9);
  }
}

TEST_CASE("Jensen direction for random schemes") {
  const Scenario scn = make_scenario(2, 2, 4, 261);
  const FBlockSet fb = build_fblocks(scn.target_prior_cov, 2, 2);
  const MCEstimate erg =
      ergodic_sensing_mi(GaussianIid{}, scn, 4000, RngStream{14, 0}, 2);
  const double at_mean = mi_given_cov(statistical_cov(GaussianIid{}, scn), fb,
                                      scn.block_len, scn.sense_noise_var);
  CHECK(erg.mean <= at_mean + 3.0 * erg.std_err);
}

TEST_CASE("MI is monotone along PSD directions") {
  const FBlockSet fb = build_fblocks(oracles::random_pd(4, 271), 2, 2);
  const CMatrix base = oracles::random_psd_with_trace(2, 1.0, 272);
  const double at_base = mi_given_cov(base, fb, 4, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const CMatrix v = oracles::random_cmatrix(2, 1, 500 + static_cast<std::uint64_t>(rep));
    const CMatrix bumped = base + 0.05 * (v * v.adjoint());
    CHECK(mi_given_cov(bumped, fb, 4, 1.0) >= at_base - 1e-12);
  }
}
