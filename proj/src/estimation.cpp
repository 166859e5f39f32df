// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include "isacdrt/estimation.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "isacdrt/numkit.hpp"
#include "isacdrt/threading.hpp"

namespace isacdrt::estimation {

Complex scalar_posterior_mean(Complex y, Complex x, double prior_var, double noise_var) {
  if (prior_var <= 0.0 || noise_var <= 0.0) {
    throw std::domain_error("scalar_posterior_mean: variances must be > 0");
  }
  return prior_var * std::conj(x) * y / (prior_var * std::norm(x) + noise_var);
}

double scalar_mmse_given_x(double x_abs2, double prior_var, double noise_var) {
  if (x_abs2 < 0.0 || prior_var <= 0.0 || noise_var <= 0.0) {
    throw std::domain_error("scalar_mmse_given_x: invalid arguments");
  }
  return 1.0 / (1.0 / prior_var + x_abs2 / noise_var);
}

namespace {

/// Gauss-Laguerre nodes/weights by Golub-Welsch on the Jacobi matrix
/// (diag 2k+1, offdiag k), for integrals against e^{-x} on [0, inf).
std::pair<RVector, RVector> gauss_laguerre(int n) {
  RMatrix jacobi = RMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) jacobi(k, k) = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = static_cast<double>(k);
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw NumericError("gauss_laguerre: eigensolver failed");
  }
  RVector nodes = solver.eigenvalues();
  RVector weights(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    weights(i) = v0 * v0;
  }
  return {std::move(nodes), std::move(weights)};
}

constexpr int kLaguerreNodes = 64;

}  // namespace

MCEstimate scalar_avg_mmse(const SignalScheme& scheme, const Scenario& scn,
                           Averaging method, long trials, RngStream rng, int jobs) {
  if (!scn.is_scalar()) {
    throw ConfigError("scalar_avg_mmse: requires a scalar scenario (M = T = 1)");
  }
  validate_scheme(scheme, scn);
  const double prior_var = scn.target_prior_cov(0, 0).real();
  const double noise_var = scn.sense_noise_var;

  if (has_fixed_sample_cov(scheme)) {
    MCEstimate out;
    const double x_abs2 = statistical_cov(scheme, scn)(0, 0).real();
    out.mean = scalar_mmse_given_x(x_abs2, prior_var, noise_var);
    out.trials = 1;
    return out;
  }

  if (method == Averaging::Quadrature) {
    // |X|^2 / P_T is Exp(1) for scalar Gaussian signaling.
    const double power = statistical_cov(scheme, scn)(0, 0).real();
    const auto [nodes, weights] = gauss_laguerre(kLaguerreNodes);
    MCEstimate out;
    for (int i = 0; i < kLaguerreNodes; ++i) {
      out.mean += weights(i) * scalar_mmse_given_x(power * nodes(i), prior_var, noise_var);
    }
    out.trials = 1;
    return out;
  }

  if (trials < 2) throw std::domain_error("scalar_avg_mmse: trials must be >= 2");
  std::vector<double> values(static_cast<std::size_t>(trials));
  parallel_for(values.size(), jobs, [&](std::size_t t) {
    Rng trial_rng(rng.derive(t));
    const CMatrix x = sample_signal(scheme, scn, trial_rng);
    values[t] = scalar_mmse_given_x(std::norm(x(0, 0)), prior_var, noise_var);
  });
  return reduce_estimate(values);
}

CMatrix vector_posterior_mean(const CMatrix& y_sense, const CMatrix& x,
                              const CMatrix& prior_cov, double noise_var) {
  if (prior_cov.rows() % x.rows() != 0) {
    throw std::domain_error("vector_posterior_mean: dimension mismatch");
  }
  const int sense_rx = static_cast<int>(prior_cov.rows() / x.rows());
  if (y_sense.rows() != sense_rx || y_sense.cols() != x.cols()) {
    throw std::domain_error("vector_posterior_mean: observation shape mismatch");
  }

  const CMatrix lifted = lift(x, sense_rx);
  const CMatrix cross = prior_cov * lifted.adjoint();
  CMatrix gram = lifted * cross;
  gram += noise_var * CMatrix::Identity(gram.rows(), gram.cols());
  gram = numkit::hermitize(gram);

  const CVector y = numkit::vec(y_sense);
  CVector solved;
  Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() == Eigen::Success) {
    solved = llt.solve(y);
  } else {
    // Conditioning fallback for vanishing noise: thresholded eigen-inverse.
    const auto eig = numkit::hermitian_eig(gram);
    const double cutoff = 1e-14 * std::max(eig.lambdas(0), 0.0);
    if (eig.lambdas(0) <= 0.0) {
      throw NumericError("vector_posterior_mean: singular observation model");
    }
    RVector inv = RVector::Zero(eig.lambdas.size());
    for (Index i = 0; i < eig.lambdas.size(); ++i) {
      if (eig.lambdas(i) > cutoff) inv(i) = 1.0 / eig.lambdas(i);
    }
    solved = eig.eigvecs * (inv.asDiagonal() * (eig.eigvecs.adjoint() * y));
  }
  const CVector h_hat = cross * solved;
  return numkit::unvec(h_hat, sense_rx, static_cast<Index>(x.rows()));
}

double vector_mmse_given_cov(const CMatrix& cov, const FBlockSet& fb, int block_len,
                             double noise_var) {
  numkit::require_psd(cov, "vector_mmse_given_cov");
  if (fb.lambdas(fb.lambdas.size() - 1) <= 0.0) {
    throw std::domain_error("vector_mmse_given_cov: prior eigenvalues must be > 0");
  }
  const double c = static_cast<double>(block_len) / noise_var;
  CMatrix info = fb.lambdas.cwiseInverse().cast<Complex>().asDiagonal();
  for (const auto& f : fb.blocks) info += c * (f * cov * f.adjoint());
  const CMatrix inv = numkit::pd_inverse(info, "vector_mmse_given_cov");
  return inv.real().trace();
}

double vector_mmse_unrotated(const CMatrix& cov, const CMatrix& prior_cov,
                             int block_len, int sense_rx, double noise_var) {
  numkit::require_psd(cov, "vector_mmse_unrotated");
  const double c = static_cast<double>(block_len) / noise_var;
  const CMatrix eye = CMatrix::Identity(sense_rx, sense_rx);
  CMatrix info = numkit::pd_inverse(prior_cov, "vector_mmse_unrotated");
  info += c * numkit::kron(cov.conjugate(), eye);
  const CMatrix inv = numkit::pd_inverse(info, "vector_mmse_unrotated");
  return inv.real().trace();
}

namespace {

struct TrialOutputs {
  std::vector<double> sq_err;
  std::vector<double> cond_mmse;
};

TrialOutputs run_mse_trials(const SignalScheme& scheme, const Scenario& scn,
                            long trials, RngStream rng, int jobs, bool want_paired) {
  validate_scheme(scheme, scn);
  if (trials < 2) throw std::domain_error("empirical_mse: trials must be >= 2");
  const FBlockSet fb =
      infomeasures::build_fblocks(scn.target_prior_cov, scn.sense_rx_antennas,
                                  scn.tx_antennas);
  TrialOutputs out;
  out.sq_err.resize(static_cast<std::size_t>(trials));
  if (want_paired) out.cond_mmse.resize(static_cast<std::size_t>(trials));

  parallel_for(out.sq_err.size(), jobs, [&](std::size_t t) {
    Rng trial_rng(rng.derive(t));
    const CMatrix x = sample_signal(scheme, scn, trial_rng);
    const auto [h_vec, h_mat] = sample_target(scn, trial_rng);
    const CMatrix y = forward_sense(x, h_mat, scn.sense_noise_var, trial_rng);
    const CMatrix h_hat =
        vector_posterior_mean(y, x, scn.target_prior_cov, scn.sense_noise_var);
    out.sq_err[t] = (h_mat - h_hat).squaredNorm();
    if (want_paired) {
      out.cond_mmse[t] =
          vector_mmse_given_cov(sample_cov(x), fb, scn.block_len, scn.sense_noise_var);
    }
  });
  return out;
}

}  // namespace

MCEstimate empirical_mse(const SignalScheme& scheme, const Scenario& scn,
                         long trials, RngStream rng, int jobs) {
  return reduce_estimate(run_mse_trials(scheme, scn, trials, rng, jobs, false).sq_err);
}

PairedMse empirical_mse_paired(const SignalScheme& scheme, const Scenario& scn,
                               long trials, RngStream rng, int jobs) {
  const TrialOutputs raw = run_mse_trials(scheme, scn, trials, rng, jobs, true);
  return PairedMse{reduce_estimate(raw.sq_err), reduce_estimate(raw.cond_mmse)};
}

}  // namespace isacdrt::estimation
