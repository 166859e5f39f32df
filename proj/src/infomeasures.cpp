// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include "isacdrt/infomeasures.hpp"

#include <cmath>
#include <vector>

#include "isacdrt/numkit.hpp"
#include "isacdrt/threading.hpp"

namespace isacdrt::infomeasures {

double scalar_mi(double x_abs2, double prior_var, double noise_var) {
  if (x_abs2 < 0.0 || prior_var <= 0.0 || noise_var <= 0.0) {
    throw std::domain_error("scalar_mi: invalid arguments");
  }
  return std::log2(1.0 + x_abs2 * prior_var / noise_var);
}

double scalar_mi_max(double transmit_power, double prior_var, double noise_var) {
  return scalar_mi(transmit_power, prior_var, noise_var);
}

FBlockSet build_fblocks(const CMatrix& prior_cov, int sense_rx, int tx) {
  const Index d = static_cast<Index>(sense_rx) * tx;
  if (prior_cov.rows() != d || prior_cov.cols() != d) {
    throw std::domain_error("build_fblocks: prior covariance dimension mismatch");
  }
  const auto eig = numkit::hermitian_eig(prior_cov);
  if (eig.lambdas(eig.lambdas.size() - 1) <= 1e-12 * eig.lambdas(0)) {
    throw std::domain_error("build_fblocks: prior covariance must be positive definite");
  }

  // The Kronecker reordering that turns cov^* kron I into I kron cov^* is
  // the vec-transpose permutation of M x N_s matrices. The matrix taking the
  // other argument order breaks the identity whenever N_s != M.
  const CMatrix k = numkit::commutation_matrix(tx, sense_rx);
  const CMatrix f_tilde = eig.eigvecs.adjoint() * k;

  FBlockSet fb;
  fb.eigvecs = eig.eigvecs;
  fb.lambdas = eig.lambdas;
  fb.sense_rx_antennas = sense_rx;
  fb.tx_antennas = tx;
  fb.blocks.reserve(static_cast<std::size_t>(sense_rx));
  for (int i = 0; i < sense_rx; ++i) {
    fb.blocks.push_back(f_tilde.middleCols(static_cast<Index>(i) * tx, tx).conjugate());
  }
  return fb;
}

namespace {

CMatrix block_sum(const CMatrix& cov, const FBlockSet& fb) {
  const Index d = fb.dim();
  CMatrix s = CMatrix::Zero(d, d);
  for (const auto& f : fb.blocks) s += f * cov * f.adjoint();
  return numkit::hermitize(s);
}

/// log-det argument I + c L^(1/2) S L^(1/2), equal in determinant to
/// I + c L S but Hermitian by construction.
CMatrix symmetrized_kernel(const CMatrix& s, const RVector& lambdas, double c) {
  const RVector root = lambdas.cwiseMax(0.0).cwiseSqrt();
  const Index d = s.rows();
  CMatrix m = root.asDiagonal() * s * root.asDiagonal();
  m *= c;
  m += CMatrix::Identity(d, d);
  return numkit::hermitize(m);
}

}  // namespace

double mi_given_cov(const CMatrix& cov, const FBlockSet& fb, int block_len,
                    double noise_var) {
  numkit::require_psd(cov, "mi_given_cov");
  const double c = static_cast<double>(block_len) / noise_var;
  const CMatrix kernel = symmetrized_kernel(block_sum(cov, fb), fb.lambdas, c);
  return numkit::logdet_pd(kernel);
}

double mi_direct(const CMatrix& x, const CMatrix& prior_cov, double noise_var) {
  if (x.rows() < 1 || prior_cov.rows() % x.rows() != 0) {
    throw std::domain_error("mi_direct: prior dimension is not a multiple of the signal rows");
  }
  const int sense_rx = static_cast<int>(prior_cov.rows() / x.rows());
  const CMatrix lifted = lift(x, sense_rx);
  CMatrix kernel = lifted * prior_cov * lifted.adjoint() / noise_var;
  kernel += CMatrix::Identity(kernel.rows(), kernel.cols());
  return numkit::logdet_pd(numkit::hermitize(kernel));
}

MCEstimate ergodic_sensing_mi(const SignalScheme& scheme, const Scenario& scn,
                              long trials, RngStream rng, int jobs) {
  validate_scheme(scheme, scn);
  const FBlockSet fb =
      build_fblocks(scn.target_prior_cov, scn.sense_rx_antennas, scn.tx_antennas);

  if (has_fixed_sample_cov(scheme)) {
    MCEstimate out;
    out.mean = mi_given_cov(statistical_cov(scheme, scn), fb, scn.block_len,
                            scn.sense_noise_var);
    out.std_err = 0.0;
    out.trials = 1;
    return out;
  }

  if (trials < 2) throw std::domain_error("ergodic_sensing_mi: trials must be >= 2");
  std::vector<double> values(static_cast<std::size_t>(trials));
  parallel_for(values.size(), jobs, [&](std::size_t t) {
    Rng trial_rng(rng.derive(t));
    const CMatrix x = sample_signal(scheme, scn, trial_rng);
    values[t] = mi_given_cov(sample_cov(x), fb, scn.block_len, scn.sense_noise_var);
  });
  return reduce_estimate(values);
}

CMatrix mi_gradient(const CMatrix& cov, const FBlockSet& fb, int block_len,
                    double noise_var) {
  numkit::require_psd(cov, "mi_gradient");
  const double c = static_cast<double>(block_len) / noise_var;
  const RVector root = fb.lambdas.cwiseMax(0.0).cwiseSqrt();
  const CMatrix kernel = symmetrized_kernel(block_sum(cov, fb), fb.lambdas, c);
  const CMatrix inv = numkit::pd_inverse(kernel, "mi_gradient");
  const CMatrix core = root.asDiagonal() * inv * root.asDiagonal();

  CMatrix g = CMatrix::Zero(fb.tx_antennas, fb.tx_antennas);
  for (const auto& f : fb.blocks) g += f.adjoint() * core * f;
  return numkit::hermitize(c * g);
}

}  // namespace isacdrt::infomeasures
