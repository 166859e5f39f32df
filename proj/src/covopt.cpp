// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include "isacdrt/covopt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isacdrt/numkit.hpp"

namespace isacdrt::covopt {

using infomeasures::build_fblocks;
using infomeasures::mi_given_cov;
using infomeasures::mi_gradient;

WaterfillSolution waterfill(const RVector& lambdas, int block_len, double noise_var,
                            double budget) {
  const Index n = lambdas.size();
  if (n == 0) throw std::domain_error("waterfill: empty spectrum");
  for (Index i = 0; i < n; ++i) {
    if (lambdas(i) <= 0.0) throw std::domain_error("waterfill: lambdas must be > 0");
  }
  if (budget < 0.0) throw std::domain_error("waterfill: budget must be >= 0");

  const auto level_of = [&](Index i) { return noise_var / (block_len * lambdas(i)); };

  WaterfillSolution out;
  out.budget = budget;
  out.allocations = RVector::Zero(n);
  if (budget == 0.0) {
    double floor = level_of(0);
    for (Index i = 1; i < n; ++i) floor = std::min(floor, level_of(i));
    out.water_level = floor;
    return out;
  }

  // sum_i (gamma - floor_i)^+ is piecewise linear and increasing in gamma;
  // bisect between the lowest floor and the level that spends the budget
  // even if every component were active.
  double lo = level_of(0);
  double hi = 0.0;
  for (Index i = 0; i < n; ++i) {
    lo = std::min(lo, level_of(i));
    hi = std::max(hi, level_of(i));
  }
  hi += budget;
  const auto spent = [&](double gamma) {
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) acc += std::max(gamma - level_of(i), 0.0);
    return acc;
  };
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(hi, 1.0); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (spent(mid) >= budget) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  double gamma = 0.5 * (lo + hi);

  // Snap to the exact piecewise-linear solution given the active set.
  Index active = 0;
  double floor_sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (gamma > level_of(i)) {
      ++active;
      floor_sum += level_of(i);
    }
  }
  if (active > 0) gamma = (budget + floor_sum) / static_cast<double>(active);
  out.water_level = gamma;
  for (Index i = 0; i < n; ++i) out.allocations(i) = std::max(gamma - level_of(i), 0.0);
  return out;
}

namespace {

/// Detects a prior of the form A kron I_{N_s} and extracts A.
bool kron_identity_factor(const CMatrix& prior, int sense_rx, int tx, CMatrix* a_out) {
  CMatrix a(tx, tx);
  for (int j = 0; j < tx; ++j) {
    for (int k = 0; k < tx; ++k) {
      a(j, k) = prior(static_cast<Index>(j) * sense_rx, static_cast<Index>(k) * sense_rx);
    }
  }
  const CMatrix eye = CMatrix::Identity(sense_rx, sense_rx);
  const CMatrix rebuilt = numkit::kron(a, eye);
  const double scale = std::max(prior.cwiseAbs().maxCoeff(), 1e-300);
  if ((rebuilt - prior).cwiseAbs().maxCoeff() > 1e-10 * scale) return false;
  if (a_out) *a_out = numkit::hermitize(a);
  return true;
}

OptimizerResult closed_form_from_basis(const CMatrix& eigvecs, const RVector& lambdas,
                                       const Scenario& scn) {
  const WaterfillSolution wf =
      waterfill(lambdas, scn.block_len, scn.sense_noise_var, scn.transmit_power);
  const CMatrix shaped =
      eigvecs * wf.allocations.cast<Complex>().asDiagonal() * eigvecs.adjoint();

  OptimizerResult out;
  out.cov = shaped.conjugate();  // the MI kernel sees cov^*, so undo it here
  const auto fb = build_fblocks(scn.target_prior_cov, scn.sense_rx_antennas,
                                scn.tx_antennas);
  out.mi_bits = mi_given_cov(out.cov, fb, scn.block_len, scn.sense_noise_var);
  out.iterations = 0;
  out.kkt_residual = 0.0;
  out.converged = true;
  return out;
}

}  // namespace

bool closed_form_supported(const Scenario& scn) {
  if (scn.sense_rx_antennas == 1) return true;
  return kron_identity_factor(scn.target_prior_cov, scn.sense_rx_antennas,
                              scn.tx_antennas, nullptr);
}

OptimizerResult sensing_optimal_cov_closed(const Scenario& scn) {
  scn.validate();
  if (scn.sense_rx_antennas == 1) {
    const auto eig = numkit::hermitian_eig(scn.target_prior_cov);
    return closed_form_from_basis(eig.eigvecs, eig.lambdas, scn);
  }
  CMatrix a;
  if (kron_identity_factor(scn.target_prior_cov, scn.sense_rx_antennas, scn.tx_antennas,
                           &a)) {
    const auto eig = numkit::hermitian_eig(a);
    return closed_form_from_basis(eig.eigvecs, eig.lambdas, scn);
  }
  throw ConfigError(
      "sensing_optimal_cov_closed: prior has no supported structure "
      "(single sensing antenna or A kron I); use the projected-gradient solver");
}

namespace {

CMatrix project_feasible(const CMatrix& r, double budget) {
  const auto eig = numkit::hermitian_eig(r);
  const RVector projected = numkit::project_trace_simplex(eig.lambdas, budget);
  return numkit::hermitize(eig.eigvecs * projected.cast<Complex>().asDiagonal() *
                           eig.eigvecs.adjoint());
}

}  // namespace

OptimizerResult optimize_cov_pg(const FBlockSet& fb, int block_len, double noise_var,
                                double budget, const PgOptions& opts) {
  if (budget < 0.0) throw std::domain_error("optimize_cov_pg: budget must be >= 0");
  const Index m = fb.tx_antennas;
  const double log2e = std::numbers::log2e;

  OptimizerResult out;
  out.cov = (budget / static_cast<double>(m)) * CMatrix::Identity(m, m);
  out.mi_bits = mi_given_cov(out.cov, fb, block_len, noise_var);
  if (budget == 0.0) {
    out.converged = true;
    return out;
  }

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const CMatrix grad = mi_gradient(out.cov, fb, block_len, noise_var);
    double step = opts.step_init;
    CMatrix candidate;
    double candidate_mi = out.mi_bits;
    bool accepted = false;
    for (int h = 0; h < opts.max_halvings; ++h) {
      candidate = project_feasible(out.cov + step * grad, budget);
      candidate_mi = mi_given_cov(candidate, fb, block_len, noise_var);
      const double predicted =
          log2e * (grad.cwiseProduct((candidate - out.cov).conjugate())).sum().real();
      if (candidate_mi >= out.mi_bits + opts.armijo * predicted) {
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    out.iterations = iter + 1;
    if (!accepted) break;

    const double gain = candidate_mi - out.mi_bits;
    out.cov = candidate;
    out.mi_bits = candidate_mi;
    if (gain <= opts.rel_tol * std::max(std::abs(out.mi_bits), 1.0)) {
      out.converged = true;
      break;
    }
  }

  const CMatrix grad = mi_gradient(out.cov, fb, block_len, noise_var);
  out.kkt_residual = (out.cov - project_feasible(out.cov + grad, budget)).norm();
  if (!out.converged && out.iterations < opts.max_iters) {
    // Line search stalled: no ascent direction left at floating-point scale.
    out.converged = true;
  }
  return out;
}

AchievabilityReport check_achievability(const CMatrix& cov, const FBlockSet& fb,
                                        int block_len, double noise_var, double budget) {
  numkit::require_psd(cov, "check_achievability");
  const Index d = fb.dim();
  CMatrix s = CMatrix::Zero(d, d);
  for (const auto& f : fb.blocks) s += f * cov * f.adjoint();
  s = numkit::hermitize(s);

  const auto eig_s = numkit::hermitian_eig(s);

  AchievabilityReport report;
  report.spectrum = eig_s.lambdas;

  // Does the basis that diagonalizes S also keep the prior diagonal?
  const CMatrix rotated = eig_s.eigvecs.adjoint() *
                          fb.lambdas.cast<Complex>().asDiagonal().toDenseMatrix() *
                          eig_s.eigvecs;
  double offdiag = 0.0;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      if (i != j) offdiag = std::max(offdiag, std::abs(rotated(i, j)));
    }
  }
  report.basis_alignment_residual = offdiag;

  const WaterfillSolution wf = waterfill(fb.lambdas, block_len, noise_var,
                                         static_cast<double>(fb.sense_rx_antennas) *
                                             budget);
  // Both spectra descend in their own order; compare against the target
  // allocation sorted descending.
  RVector target = wf.allocations;
  std::sort(target.data(), target.data() + target.size(), std::greater<double>());
  report.waterfill_spectrum = target;
  report.waterfill_deviation = (eig_s.lambdas - target).cwiseAbs().maxCoeff();
  report.trace_gap = std::abs(eig_s.lambdas.sum() -
                              static_cast<double>(fb.sense_rx_antennas) * budget);
  return report;
}

}  // namespace isacdrt::covopt
