// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#pragma once

#include "isacdrt/infomeasures.hpp"
#include "isacdrt/model.hpp"
#include "isacdrt/types.hpp"

namespace isacdrt::covopt {

using infomeasures::FBlockSet;

/// Water-filling allocation beta_i = (gamma - noise_var/(T lambda_i))^+ with
/// sum beta_i = budget; maximizes sum log2(1 + T/sigma^2 lambda_i beta_i).
struct WaterfillSolution {
  double water_level = 0.0;  // gamma
  RVector allocations;       // beta, aligned with the input lambdas
  double budget = 0.0;
};

struct OptimizerResult {
  CMatrix cov;         // PSD, trace = budget
  double mi_bits = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  bool converged = false;
};

struct PgOptions {
  double step_init = 1.0;
  double backtrack = 0.5;
  int max_halvings = 60;
  double armijo = 1e-4;
  double rel_tol = 1e-10;
  int max_iters = 10000;
};

WaterfillSolution waterfill(const RVector& lambdas, int block_len,
                            double noise_var, double budget);

/// True when the scenario's prior admits the closed-form optimum:
/// a single sensing antenna, or a prior of the form A kron I.
bool closed_form_supported(const Scenario& scn);

/// Sensing-MI-maximizing covariance in closed form for supported priors.
/// Unsupported structure throws ConfigError naming the projected-gradient
/// solver as the fallback.
OptimizerResult sensing_optimal_cov_closed(const Scenario& scn);

/// Projected gradient ascent on {R >= 0, tr R = budget} from the isotropic
/// start, with Armijo backtracking; projection = eigendecompose + simplex
/// projection + reassembly. Non-convergence is flagged, not thrown.
OptimizerResult optimize_cov_pg(const FBlockSet& fb, int block_len, double noise_var,
                                double budget, const PgOptions& opts = {});

/// Residuals of the achievability conditions at a feasible covariance:
/// how far S = sum F_i R F_i^H is from sharing the prior's eigenbasis, and
/// from carrying the water-filled spectrum with budget N_s * tr(R).
struct AchievabilityReport {
  double basis_alignment_residual = 0.0;    // off-diag of U_S^H Lambda U_S
  double waterfill_deviation = 0.0;         // max |eig(S) - waterfilled beta|
  double trace_gap = 0.0;                   // |sum eig(S) - N_s tr(R)|
  RVector spectrum;                         // eig(S), descending
  RVector waterfill_spectrum;               // target spectrum, descending
};

AchievabilityReport check_achievability(const CMatrix& cov, const FBlockSet& fb,
                                        int block_len, double noise_var,
                                        double budget);

}  // namespace isacdrt::covopt
