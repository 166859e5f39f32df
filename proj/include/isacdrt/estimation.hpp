// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#pragma once

#include "isacdrt/infomeasures.hpp"
#include "isacdrt/model.hpp"
#include "isacdrt/types.hpp"

namespace isacdrt::estimation {

using infomeasures::FBlockSet;

/// Posterior mean of a scalar target h ~ CN(0, prior_var) from y = h x + z.
Complex scalar_posterior_mean(Complex y, Complex x, double prior_var, double noise_var);

/// 1 / (1/prior_var + x_abs2/noise_var): the conditional MMSE for a known probe.
double scalar_mmse_given_x(double x_abs2, double prior_var, double noise_var);

enum class Averaging { MonteCarlo, Quadrature };

/// Average of scalar_mmse_given_x over the scheme's |X|^2 distribution.
/// Constant-modulus and deterministic schemes are exact (std_err 0);
/// Gaussian schemes use Monte Carlo by default or 64-node Gauss-Laguerre
/// quadrature. Non-scalar scenarios are a ConfigError.
MCEstimate scalar_avg_mmse(const SignalScheme& scheme, const Scenario& scn,
                           Averaging method, long trials, RngStream rng, int jobs = 1);

/// MMSE (posterior-mean) estimate of the N_s x M target response from one
/// received block. Cholesky on the (lift(X) prior lift(X)^H + noise I) Gram
/// matrix, eigendecomposition fallback when conditioning defeats it.
CMatrix vector_posterior_mean(const CMatrix& y_sense, const CMatrix& x,
                              const CMatrix& prior_cov, double noise_var);

/// tr[(Lambda^{-1} + T/sigma^2 sum_i F_i cov F_i^H)^{-1}]: the exact MMSE for
/// a fixed sample covariance. Throws std::domain_error for non-PSD cov.
double vector_mmse_given_cov(const CMatrix& cov, const FBlockSet& fb,
                             int block_len, double noise_var);

/// Same quantity in the unrotated coordinates,
/// tr[(prior^{-1} + T/sigma^2 (cov^* kron I))^{-1}]; dual route for checks.
double vector_mmse_unrotated(const CMatrix& cov, const CMatrix& prior_cov,
                             int block_len, int sense_rx, double noise_var);

/// Monte Carlo mean of ||H - H_hat||_F^2 over (X, H, Z) draws with the
/// posterior-mean estimator.
MCEstimate empirical_mse(const SignalScheme& scheme, const Scenario& scn,
                         long trials, RngStream rng, int jobs = 1);

/// empirical_mse plus the conditional-MMSE average over the same X stream
/// (common random numbers), for variance-cancelled comparisons.
struct PairedMse {
  MCEstimate mse;
  MCEstimate conditional_mmse;
};
PairedMse empirical_mse_paired(const SignalScheme& scheme, const Scenario& scn,
                               long trials, RngStream rng, int jobs = 1);

}  // namespace isacdrt::estimation
