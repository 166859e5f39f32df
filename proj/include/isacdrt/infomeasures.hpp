// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#pragma once

#include <vector>

#include "isacdrt/model.hpp"
#include "isacdrt/types.hpp"

namespace isacdrt::infomeasures {

/// Eigen-structure of the target prior plus the block matrices that express
/// the sensing mutual information directly in terms of the signal's sample
/// covariance: MI = log2|I + T/sigma^2 * Lambda * sum_i F_i R_X F_i^H|.
///
/// Satisfies F_i^H F_i = I_M, sum_i F_i F_i^H = I, and
/// sum_i tr(F_i R F_i^H) = N_s tr(R) for every Hermitian R.
struct FBlockSet {
  CMatrix eigvecs;              // U: unitary eigenvectors of the prior
  RVector lambdas;              // prior eigenvalues, descending, all > 0
  std::vector<CMatrix> blocks;  // F_1..F_{N_s}, each (N_s*M) x M
  int sense_rx_antennas = 0;
  int tx_antennas = 0;

  int dim() const { return sense_rx_antennas * tx_antennas; }
};

/// log2(1 + |x|^2 * prior_var / noise_var), in bits.
double scalar_mi(double x_abs2, double prior_var, double noise_var);

/// Scalar MI at full power: the |x|^2 = P_T ceiling.
double scalar_mi_max(double transmit_power, double prior_var, double noise_var);

/// Prior must be Hermitian PD of dimension sense_rx * tx.
FBlockSet build_fblocks(const CMatrix& prior_cov, int sense_rx, int tx);

/// MI in bits for a fixed sample covariance, through the symmetrized
/// form log2|I + c * L^(1/2) S L^(1/2)| with S = sum_i F_i cov F_i^H.
/// Throws std::domain_error for non-PSD cov.
double mi_given_cov(const CMatrix& cov, const FBlockSet& fb, int block_len,
                    double noise_var);

/// MI in bits evaluated on the lifted signal directly:
/// log2|I + sigma^{-2} lift(X) prior lift(X)^H|. Reference route for tests
/// and cross-checks; agrees with mi_given_cov(sample_cov(X), ...).
double mi_direct(const CMatrix& x, const CMatrix& prior_cov, double noise_var);

/// Monte Carlo mean of mi_given_cov(sample_cov(X_t)) over i.i.d. signal
/// draws; collapses to one exact evaluation (std_err 0) for schemes with a
/// fixed sample covariance. Trials run on per-trial substreams with a
/// fixed-order reduction, so `jobs` does not change the result.
MCEstimate ergodic_sensing_mi(const SignalScheme& scheme, const Scenario& scn,
                              long trials, RngStream rng, int jobs = 1);

/// Gradient of the MI in nats w.r.t. the sample covariance:
/// G = c * sum_i F_i^H L^(1/2) (I + c L^(1/2) S L^(1/2))^{-1} L^(1/2) F_i,
/// Hermitian PSD. Multiply directional derivatives by log2(e) for bits.
CMatrix mi_gradient(const CMatrix& cov, const FBlockSet& fb, int block_len,
                    double noise_var);

}  // namespace isacdrt::infomeasures
