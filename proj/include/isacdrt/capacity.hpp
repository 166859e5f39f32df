// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#pragma once

#include <vector>

#include "isacdrt/types.hpp"

namespace isacdrt::capacity {

/// High-SNR ergodic rate under a fixed sample covariance.
struct CapacityResult {
  double rate_bits_per_symbol = 0.0;
  int rank = 0;             // L of the first channel sample (a.s. constant)
  double c0_bits = 0.0;
  double pre_log = 0.0;     // 1 - L/(2T)
  double rate_std_err = 0.0;
  bool pseudo_det_used = false;  // some H R H^H sample was rank-deficient
};

/// log2|I + noise_var^{-1} H R H^H| in bits per symbol.
double gaussian_rate(const CMatrix& channel, const CMatrix& cov, double noise_var);

/// Sample mean and stderr of gaussian_rate over provided channel draws.
MCEstimate ergodic_gaussian_rate(const std::vector<CMatrix>& channels,
                                 const CMatrix& cov, double noise_var);

/// Rate-offset constant of the fixed-sample-covariance high-SNR expansion:
/// (L/T) [ (T - L/2) log2(T/e) - log2 Gamma(T) + log2(2 sqrt(pi)) ].
/// Vanishes as T grows.
double c0(int rank, int block_len);

/// Per channel sample: W = H R H^H, L = numerical_rank(W), contribution
/// (1 - L/(2T)) * log2-pseudo-det(W / noise_var) + c0(L, T); averaged over
/// samples. All-zero W is a domain error (rate undefined at rank 0).
CapacityResult high_snr_rate(const std::vector<CMatrix>& channels, const CMatrix& cov,
                             double noise_var, int block_len, double rank_rtol = 1e-10);

}  // namespace isacdrt::capacity
