// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#pragma once

#include "isacdrt/types.hpp"

namespace isacdrt::ratedistortion {

/// Reverse water-filling solution for an independent complex Gaussian vector
/// source: component i gets distortion min(lambda_i, mu) and rate
/// (log2(lambda_i / mu))^+ at the common water level mu.
struct ReverseWaterfill {
  double water_level = 0.0;
  RVector per_component_distortion;
  double rate_bits = 0.0;
  double distortion = 0.0;
};

/// R_G(D) = max(0, log2(prior_var / D)); D <= 0 is a domain error.
double scalar_rd(double distortion, double prior_var);

/// D_G(R) = prior_var * 2^{-R}; R >= 0.
double scalar_dr(double rate_bits, double prior_var);

/// Distortion-rate point at the given total rate (bits), lambdas > 0.
ReverseWaterfill vector_dr(double rate_bits, const RVector& lambdas);

/// Rate (bits) at the given total distortion, 0 < D <= sum(lambda).
/// Inverse of vector_dr. Out-of-range D is a domain error.
double vector_rd(double distortion, const RVector& lambdas);

/// Prior-weighted expected Hamming distortion of a binary detector:
/// prior_present * (1 - p_detect) + (1 - prior_present) * p_false_alarm.
double hamming_expected(double p_detect, double p_false_alarm, double prior_present);

/// Prior-free miss + false-alarm sum, 1 - P_D + P_FA.
double hamming_miss_plus_false_alarm(double p_detect, double p_false_alarm);

}  // namespace isacdrt::ratedistortion
