// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include "isacdrt/ratedistortion.hpp"

#include <algorithm>
#include <cmath>

namespace isacdrt::ratedistortion {

namespace {

constexpr double kRelTol = 1e-12;
constexpr int kMaxIters = 200;

void require_positive(const RVector& lambdas) {
  if (lambdas.size() == 0) throw std::domain_error("reverse waterfill: empty spectrum");
  for (Index i = 0; i < lambdas.size(); ++i) {
    if (lambdas(i) <= 0.0) throw std::domain_error("reverse waterfill: lambdas must be > 0");
  }
}

double rate_at_level(const RVector& lambdas, double mu) {
  double rate = 0.0;
  for (Index i = 0; i < lambdas.size(); ++i) {
    if (lambdas(i) > mu) rate += std::log2(lambdas(i) / mu);
  }
  return rate;
}

double distortion_at_level(const RVector& lambdas, double mu) {
  double d = 0.0;
  for (Index i = 0; i < lambdas.size(); ++i) d += std::min(lambdas(i), mu);
  return d;
}

ReverseWaterfill solution_at_level(const RVector& lambdas, double mu) {
  ReverseWaterfill out;
  out.water_level = mu;
  out.per_component_distortion = lambdas.cwiseMin(mu);
  out.rate_bits = rate_at_level(lambdas, mu);
  out.distortion = out.per_component_distortion.sum();
  return out;
}

}  // namespace

double scalar_rd(double distortion, double prior_var) {
  if (distortion <= 0.0) throw std::domain_error("scalar_rd: distortion must be > 0");
  if (prior_var <= 0.0) throw std::domain_error("scalar_rd: prior variance must be > 0");
  return std::max(0.0, std::log2(prior_var / distortion));
}

double scalar_dr(double rate_bits, double prior_var) {
  if (rate_bits < 0.0) throw std::domain_error("scalar_dr: rate must be >= 0");
  if (prior_var <= 0.0) throw std::domain_error("scalar_dr: prior variance must be > 0");
  return prior_var * std::exp2(-rate_bits);
}

ReverseWaterfill vector_dr(double rate_bits, const RVector& lambdas) {
  require_positive(lambdas);
  if (rate_bits < 0.0) throw std::domain_error("vector_dr: rate must be >= 0");
  const double mu_max = lambdas.maxCoeff();
  if (rate_bits == 0.0) return solution_at_level(lambdas, mu_max);

  // rate_at_level is continuous and strictly decreasing to 0 at mu_max.
  double lo = mu_max;
  while (rate_at_level(lambdas, lo) < rate_bits) lo *= 0.5;
  double hi = std::min(2.0 * lo, mu_max);
  for (int it = 0; it < kMaxIters && (hi - lo) > kRelTol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rate_at_level(lambdas, mid) >= rate_bits) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return solution_at_level(lambdas, 0.5 * (lo + hi));
}

double vector_rd(double distortion, const RVector& lambdas) {
  require_positive(lambdas);
  const double total = lambdas.sum();
  if (distortion <= 0.0 || distortion > total * (1.0 + 1e-12)) {
    throw std::domain_error("vector_rd: distortion must be in (0, sum lambda]");
  }
  if (distortion >= total) return 0.0;

  double lo = 0.0;
  double hi = lambdas.maxCoeff();
  for (int it = 0; it < kMaxIters && (hi - lo) > kRelTol * std::max(hi, 1e-300); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (distortion_at_level(lambdas, mid) >= distortion) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return rate_at_level(lambdas, 0.5 * (lo + hi));
}

namespace {

void require_prob(double p, const char* who) {
  if (p < 0.0 || p > 1.0) throw std::domain_error(std::string(who) + ": probability out of [0,1]");
}

}  // namespace

double hamming_expected(double p_detect, double p_false_alarm, double prior_present) {
  require_prob(p_detect, "hamming_expected");
  require_prob(p_false_alarm, "hamming_expected");
  require_prob(prior_present, "hamming_expected");
  return prior_present * (1.0 - p_detect) + (1.0 - prior_present) * p_false_alarm;
}

double hamming_miss_plus_false_alarm(double p_detect, double p_false_alarm) {
  require_prob(p_detect, "hamming_miss_plus_false_alarm");
  require_prob(p_false_alarm, "hamming_miss_plus_false_alarm");
  return 1.0 - p_detect + p_false_alarm;
}

}  // namespace isacdrt::ratedistortion
