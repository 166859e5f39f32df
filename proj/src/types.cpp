// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include "isacdrt/types.hpp"

#include <cmath>

namespace isacdrt {

MCEstimate reduce_estimate(const std::vector<double>& values) {
  MCEstimate out;
  out.trials = static_cast<long>(values.size());
  if (values.empty()) return out;

  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());

  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) {
    const double d = v - out.mean;
    ss += d * d;
  }
  const auto n = static_cast<double>(values.size());
  out.std_err = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

}  // namespace isacdrt
