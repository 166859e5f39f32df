// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace isacdrt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;  // column-major; vec() stacks columns
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Invalid scenario, scheme, or config input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown: failed factorization, non-convergence, singular solve.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Monte Carlo estimate: sample mean, standard error of the mean, trial count.
/// Exact (single-evaluation) results carry std_err = 0 and trials = 1.
struct MCEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  long trials = 0;
};

/// Two-pass mean/stderr over a trial-indexed buffer. The summation order is
/// fixed by the buffer order, so results do not depend on worker count.
MCEstimate reduce_estimate(const std::vector<double>& values);

}  // namespace isacdrt
