// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#pragma once

#include <string>
#include <vector>

#include "isacdrt/model.hpp"
#include "isacdrt/types.hpp"

namespace isacdrt::experiments {

enum class Relation { LessEq, GreaterEq, Approx };

const char* relation_symbol(Relation r);

struct Check {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::Approx;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

Check make_check(std::string name, double lhs, Relation rel, double rhs,
                 double tolerance, std::string note = "");

struct VerificationReport {
  std::string scenario_summary;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  bool pass = false;

  void finalize();  // pass = all checks pass
};

struct TradeoffPoint {
  double alpha = 0.0;
  std::string scheme_label;   // "gaussian" or "haar"
  MCEstimate comm_rate;       // bits/symbol
  MCEstimate sensing_mi;      // bits
  double distortion_bound = 0.0;
  MCEstimate empirical_mse;
};

/// Scalar-scenario suite: constant-modulus signaling meets the MSE floor,
/// Gaussian signaling shows the Jensen gap, ergodic MI stays under the
/// full-power ceiling, and the rate-distortion chain is ordered.
VerificationReport verify_scalar(const Scenario& scn, long trials, RngStream rng,
                                 int jobs = 1);

/// Vector-scenario suite: both MI routes agree, both MMSE routes agree,
/// F-block identities, closed-form vs projected-gradient optimum, the
/// reverse-waterfilling fixed point, and distortion bounds on live schemes.
VerificationReport verify_vector(const Scenario& scn, long trials, RngStream rng,
                                 int jobs = 1);

/// Distortion bound chain per scheme: empirical MSE + 3 stderr >=
/// D(ergodic MI) >= D(MI at the statistical covariance) - 1e-9, with
/// equality of the last two for fixed-sample-covariance schemes.
VerificationReport verify_bounds(const Scenario& scn,
                                 const std::vector<SignalScheme>& schemes,
                                 long trials, RngStream rng, int jobs = 1);

/// The standard scheme set for verify_bounds: Gaussian i.i.d., colored
/// Gaussian / Haar / deterministic at the sensing-optimal covariance, plus
/// QPSK when the scenario is scalar.
std::vector<SignalScheme> default_bound_schemes(const Scenario& scn);

/// Sweep of covariances R(alpha) between the comm-optimal and sensing-optimal
/// endpoints; two rows per alpha (Gaussian signaling and Haar signaling) with
/// comm rate, sensing MI, distortion bound, and empirical MSE.
std::vector<TradeoffPoint> drt_curve(const Scenario& scn,
                                     const std::vector<CMatrix>& comm_channels,
                                     int n_points, long trials, RngStream rng,
                                     int jobs = 1);

/// Exact column set, in order: alpha, scheme, comm_rate_bits, comm_rate_stderr,
/// sensing_mi_bits, sensing_mi_stderr, distortion_bound, empirical_mse,
/// empirical_mse_stderr.
std::string to_csv(const std::vector<TradeoffPoint>& points);

/// {scenario, seed, checks:[{name, lhs, rhs, relation, tolerance, pass, note}], pass}
std::string to_json(const VerificationReport& report);

std::string scenario_summary(const Scenario& scn);

}  // namespace isacdrt::experiments
