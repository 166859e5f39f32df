// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include "isacdrt/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include <json.hpp>

#include "isacdrt/capacity.hpp"
#include "isacdrt/covopt.hpp"
#include "isacdrt/estimation.hpp"
#include "isacdrt/infomeasures.hpp"
#include "isacdrt/numkit.hpp"
#include "isacdrt/ratedistortion.hpp"

namespace isacdrt::experiments {

using infomeasures::FBlockSet;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double bound_at_rate(double rate_bits, const RVector& lambdas) {
  return ratedistortion::vector_dr(std::max(rate_bits, 0.0), lambdas).distortion;
}

}  // namespace

const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::LessEq: return "<=";
    case Relation::GreaterEq: return ">=";
    case Relation::Approx: return "~=";
  }
  return "?";
}

Check make_check(std::string name, double lhs, Relation rel, double rhs,
                 double tolerance, std::string note) {
  Check c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.relation = rel;
  c.tolerance = tolerance;
  c.note = std::move(note);
  switch (rel) {
    case Relation::LessEq: c.pass = lhs <= rhs + tolerance; break;
    case Relation::GreaterEq: c.pass = lhs >= rhs - tolerance; break;
    case Relation::Approx: c.pass = std::abs(lhs - rhs) <= tolerance; break;
  }
  return c;
}

void VerificationReport::finalize() {
  pass = true;
  for (const auto& c : checks) pass = pass && c.pass;
}

std::string scenario_summary(const Scenario& scn) {
  std::string s;
  s += "tx=" + std::to_string(scn.tx_antennas);
  s += " sense_rx=" + std::to_string(scn.sense_rx_antennas);
  s += " comm_rx=" + std::to_string(scn.comm_rx_antennas);
  s += " block=" + std::to_string(scn.block_len);
  s += " power=" + fmt(scn.transmit_power);
  s += " sense_noise=" + fmt(scn.sense_noise_var);
  s += " comm_noise=" + fmt(scn.comm_noise_var);
  s += " prior_trace=" + fmt(scn.target_prior_cov.real().trace());
  return s;
}

VerificationReport verify_scalar(const Scenario& scn, long trials, RngStream rng,
                                 int jobs) {
  scn.validate();
  if (!scn.is_scalar() || scn.sense_rx_antennas != 1) {
    throw ConfigError("verify_scalar: requires M = T = N_s = 1");
  }

  const double prior_var = scn.target_prior_cov(0, 0).real();
  const double noise_var = scn.sense_noise_var;
  const double mi_ceiling =
      infomeasures::scalar_mi_max(scn.transmit_power, prior_var, noise_var);
  const double mse_floor = ratedistortion::scalar_dr(mi_ceiling, prior_var);

  const SignalScheme psk = ConstantModulusPsk{4};
  const SignalScheme gauss = GaussianIid{};

  const MCEstimate psk_mse = estimation::empirical_mse(psk, scn, trials, rng.derive(1), jobs);
  const MCEstimate g_mse = estimation::empirical_mse(gauss, scn, trials, rng.derive(2), jobs);
  const MCEstimate g_mi =
      infomeasures::ergodic_sensing_mi(gauss, scn, trials, rng.derive(3), jobs);

  VerificationReport report;
  report.scenario_summary = scenario_summary(scn);
  report.seed = rng.seed;

  report.checks.push_back(make_check(
      "prop2_psk_mse", psk_mse.mean, Relation::Approx, mse_floor, 3.0 * psk_mse.std_err,
      "constant-modulus empirical MSE vs the distortion floor"));
  report.checks.push_back(make_check(
      "gaussian_mse_above_floor", g_mse.mean, Relation::GreaterEq, mse_floor,
      3.0 * g_mse.std_err, "random-amplitude signaling cannot beat the floor"));
  report.checks.push_back(make_check(
      "gaussian_mi_below_ceiling", g_mi.mean, Relation::LessEq, mi_ceiling,
      3.0 * g_mi.std_err, "ergodic MI vs the full-power ceiling"));

  const double rd_of_mse = ratedistortion::scalar_rd(g_mse.mean, prior_var);
  const double slope = 1.0 / (g_mse.mean * std::log(2.0));
  report.checks.push_back(make_check(
      "rd_chain_order", rd_of_mse, Relation::LessEq, g_mi.mean,
      3.0 * (g_mi.std_err + slope * g_mse.std_err),
      "rate-distortion of the achieved MSE stays below the ergodic MI"));

  report.finalize();
  return report;
}

namespace {

struct BoundRow {
  std::string label;
  MCEstimate mi;
  MCEstimate mse;
  double bound_ergodic = 0.0;
  double bound_statistical = 0.0;
  bool fixed_cov = false;
};

BoundRow bound_row(const SignalScheme& scheme, const Scenario& scn, const FBlockSet& fb,
                   long trials, RngStream rng, int jobs) {
  BoundRow row;
  row.label = scheme_label(scheme);
  row.fixed_cov = has_fixed_sample_cov(scheme);
  row.mi = infomeasures::ergodic_sensing_mi(scheme, scn, trials, rng.derive(11), jobs);
  row.mse = estimation::empirical_mse(scheme, scn, trials, rng.derive(12), jobs);
  const double mi_stat = infomeasures::mi_given_cov(
      statistical_cov(scheme, scn), fb, scn.block_len, scn.sense_noise_var);
  row.bound_ergodic = bound_at_rate(row.mi.mean, fb.lambdas);
  row.bound_statistical = bound_at_rate(mi_stat, fb.lambdas);
  return row;
}

}  // namespace

VerificationReport verify_vector(const Scenario& scn, long trials, RngStream rng,
                                 int jobs) {
  scn.validate();
  const FBlockSet fb = infomeasures::build_fblocks(
      scn.target_prior_cov, scn.sense_rx_antennas, scn.tx_antennas);
  const Index d = fb.dim();

  VerificationReport report;
  report.scenario_summary = scenario_summary(scn);
  report.seed = rng.seed;

  // (1)/(2): both MI routes and both MMSE routes agree on sampled signals.
  {
    double mi_dev = 0.0;
    double mmse_dev = 0.0;
    for (int k = 0; k < 10; ++k) {
      Rng draw_rng(rng.derive(20 + static_cast<std::uint64_t>(k)));
      const CMatrix x = sample_signal(GaussianIid{}, scn, draw_rng);
      const CMatrix r = sample_cov(x);
      mi_dev = std::max(
          mi_dev,
          std::abs(infomeasures::mi_direct(x, scn.target_prior_cov, scn.sense_noise_var) -
                   infomeasures::mi_given_cov(r, fb, scn.block_len, scn.sense_noise_var)));
      mmse_dev = std::max(
          mmse_dev,
          std::abs(estimation::vector_mmse_given_cov(r, fb, scn.block_len,
                                                     scn.sense_noise_var) -
                   estimation::vector_mmse_unrotated(r, scn.target_prior_cov,
                                                     scn.block_len,
                                                     scn.sense_rx_antennas,
                                                     scn.sense_noise_var)));
    }
    report.checks.push_back(make_check("mi_forms_agree", mi_dev, Relation::LessEq, 0.0,
                                       1e-9, "lifted vs sample-covariance MI route"));
    report.checks.push_back(make_check("mmse_forms_agree", mmse_dev, Relation::LessEq,
                                       0.0, 1e-9, "rotated vs unrotated MMSE route"));
  }

  // (3): F-block identities.
  {
    double resid = 0.0;
    const CMatrix eye_m = CMatrix::Identity(scn.tx_antennas, scn.tx_antennas);
    CMatrix outer = CMatrix::Zero(d, d);
    for (const auto& f : fb.blocks) {
      resid = std::max(resid, (f.adjoint() * f - eye_m).cwiseAbs().maxCoeff());
      outer += f * f.adjoint();
    }
    resid = std::max(resid, (outer - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
    Rng block_rng(rng.derive(30));
    CMatrix probe = block_rng.cgaussian_matrix(scn.tx_antennas, scn.tx_antennas, 1.0);
    probe = numkit::hermitize(probe * probe.adjoint());
    double traced = 0.0;
    for (const auto& f : fb.blocks) traced += (f * probe * f.adjoint()).real().trace();
    resid = std::max(resid, std::abs(traced - scn.sense_rx_antennas *
                                                  probe.real().trace()));
    report.checks.push_back(make_check("fblock_identities", resid, Relation::LessEq, 0.0,
                                       1e-10, "isometry, completeness, trace scaling"));
  }

  // Optimal covariance: closed form when the structure allows, else projected
  // gradient; (4) cross-checks the two on supported structures.
  covopt::OptimizerResult opt;
  const bool supported = covopt::closed_form_supported(scn);
  if (supported) {
    opt = covopt::sensing_optimal_cov_closed(scn);
    const covopt::OptimizerResult pg = covopt::optimize_cov_pg(
        fb, scn.block_len, scn.sense_noise_var, scn.transmit_power);
    report.checks.push_back(make_check("closed_vs_pg", std::abs(opt.mi_bits - pg.mi_bits),
                                       Relation::LessEq, 0.0, 1e-6,
                                       "optimal MI, closed form vs projected gradient"));
  } else {
    opt = covopt::optimize_cov_pg(fb, scn.block_len, scn.sense_noise_var,
                                  scn.transmit_power);
    report.checks.push_back(make_check("closed_vs_pg", 0.0, Relation::LessEq, 0.0, 1.0,
                                       "skipped: prior structure has no closed form"));
  }

  // (5): reverse water-filling fixed point on the water-filled spectrum.
  {
    const covopt::WaterfillSolution wf =
        covopt::waterfill(fb.lambdas, scn.block_len, scn.sense_noise_var,
                          scn.sense_rx_antennas * scn.transmit_power);
    const double c = scn.block_len / scn.sense_noise_var;
    double mi_wf = 0.0;
    double mmse_wf = 0.0;
    for (Index i = 0; i < d; ++i) {
      const double gain = c * fb.lambdas(i) * wf.allocations(i);
      mi_wf += std::log2(1.0 + gain);
      mmse_wf += fb.lambdas(i) / (1.0 + gain);
    }
    report.checks.push_back(make_check(
        "rd_fixed_point", ratedistortion::vector_rd(mmse_wf, fb.lambdas),
        Relation::Approx, mi_wf, 1e-9,
        "rate-distortion of the water-filled MMSE returns the water-filled MI"));
  }

  // (6): Haar signaling at the optimal covariance achieves the exact MMSE.
  if (scn.block_len >= scn.tx_antennas) {
    const SignalScheme haar = HaarFixedCovariance{opt.cov};
    const MCEstimate mse =
        estimation::empirical_mse(haar, scn, trials, rng.derive(40), jobs);
    const double exact = estimation::vector_mmse_given_cov(opt.cov, fb, scn.block_len,
                                                           scn.sense_noise_var);
    report.checks.push_back(make_check("haar_mse_matches_mmse", mse.mean,
                                       Relation::Approx, exact, 3.0 * mse.std_err,
                                       "fixed-sample-covariance signaling at the optimum"));
  } else {
    report.checks.push_back(make_check("haar_mse_matches_mmse", 0.0, Relation::Approx,
                                       0.0, 1.0, "skipped: needs T >= M"));
  }

  // (7): distortion bound below the empirical MSE for a live scheme set.
  {
    std::vector<SignalScheme> schemes;
    schemes.emplace_back(GaussianIid{});
    schemes.emplace_back(GaussianColored{opt.cov});
    if (scn.block_len >= scn.tx_antennas) {
      schemes.emplace_back(HaarFixedCovariance{opt.cov});
      schemes.emplace_back(Deterministic{deterministic_block(opt.cov, scn.block_len)});
    }
    std::uint64_t key = 50;
    for (const auto& scheme : schemes) {
      const BoundRow row = bound_row(scheme, scn, fb, trials, rng.derive(key++), jobs);
      report.checks.push_back(make_check(
          "bound_below_mse_" + row.label, row.mse.mean, Relation::GreaterEq,
          row.bound_ergodic, 3.0 * row.mse.std_err, "distortion bound vs empirical MSE"));
    }
  }

  report.finalize();
  return report;
}

std::vector<SignalScheme> default_bound_schemes(const Scenario& scn) {
  const covopt::OptimizerResult opt =
      covopt::closed_form_supported(scn)
          ? covopt::sensing_optimal_cov_closed(scn)
          : covopt::optimize_cov_pg(
                infomeasures::build_fblocks(scn.target_prior_cov, scn.sense_rx_antennas,
                                            scn.tx_antennas),
                scn.block_len, scn.sense_noise_var, scn.transmit_power);
  std::vector<SignalScheme> schemes;
  schemes.emplace_back(GaussianIid{});
  schemes.emplace_back(GaussianColored{opt.cov});
  if (scn.block_len >= scn.tx_antennas) {
    schemes.emplace_back(HaarFixedCovariance{opt.cov});
    schemes.emplace_back(Deterministic{deterministic_block(opt.cov, scn.block_len)});
  }
  if (scn.is_scalar()) schemes.emplace_back(ConstantModulusPsk{4});
  return schemes;
}

VerificationReport verify_bounds(const Scenario& scn,
                                 const std::vector<SignalScheme>& schemes,
                                 long trials, RngStream rng, int jobs) {
  scn.validate();
  const FBlockSet fb = infomeasures::build_fblocks(
      scn.target_prior_cov, scn.sense_rx_antennas, scn.tx_antennas);

  VerificationReport report;
  report.scenario_summary = scenario_summary(scn);
  report.seed = rng.seed;

  std::uint64_t key = 1;
  int ordinal = 0;
  for (const auto& scheme : schemes) {
    const BoundRow row = bound_row(scheme, scn, fb, trials, rng.derive(key++), jobs);
    const std::string tag = std::to_string(ordinal++) + "_" + row.label;
    report.checks.push_back(make_check(
        tag + "_mse_above_bound", row.mse.mean, Relation::GreaterEq, row.bound_ergodic,
        3.0 * row.mse.std_err, "empirical MSE vs distortion of the ergodic MI"));
    report.checks.push_back(make_check(
        tag + "_jensen_order", row.bound_ergodic, Relation::GreaterEq,
        row.bound_statistical, 1e-9,
        "ergodic-MI bound vs statistical-covariance bound"));
    if (row.fixed_cov) {
      report.checks.push_back(make_check(
          tag + "_jensen_equality", row.bound_ergodic, Relation::Approx,
          row.bound_statistical, 1e-9, "fixed sample covariance closes the gap"));
    }
  }

  report.finalize();
  return report;
}

std::vector<TradeoffPoint> drt_curve(const Scenario& scn,
                                     const std::vector<CMatrix>& comm_channels,
                                     int n_points, long trials, RngStream rng,
                                     int jobs) {
  scn.validate();
  if (n_points < 2) throw ConfigError("drt_curve: need at least 2 points");
  if (scn.transmit_power <= 0.0) throw ConfigError("drt_curve: needs transmit_power > 0");
  if (scn.block_len < scn.tx_antennas) throw ConfigError("drt_curve: needs T >= M");
  if (comm_channels.empty()) throw ConfigError("drt_curve: no comm channel samples");
  double channel_scale = 0.0;
  for (const auto& h : comm_channels) {
    if (h.rows() != scn.comm_rx_antennas || h.cols() != scn.tx_antennas) {
      throw ConfigError("drt_curve: comm channel dimensions mismatch");
    }
    channel_scale = std::max(channel_scale, h.cwiseAbs().maxCoeff());
  }
  if (channel_scale <= 0.0) throw ConfigError("drt_curve: comm channel is zero");

  const FBlockSet fb = infomeasures::build_fblocks(
      scn.target_prior_cov, scn.sense_rx_antennas, scn.tx_antennas);

  // Comm endpoint: classical water-filling on the average channel Gram matrix.
  CMatrix gram = CMatrix::Zero(scn.tx_antennas, scn.tx_antennas);
  for (const auto& h : comm_channels) gram += h.adjoint() * h;
  gram = numkit::hermitize(gram / static_cast<double>(comm_channels.size()));
  const auto gram_eig = numkit::hermitian_eig(gram);
  RVector alloc = RVector::Zero(gram_eig.lambdas.size());
  {
    // Zero modes get no power; water-fill the rest.
    std::vector<Index> live;
    for (Index i = 0; i < gram_eig.lambdas.size(); ++i) {
      if (gram_eig.lambdas(i) > 1e-14 * gram_eig.lambdas(0)) live.push_back(i);
    }
    RVector gains(static_cast<Index>(live.size()));
    for (std::size_t i = 0; i < live.size(); ++i) gains(static_cast<Index>(i)) = gram_eig.lambdas(live[i]);
    const covopt::WaterfillSolution wf =
        covopt::waterfill(gains, 1, scn.comm_noise_var, scn.transmit_power);
    for (std::size_t i = 0; i < live.size(); ++i) alloc(live[i]) = wf.allocations(static_cast<Index>(i));
  }
  const CMatrix comm_cov = numkit::hermitize(
      gram_eig.eigvecs * alloc.cast<Complex>().asDiagonal() * gram_eig.eigvecs.adjoint());

  // Sensing endpoint.
  const covopt::OptimizerResult sens =
      covopt::closed_form_supported(scn)
          ? covopt::sensing_optimal_cov_closed(scn)
          : covopt::optimize_cov_pg(fb, scn.block_len, scn.sense_noise_var,
                                    scn.transmit_power);

  std::vector<TradeoffPoint> points;
  points.reserve(2 * static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double alpha = static_cast<double>(i) / (n_points - 1);
    CMatrix mix = numkit::hermitize((1.0 - alpha) * comm_cov + alpha * sens.cov);
    const double tr = mix.real().trace();
    if (tr > 0.0) mix *= scn.transmit_power / tr;

    const RngStream point_rng = rng.derive(100 + static_cast<std::uint64_t>(i));

    TradeoffPoint g;
    g.alpha = alpha;
    g.scheme_label = "gaussian";
    g.comm_rate = capacity::ergodic_gaussian_rate(comm_channels, mix, scn.comm_noise_var);
    g.sensing_mi = infomeasures::ergodic_sensing_mi(GaussianColored{mix}, scn, trials,
                                                    point_rng.derive(1), jobs);
    g.distortion_bound = bound_at_rate(g.sensing_mi.mean, fb.lambdas);
    g.empirical_mse = estimation::empirical_mse(GaussianColored{mix}, scn, trials,
                                                point_rng.derive(2), jobs);
    points.push_back(std::move(g));

    TradeoffPoint h;
    h.alpha = alpha;
    h.scheme_label = "haar";
    const capacity::CapacityResult cap = capacity::high_snr_rate(
        comm_channels, mix, scn.comm_noise_var, scn.block_len);
    h.comm_rate = MCEstimate{cap.rate_bits_per_symbol, cap.rate_std_err,
                             static_cast<long>(comm_channels.size())};
    h.sensing_mi = MCEstimate{
        infomeasures::mi_given_cov(mix, fb, scn.block_len, scn.sense_noise_var), 0.0, 1};
    h.distortion_bound = bound_at_rate(h.sensing_mi.mean, fb.lambdas);
    h.empirical_mse = estimation::empirical_mse(HaarFixedCovariance{mix}, scn, trials,
                                                point_rng.derive(3), jobs);
    points.push_back(std::move(h));
  }
  return points;
}

std::string to_csv(const std::vector<TradeoffPoint>& points) {
  std::string out =
      "alpha,scheme,comm_rate_bits,comm_rate_stderr,sensing_mi_bits,"
      "sensing_mi_stderr,distortion_bound,empirical_mse,empirical_mse_stderr\n";
  for (const auto& p : points) {
    out += fmt(p.alpha);
    out += ',' + p.scheme_label;
    out += ',' + fmt(p.comm_rate.mean);
    out += ',' + fmt(p.comm_rate.std_err);
    out += ',' + fmt(p.sensing_mi.mean);
    out += ',' + fmt(p.sensing_mi.std_err);
    out += ',' + fmt(p.distortion_bound);
    out += ',' + fmt(p.empirical_mse.mean);
    out += ',' + fmt(p.empirical_mse.std_err);
    out += '\n';
  }
  return out;
}

std::string to_json(const VerificationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"relation", relation_symbol(c.relation)},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass},
                      {"note", c.note}});
  }
  const nlohmann::json doc = {{"scenario", report.scenario_summary},
                              {"seed", report.seed},
                              {"checks", checks},
                              {"pass", report.pass}};
  return doc.dump(2) + "\n";
}

}  // namespace isacdrt::experiments
