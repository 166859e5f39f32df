// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "isacdrt/capacity.hpp"
#include "isacdrt/config.hpp"
#include "isacdrt/covopt.hpp"
#include "isacdrt/experiments.hpp"
#include "isacdrt/infomeasures.hpp"
#include "isacdrt/numkit.hpp"

namespace {

using namespace isacdrt;

constexpr int kExitOk = 0;
constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct CommonArgs {
  std::string config_path;
  std::optional<long> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool with_trials = true) {
  cmd->add_option("--config", args->config_path, "scenario/run config file")
      ->required();
  if (with_trials) cmd->add_option("--trials", args->trials, "Monte Carlo trials");
  cmd->add_option("--seed", args->seed, "master seed (overrides config)");
  cmd->add_option("--jobs", args->jobs, "worker threads (results are jobs-invariant)");
  cmd->add_option("--out", args->out, "output file (default from config, else stdout)");
}

struct Resolved {
  config::CliConfig cfg;
  long trials;
  std::uint64_t seed;
  int jobs;
  std::string out;
};

Resolved resolve(const CommonArgs& args) {
  Resolved r{config::parse_config_file(args.config_path), 0, 0, 1, {}};
  r.trials = args.trials.value_or(r.cfg.run.trials);
  r.seed = args.seed.value_or(r.cfg.run.seed);
  r.jobs = r.cfg.run.jobs;
  if (const char* env = std::getenv("ISAC_DRT_JOBS")) {
    try {
      r.jobs = std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError("ISAC_DRT_JOBS is not an integer");
    }
  }
  if (args.jobs) r.jobs = *args.jobs;
  if (r.jobs < 1) throw ConfigError("jobs must be >= 1");
  r.out = args.out.empty() ? r.cfg.run.out : args.out;
  return r;
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + out_path);
  out << payload;
}

void print_check_lines(const experiments::VerificationReport& report) {
  for (const auto& c : report.checks) {
    std::fprintf(stderr, "[%s] %-32s %.10g %s %.10g (tol %.3g)%s%s\n",
                 c.pass ? "PASS" : "FAIL", c.name.c_str(), c.lhs,
                 experiments::relation_symbol(c.relation), c.rhs, c.tolerance,
                 c.note.empty() ? "" : "  # ", c.note.c_str());
  }
}

std::string matrix_csv(const CMatrix& m) {
  std::string out;
  char buf[64];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", m(i, j).real(), m(i, j).imag());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

int run_verify(const std::string& suite, const CommonArgs& args) {
  const Resolved r = resolve(args);
  const RngStream rng{r.seed, 0};
  experiments::VerificationReport report;
  if (suite == "scalar") {
    report = experiments::verify_scalar(r.cfg.scenario, r.trials, rng, r.jobs);
  } else if (suite == "vector") {
    report = experiments::verify_vector(r.cfg.scenario, r.trials, rng, r.jobs);
  } else {
    std::vector<SignalScheme> schemes;
    if (r.cfg.scheme_specs.empty()) {
      schemes = experiments::default_bound_schemes(r.cfg.scenario);
    } else {
      const std::string base_dir =
          std::filesystem::path(args.config_path).parent_path().string();
      for (const auto& spec : r.cfg.scheme_specs) {
        schemes.push_back(config::make_scheme(spec, r.cfg.scenario, base_dir));
      }
    }
    report = experiments::verify_bounds(r.cfg.scenario, schemes, r.trials, rng, r.jobs);
  }
  print_check_lines(report);
  emit(experiments::to_json(report), r.out);
  return report.pass ? kExitOk : kExitChecksFailed;
}

int run_optimize(const CommonArgs& args, const std::string& method) {
  const Resolved r = resolve(args);
  const Scenario& scn = r.cfg.scenario;
  covopt::OptimizerResult result;
  if (method == "wf") {
    result = covopt::sensing_optimal_cov_closed(scn);
  } else {
    const auto fb = infomeasures::build_fblocks(scn.target_prior_cov,
                                                scn.sense_rx_antennas, scn.tx_antennas);
    result = covopt::optimize_cov_pg(fb, scn.block_len, scn.sense_noise_var,
                                     scn.transmit_power);
  }
  std::fprintf(stderr, "mi_bits=%.12g iterations=%d kkt_residual=%.3g converged=%d\n",
               result.mi_bits, result.iterations, result.kkt_residual,
               result.converged ? 1 : 0);
  emit(matrix_csv(result.cov), r.out);
  if (!result.converged) throw NumericError("optimizer did not converge");
  return kExitOk;
}

int run_capacity(const CommonArgs& args) {
  const Resolved r = resolve(args);
  const Scenario& scn = r.cfg.scenario;
  const RngStream rng{r.seed, 0};
  const auto channels = config::comm_channel_samples(r.cfg, rng);

  const auto fb = infomeasures::build_fblocks(scn.target_prior_cov,
                                              scn.sense_rx_antennas, scn.tx_antennas);
  const covopt::OptimizerResult sens =
      covopt::closed_form_supported(scn)
          ? covopt::sensing_optimal_cov_closed(scn)
          : covopt::optimize_cov_pg(fb, scn.block_len, scn.sense_noise_var,
                                    scn.transmit_power);

  // Comm endpoint for reference: water-filling on the mean channel Gram.
  CMatrix gram = CMatrix::Zero(scn.tx_antennas, scn.tx_antennas);
  for (const auto& h : channels) gram += h.adjoint() * h;
  gram = numkit::hermitize(gram / static_cast<double>(channels.size()));
  const auto gram_eig = numkit::hermitian_eig(gram);
  RVector gains = gram_eig.lambdas.cwiseMax(1e-14 * gram_eig.lambdas(0));
  const auto wf = covopt::waterfill(gains, 1, scn.comm_noise_var, scn.transmit_power);
  const CMatrix comm_cov =
      numkit::hermitize(gram_eig.eigvecs * wf.allocations.cast<Complex>().asDiagonal() *
                        gram_eig.eigvecs.adjoint());

  const MCEstimate rate_comm =
      capacity::ergodic_gaussian_rate(channels, comm_cov, scn.comm_noise_var);
  const MCEstimate rate_sens =
      capacity::ergodic_gaussian_rate(channels, sens.cov, scn.comm_noise_var);
  const capacity::CapacityResult high =
      capacity::high_snr_rate(channels, sens.cov, scn.comm_noise_var, scn.block_len);

  const nlohmann::json doc = {
      {"channel_samples", channels.size()},
      {"gaussian_rate_comm_waterfill",
       {{"mean", rate_comm.mean}, {"stderr", rate_comm.std_err}}},
      {"gaussian_rate_at_sensing_cov",
       {{"mean", rate_sens.mean}, {"stderr", rate_sens.std_err}}},
      {"high_snr_at_sensing_cov",
       {{"rate_bits_per_symbol", high.rate_bits_per_symbol},
        {"stderr", high.rate_std_err},
        {"rank", high.rank},
        {"c0_bits", high.c0_bits},
        {"pre_log", high.pre_log},
        {"pseudo_det_used", high.pseudo_det_used}}},
      {"sensing_mi_bits", sens.mi_bits}};
  emit(doc.dump(2) + "\n", r.out);
  return kExitOk;
}

int run_mi(const CommonArgs& args, const std::string& scheme_spec) {
  const Resolved r = resolve(args);
  const std::string base_dir =
      std::filesystem::path(args.config_path).parent_path().string();
  const SignalScheme scheme =
      config::make_scheme(scheme_spec, r.cfg.scenario, base_dir);
  const MCEstimate mi = infomeasures::ergodic_sensing_mi(
      scheme, r.cfg.scenario, r.trials, RngStream{r.seed, 0}, r.jobs);
  std::printf("%.12g %.12g\n", mi.mean, mi.std_err);
  return kExitOk;
}

int run_drt(const CommonArgs& args, std::optional<int> points) {
  const Resolved r = resolve(args);
  const RngStream rng{r.seed, 0};
  const auto channels = config::comm_channel_samples(r.cfg, rng);
  const int n_points = points.value_or(r.cfg.run.points);
  const auto curve = experiments::drt_curve(r.cfg.scenario, channels, n_points,
                                            r.trials, rng.derive(7), r.jobs);
  emit(experiments::to_csv(curve), r.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sensing/communication tradeoff toolkit for vector Gaussian channels"};
  app.require_subcommand(1);

  CommonArgs verify_args;
  std::string verify_suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", verify_suite, "scalar | vector | bounds")
      ->required()
      ->check(CLI::IsMember({"scalar", "vector", "bounds"}));
  add_common(verify, &verify_args);

  CommonArgs optimize_args;
  std::string method;
  auto* optimize = app.add_subcommand("optimize", "sensing-optimal covariance");
  optimize->add_option("--method", method, "wf (closed form) | pg (projected gradient)")
      ->required()
      ->check(CLI::IsMember({"wf", "pg"}));
  add_common(optimize, &optimize_args, /*with_trials=*/false);

  CommonArgs capacity_args;
  auto* capacity_cmd = app.add_subcommand("capacity", "communication-rate evaluation");
  add_common(capacity_cmd, &capacity_args, /*with_trials=*/false);

  CommonArgs mi_args;
  std::string scheme_spec;
  auto* mi = app.add_subcommand("mi", "ergodic sensing MI of a scheme (prints bits)");
  mi->add_option("--scheme", scheme_spec, "scheme spec, e.g. 'gaussian_iid' or 'haar opt'")
      ->required();
  add_common(mi, &mi_args);

  CommonArgs drt_args;
  std::optional<int> drt_points;
  auto* drt = app.add_subcommand("drt", "tradeoff curve sweep (CSV)");
  drt->add_option("--points", drt_points, "number of sweep points");
  add_common(drt, &drt_args);

  try {
    app.parse(argc, argv);
    if (verify->parsed()) return run_verify(verify_suite, verify_args);
    if (optimize->parsed()) return run_optimize(optimize_args, method);
    if (capacity_cmd->parsed()) return run_capacity(capacity_args);
    if (mi->parsed()) return run_mi(mi_args, scheme_spec);
    if (drt->parsed()) return run_drt(drt_args, drt_points);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
}
