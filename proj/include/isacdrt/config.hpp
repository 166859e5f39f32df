// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isacdrt/model.hpp"
#include "isacdrt/types.hpp"

namespace isacdrt::config {

/// [run] section: seeds, trial counts, output paths, comm-channel source.
struct RunConfig {
  std::uint64_t seed = 1;
  long trials = 10000;
  int points = 11;
  int jobs = 1;
  std::string out;                    // default output path, subcommand-specific
  int hc_sample_count = 64;           // random CN(0,1) channel draws ...
  std::optional<CMatrix> comm_channel;  // ... unless a fixed channel is given
};

struct CliConfig {
  Scenario scenario;
  std::vector<std::string> scheme_specs;  // [schemes] entries, verbatim
  RunConfig run;
};

/// Scheme spec grammar:  NAME [ARG]
///   gaussian_iid
///   psk [ORDER]                       (default 4)
///   gaussian_colored|haar|deterministic  [opt|iso|@FILE]   (default opt)
/// "opt" resolves to the sensing-optimal covariance, "iso" to (P_T/M) I;
/// @FILE loads a matrix (covariance, or the fixed block for deterministic).
SignalScheme make_scheme(const std::string& spec, const Scenario& scn,
                         const std::string& base_dir);

CliConfig parse_config_file(const std::string& path);
CliConfig parse_config_text(const std::string& text, const std::string& base_dir);

/// Canonical text form; parse(serialize(parse(t))) == parse(t).
std::string serialize(const CliConfig& cfg);

// -- shared scalar/matrix syntax ------------------------------------------

/// "a+bi" complex literals: "1", "-2.5+3i", "1-2i", "3i".
Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);

/// Inline matrices are comma-separated row-major "a+bi" lists.
CMatrix parse_matrix_inline(const std::string& text, Index rows, Index cols);

/// CSV matrices are rows of interleaved real,imag columns.
CMatrix load_matrix_csv(const std::string& path, Index rows, Index cols);

/// Comm-channel samples for capacity/tradeoff runs: the fixed channel when
/// configured, otherwise hc_sample_count seeded Rayleigh draws.
std::vector<CMatrix> comm_channel_samples(const CliConfig& cfg, RngStream rng);

}  // namespace isacdrt::config
