// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include "isacdrt/config.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "isacdrt/covopt.hpp"
#include "isacdrt/numkit.hpp"

namespace isacdrt::config {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
  const std::size_t pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (trim(s.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: bad numeric value for '" + key + "': " + s);
}

long to_long(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (trim(s.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: bad integer value for '" + key + "': " + s);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Complex parse_complex(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("config: empty complex literal");

  // Split at the last top-level sign that is not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
  }

  const auto parse_imag_token = [&](std::string tok) -> double {
    tok = trim(tok);
    if (tok.empty() || (tok.back() != 'i' && tok.back() != 'I' && tok.back() != 'j' &&
                        tok.back() != 'J')) {
      throw ConfigError("config: bad complex literal: " + text);
    }
    tok.pop_back();
    tok = trim(tok);
    if (tok.empty() || tok == "+") return 1.0;
    if (tok == "-") return -1.0;
    return to_double(tok, "complex");
  };

  const char tail = s.back();
  const bool has_imag = (tail == 'i' || tail == 'I' || tail == 'j' || tail == 'J');
  if (!has_imag) {
    return {to_double(s, "complex"), 0.0};
  }
  if (split == std::string::npos) {
    return {0.0, parse_imag_token(s)};
  }
  return {to_double(trim(s.substr(0, split)), "complex"),
          parse_imag_token(s.substr(split))};
}

std::string format_complex(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

CMatrix parse_matrix_inline(const std::string& text, Index rows, Index cols) {
  std::vector<Complex> entries;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) entries.push_back(parse_complex(t));
  }
  if (static_cast<Index>(entries.size()) != rows * cols) {
    throw ConfigError("config: matrix needs " + std::to_string(rows * cols) +
                      " entries, got " + std::to_string(entries.size()));
  }
  CMatrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      out(i, j) = entries[static_cast<std::size_t>(i * cols + j)];
    }
  }
  return out;
}

CMatrix load_matrix_csv(const std::string& path, Index rows, Index cols) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open matrix file: " + path);
  CMatrix out(rows, cols);
  std::string line;
  Index i = 0;
  while (std::getline(in, line)) {
    const std::string t = trim(strip_comment(line));
    if (t.empty()) continue;
    if (i >= rows) throw ConfigError("config: too many rows in " + path);
    std::stringstream ss(t);
    std::string item;
    std::vector<double> nums;
    while (std::getline(ss, item, ',')) nums.push_back(to_double(trim(item), path));
    if (static_cast<Index>(nums.size()) != 2 * cols) {
      throw ConfigError("config: row in " + path + " needs " + std::to_string(2 * cols) +
                        " interleaved re,im values");
    }
    for (Index j = 0; j < cols; ++j) {
      out(i, j) = Complex(nums[static_cast<std::size_t>(2 * j)],
                          nums[static_cast<std::size_t>(2 * j + 1)]);
    }
    ++i;
  }
  if (i != rows) throw ConfigError("config: expected " + std::to_string(rows) +
                                   " rows in " + path);
  return out;
}

namespace {

CMatrix resolve_matrix(const std::string& value, Index rows, Index cols,
                       const std::string& base_dir) {
  const std::string v = trim(value);
  if (!v.empty() && v.front() == '@') {
    std::filesystem::path p(trim(v.substr(1)));
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return load_matrix_csv(p.string(), rows, cols);
  }
  return parse_matrix_inline(v, rows, cols);
}

using Section = std::map<std::string, std::string>;

struct RawConfig {
  Section scenario;
  std::vector<std::string> schemes;
  Section run;
};

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  Section* current = nullptr;
  std::string section_name;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(strip_comment(line));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("config: malformed section at line " +
                                             std::to_string(lineno));
      section_name = trim(t.substr(1, t.size() - 2));
      if (section_name == "scenario") {
        current = &raw.scenario;
      } else if (section_name == "schemes") {
        current = nullptr;
      } else if (section_name == "run") {
        current = &raw.run;
      } else {
        throw ConfigError("config: unknown section [" + section_name + "]");
      }
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (section_name == "schemes") {
      if (key != "scheme") {
        throw ConfigError("config: unknown key '" + key + "' in [schemes]");
      }
      raw.schemes.push_back(value);
      continue;
    }
    if (current == nullptr) {
      throw ConfigError("config: key outside of a section at line " +
                        std::to_string(lineno));
    }
    if (current->count(key)) throw ConfigError("config: duplicate key '" + key + "'");
    (*current)[key] = value;
  }
  return raw;
}

std::string take(Section& sec, const std::string& key, const std::string& fallback,
                 bool* present = nullptr) {
  const auto it = sec.find(key);
  if (it == sec.end()) {
    if (present) *present = false;
    return fallback;
  }
  if (present) *present = true;
  const std::string v = it->second;
  sec.erase(it);
  return v;
}

void reject_leftovers(const Section& sec, const char* where) {
  if (!sec.empty()) {
    throw ConfigError(std::string("config: unknown key '") + sec.begin()->first +
                      "' in [" + where + "]");
  }
}

}  // namespace

CliConfig parse_config_text(const std::string& text, const std::string& base_dir) {
  RawConfig raw = tokenize(text);
  CliConfig cfg;

  Section& sc = raw.scenario;
  cfg.scenario.tx_antennas = static_cast<int>(to_long(take(sc, "tx_antennas", "1"), "tx_antennas"));
  cfg.scenario.sense_rx_antennas =
      static_cast<int>(to_long(take(sc, "sense_rx_antennas", "1"), "sense_rx_antennas"));
  cfg.scenario.comm_rx_antennas =
      static_cast<int>(to_long(take(sc, "comm_rx_antennas", "1"), "comm_rx_antennas"));
  cfg.scenario.block_len = static_cast<int>(to_long(take(sc, "block_len", "1"), "block_len"));
  cfg.scenario.transmit_power = to_double(take(sc, "transmit_power", "1"), "transmit_power");
  cfg.scenario.sense_noise_var = to_double(take(sc, "sense_noise_var", "1"), "sense_noise_var");
  cfg.scenario.comm_noise_var = to_double(take(sc, "comm_noise_var", "1"), "comm_noise_var");
  cfg.scenario.coherence_multiple =
      static_cast<int>(to_long(take(sc, "coherence_multiple", "1"), "coherence_multiple"));
  const Index d = cfg.scenario.target_dim();
  bool has_prior = false;
  const std::string prior = take(sc, "target_prior_cov", "", &has_prior);
  if (has_prior) {
    cfg.scenario.target_prior_cov = resolve_matrix(prior, d, d, base_dir);
  } else {
    cfg.scenario.target_prior_cov = CMatrix::Identity(d, d);
  }
  reject_leftovers(sc, "scenario");
  cfg.scenario.validate();

  cfg.scheme_specs = raw.schemes;
  for (const auto& spec : cfg.scheme_specs) {
    make_scheme(spec, cfg.scenario, base_dir);  // validate eagerly
  }

  Section& run = raw.run;
  cfg.run.seed = static_cast<std::uint64_t>(to_long(take(run, "seed", "1"), "seed"));
  cfg.run.trials = to_long(take(run, "trials", "10000"), "trials");
  cfg.run.points = static_cast<int>(to_long(take(run, "points", "11"), "points"));
  cfg.run.jobs = static_cast<int>(to_long(take(run, "jobs", "1"), "jobs"));
  cfg.run.out = take(run, "out", "");
  cfg.run.hc_sample_count =
      static_cast<int>(to_long(take(run, "hc_samples", "64"), "hc_samples"));
  bool has_hc = false;
  const std::string hc = take(run, "hc", "", &has_hc);
  if (has_hc) {
    cfg.run.comm_channel = resolve_matrix(hc, cfg.scenario.comm_rx_antennas,
                                          cfg.scenario.tx_antennas, base_dir);
  }
  reject_leftovers(run, "run");
  if (cfg.run.trials < 2) throw ConfigError("config: trials must be >= 2");
  if (cfg.run.points < 2) throw ConfigError("config: points must be >= 2");
  if (cfg.run.jobs < 1) throw ConfigError("config: jobs must be >= 1");
  if (cfg.run.hc_sample_count < 1) throw ConfigError("config: hc_samples must be >= 1");
  return cfg;
}

CliConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(),
                           std::filesystem::path(path).parent_path().string());
}

namespace {

std::string matrix_inline(const CMatrix& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (i + j > 0) out += ", ";
      out += format_complex(m(i, j));
    }
  }
  return out;
}

}  // namespace

std::string serialize(const CliConfig& cfg) {
  std::string out;
  out += "[scenario]\n";
  out += "tx_antennas = " + std::to_string(cfg.scenario.tx_antennas) + "\n";
  out += "sense_rx_antennas = " + std::to_string(cfg.scenario.sense_rx_antennas) + "\n";
  out += "comm_rx_antennas = " + std::to_string(cfg.scenario.comm_rx_antennas) + "\n";
  out += "block_len = " + std::to_string(cfg.scenario.block_len) + "\n";
  out += "transmit_power = " + fmt17(cfg.scenario.transmit_power) + "\n";
  out += "sense_noise_var = " + fmt17(cfg.scenario.sense_noise_var) + "\n";
  out += "comm_noise_var = " + fmt17(cfg.scenario.comm_noise_var) + "\n";
  out += "coherence_multiple = " + std::to_string(cfg.scenario.coherence_multiple) + "\n";
  out += "target_prior_cov = " + matrix_inline(cfg.scenario.target_prior_cov) + "\n";
  out += "\n[schemes]\n";
  for (const auto& s : cfg.scheme_specs) out += "scheme = " + s + "\n";
  out += "\n[run]\n";
  out += "seed = " + std::to_string(cfg.run.seed) + "\n";
  out += "trials = " + std::to_string(cfg.run.trials) + "\n";
  out += "points = " + std::to_string(cfg.run.points) + "\n";
  out += "jobs = " + std::to_string(cfg.run.jobs) + "\n";
  if (!cfg.run.out.empty()) out += "out = " + cfg.run.out + "\n";
  out += "hc_samples = " + std::to_string(cfg.run.hc_sample_count) + "\n";
  if (cfg.run.comm_channel) out += "hc = " + matrix_inline(*cfg.run.comm_channel) + "\n";
  return out;
}

SignalScheme make_scheme(const std::string& spec, const Scenario& scn,
                         const std::string& base_dir) {
  std::istringstream ss(spec);
  std::string name;
  std::string arg;
  ss >> name >> arg;
  std::string extra;
  if (ss >> extra) throw ConfigError("config: too many tokens in scheme '" + spec + "'");

  const auto cov_for = [&](const std::string& token) -> CMatrix {
    if (token.empty() || token == "opt") {
      if (covopt::closed_form_supported(scn)) {
        return covopt::sensing_optimal_cov_closed(scn).cov;
      }
      const auto fb = infomeasures::build_fblocks(scn.target_prior_cov,
                                                  scn.sense_rx_antennas, scn.tx_antennas);
      return covopt::optimize_cov_pg(fb, scn.block_len, scn.sense_noise_var,
                                     scn.transmit_power)
          .cov;
    }
    if (token == "iso") {
      return (scn.transmit_power / scn.tx_antennas) *
             CMatrix::Identity(scn.tx_antennas, scn.tx_antennas);
    }
    if (token.front() == '@') {
      return resolve_matrix(token, scn.tx_antennas, scn.tx_antennas, base_dir);
    }
    throw ConfigError("config: unknown scheme argument '" + token + "'");
  };

  SignalScheme scheme;
  if (name == "gaussian_iid") {
    if (!arg.empty()) throw ConfigError("config: gaussian_iid takes no argument");
    scheme = GaussianIid{};
  } else if (name == "psk") {
    const int order = arg.empty() ? 4 : static_cast<int>(to_long(arg, "psk order"));
    scheme = ConstantModulusPsk{order};
  } else if (name == "gaussian_colored") {
    scheme = GaussianColored{cov_for(arg)};
  } else if (name == "haar") {
    scheme = HaarFixedCovariance{cov_for(arg)};
  } else if (name == "deterministic") {
    if (!arg.empty() && arg.front() == '@') {
      scheme = Deterministic{resolve_matrix(arg, scn.tx_antennas, scn.block_len, base_dir)};
    } else {
      scheme = Deterministic{deterministic_block(cov_for(arg), scn.block_len)};
    }
  } else {
    throw ConfigError("config: unknown scheme '" + name + "'");
  }
  validate_scheme(scheme, scn);
  return scheme;
}

std::vector<CMatrix> comm_channel_samples(const CliConfig& cfg, RngStream rng) {
  std::vector<CMatrix> out;
  if (cfg.run.comm_channel) {
    out.push_back(*cfg.run.comm_channel);
    return out;
  }
  Rng gen(rng.derive(0x48c5));
  out.reserve(static_cast<std::size_t>(cfg.run.hc_sample_count));
  for (int i = 0; i < cfg.run.hc_sample_count; ++i) {
    out.push_back(sample_rayleigh_channel(cfg.scenario.comm_rx_antennas,
                                          cfg.scenario.tx_antennas, gen));
  }
  return out;
}

}  // namespace isacdrt::config
