// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "isacdrt/types.hpp"

namespace isacdrt {

/// Problem dimensions, powers, noise levels, and the target prior.
struct Scenario {
  int tx_antennas = 1;        // M
  int sense_rx_antennas = 1;  // N_s
  int comm_rx_antennas = 1;   // N_c
  int block_len = 1;          // samples per block (T)
  double transmit_power = 1.0;
  double sense_noise_var = 1.0;
  double comm_noise_var = 1.0;
  CMatrix target_prior_cov;   // Hermitian PD, dim N_s*M
  int coherence_multiple = 1; // comm channel redraw period in blocks; metadata only

  int target_dim() const { return sense_rx_antennas * tx_antennas; }
  bool is_scalar() const { return tx_antennas == 1 && block_len == 1; }

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

// -- signaling schemes ---------------------------------------------------

struct GaussianIid {};  // i.i.d. entries, per-antenna power P_T/M

struct GaussianColored {
  CMatrix cov;  // column covariance, PSD with trace P_T
};

struct ConstantModulusPsk {
  int order = 4;  // scalar scenarios only (M = T = 1)
};

struct HaarFixedCovariance {
  CMatrix cov;  // sample covariance pinned to cov exactly; needs T >= M
};

struct Deterministic {
  CMatrix signal;  // fixed M x T block
};

using SignalScheme = std::variant<GaussianIid, GaussianColored, ConstantModulusPsk,
                                  HaarFixedCovariance, Deterministic>;

std::string scheme_label(const SignalScheme& scheme);

/// Throws ConfigError if the scheme is incompatible with the scenario
/// (dimension mismatch, covariance trace != P_T, PSK outside M = T = 1, ...).
void validate_scheme(const SignalScheme& scheme, const Scenario& scn);

/// E{R_X}; closed form for every implemented scheme.
CMatrix statistical_cov(const SignalScheme& scheme, const Scenario& scn);

/// True when every draw has the same sample covariance (Deterministic,
/// HaarFixedCovariance, scalar PSK) so averages collapse to one evaluation.
bool has_fixed_sample_cov(const SignalScheme& scheme);

// -- randomness ----------------------------------------------------------

/// Addressable stream of a single master seed. Identical (seed, stream_id)
/// values give identical draw sequences on every platform.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// Child stream (per subcommand, per trial, ...).
  RngStream derive(std::uint64_t key) const;
};

/// Live generator for one stream. Gaussians come from Box-Muller on 53-bit
/// uniforms rather than std::normal_distribution, whose sequence is
/// implementation-defined.
class Rng {
 public:
  explicit Rng(RngStream stream);

  double uniform();                 // [0, 1)
  double gaussian();                // N(0, 1)
  Complex cgaussian(double var);    // CN(0, var): Re, Im ~ N(0, var/2) independent
  std::uint64_t uniform_int(std::uint64_t n);  // {0, ..., n-1}

  /// Matrix with i.i.d. CN(0, var) entries.
  CMatrix cgaussian_matrix(Index rows, Index cols, double var);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// -- operations ----------------------------------------------------------

/// One M x T block drawn from the scheme's distribution.
CMatrix sample_signal(const SignalScheme& scheme, const Scenario& scn, Rng& rng);

/// R_X = T^{-1} X X^H.
CMatrix sample_cov(const CMatrix& x);

/// X^T kron I_{N_s}; maps vec(H_s) to vec(H_s X).
CMatrix lift(const CMatrix& x, int sense_rx_antennas);

/// Target draw h ~ CN(0, prior); returns (h, unvec(h) as N_s x M).
std::pair<CVector, CMatrix> sample_target(const Scenario& scn, Rng& rng);

CMatrix forward_sense(const CMatrix& x, const CMatrix& h_sense, double noise_var, Rng& rng);
CMatrix forward_comm(const CMatrix& x, const CMatrix& h_comm, double noise_var, Rng& rng);

/// i.i.d. CN(0,1) entries; the default comm-channel ensemble.
CMatrix sample_rayleigh_channel(Index rows, Index cols, Rng& rng);

/// Fixed M x T block whose sample covariance equals cov exactly:
/// sqrt(T) * cov^(1/2) against the first M canonical directions. Needs T >= M.
CMatrix deterministic_block(const CMatrix& cov, int block_len);

}  // namespace isacdrt
