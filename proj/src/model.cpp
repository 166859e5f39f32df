// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include "isacdrt/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "isacdrt/numkit.hpp"

namespace isacdrt {

namespace {

constexpr double kCovTraceTol = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_cov_param(const CMatrix& cov, const Scenario& scn, const char* who) {
  if (cov.rows() != scn.tx_antennas || cov.cols() != scn.tx_antennas) {
    throw ConfigError(std::string(who) + ": covariance must be " +
                      std::to_string(scn.tx_antennas) + "x" +
                      std::to_string(scn.tx_antennas));
  }
  if (!numkit::is_hermitian(cov, 1e-10)) {
    throw ConfigError(std::string(who) + ": covariance must be Hermitian");
  }
  numkit::require_psd(cov, who);
  if (std::abs(cov.real().trace() - scn.transmit_power) > kCovTraceTol *
          std::max(1.0, scn.transmit_power)) {
    throw ConfigError(std::string(who) + ": covariance trace must equal the transmit power");
  }
}

}  // namespace

void Scenario::validate() const {
  if (tx_antennas < 1 || sense_rx_antennas < 1 || comm_rx_antennas < 1 || block_len < 1) {
    throw ConfigError("scenario: all dimensions must be >= 1");
  }
  if (coherence_multiple < 1) throw ConfigError("scenario: coherence_multiple must be >= 1");
  // Zero power is allowed for degenerate runs; everything degrades to X = 0.
  if (transmit_power < 0.0) throw ConfigError("scenario: transmit_power must be >= 0");
  if (sense_noise_var <= 0.0 || comm_noise_var <= 0.0) {
    throw ConfigError("scenario: noise variances must be > 0");
  }
  const Index d = target_dim();
  if (target_prior_cov.rows() != d || target_prior_cov.cols() != d) {
    throw ConfigError("scenario: target prior covariance must be " + std::to_string(d) +
                      "x" + std::to_string(d));
  }
  if (!numkit::is_hermitian(target_prior_cov, 1e-10)) {
    throw ConfigError("scenario: target prior covariance must be Hermitian");
  }
  const auto eig = numkit::hermitian_eig(target_prior_cov);
  if (eig.lambdas(0) <= 0.0 ||
      eig.lambdas(eig.lambdas.size() - 1) <= 1e-12 * eig.lambdas(0)) {
    throw ConfigError("scenario: target prior covariance must be positive definite");
  }
}

std::string scheme_label(const SignalScheme& scheme) {
  struct Visitor {
    std::string operator()(const GaussianIid&) const { return "gaussian_iid"; }
    std::string operator()(const GaussianColored&) const { return "gaussian_colored"; }
    std::string operator()(const ConstantModulusPsk& s) const {
      return "psk" + std::to_string(s.order);
    }
    std::string operator()(const HaarFixedCovariance&) const { return "haar"; }
    std::string operator()(const Deterministic&) const { return "deterministic"; }
  };
  return std::visit(Visitor{}, scheme);
}

void validate_scheme(const SignalScheme& scheme, const Scenario& scn) {
  struct Visitor {
    const Scenario& scn;
    void operator()(const GaussianIid&) const {}
    void operator()(const GaussianColored& s) const {
      require_cov_param(s.cov, scn, "gaussian_colored");
    }
    void operator()(const ConstantModulusPsk& s) const {
      if (s.order < 2) throw ConfigError("psk: order must be >= 2");
      if (!scn.is_scalar()) throw ConfigError("psk: requires a scalar scenario (M = T = 1)");
    }
    void operator()(const HaarFixedCovariance& s) const {
      if (scn.block_len < scn.tx_antennas) {
        throw ConfigError("haar: requires T >= M");
      }
      require_cov_param(s.cov, scn, "haar");
    }
    void operator()(const Deterministic& s) const {
      if (s.signal.rows() != scn.tx_antennas || s.signal.cols() != scn.block_len) {
        throw ConfigError("deterministic: signal must be " +
                          std::to_string(scn.tx_antennas) + "x" +
                          std::to_string(scn.block_len));
      }
    }
  };
  std::visit(Visitor{scn}, scheme);
}

CMatrix statistical_cov(const SignalScheme& scheme, const Scenario& scn) {
  struct Visitor {
    const Scenario& scn;
    CMatrix operator()(const GaussianIid&) const {
      return (scn.transmit_power / scn.tx_antennas) *
             CMatrix::Identity(scn.tx_antennas, scn.tx_antennas);
    }
    CMatrix operator()(const GaussianColored& s) const { return s.cov; }
    CMatrix operator()(const ConstantModulusPsk&) const {
      CMatrix r(1, 1);
      r(0, 0) = scn.transmit_power;
      return r;
    }
    CMatrix operator()(const HaarFixedCovariance& s) const { return s.cov; }
    CMatrix operator()(const Deterministic& s) const { return sample_cov(s.signal); }
  };
  return std::visit(Visitor{scn}, scheme);
}

bool has_fixed_sample_cov(const SignalScheme& scheme) {
  return std::holds_alternative<Deterministic>(scheme) ||
         std::holds_alternative<HaarFixedCovariance>(scheme) ||
         std::holds_alternative<ConstantModulusPsk>(scheme);
}

RngStream RngStream::derive(std::uint64_t key) const {
  return RngStream{seed, splitmix64(stream_id ^ splitmix64(key))};
}

Rng::Rng(RngStream stream)
    : engine_(splitmix64(splitmix64(stream.seed) ^ splitmix64(~stream.stream_id))) {}

double Rng::uniform() {
  // 53-bit mantissa in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 shifted into (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::cgaussian(double var) {
  const double s = std::sqrt(var / 2.0);
  return {s * gaussian(), s * gaussian()};
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::domain_error("uniform_int: n must be > 0");
  // Rejection sampling keeps the distribution exact.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

CMatrix Rng::cgaussian_matrix(Index rows, Index cols, double var) {
  CMatrix out(rows, cols);
  // Column-major fill order, part of the reproducibility contract.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = cgaussian(var);
  }
  return out;
}

namespace {

/// Haar-distributed T x M semi-unitary factor: QR of a standard complex
/// Gaussian with the R diagonal phases absorbed, which makes Q unique.
CMatrix haar_semi_unitary(Index t, Index m, Rng& rng) {
  const CMatrix g = rng.cgaussian_matrix(t, m, 1.0);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(t, m);
  const CMatrix r = qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
  for (Index j = 0; j < m; ++j) {
    const Complex d = r(j, j);
    const Complex phase = (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0, 0.0);
    q.col(j) *= std::conj(phase);
  }
  return q;
}

}  // namespace

CMatrix sample_signal(const SignalScheme& scheme, const Scenario& scn, Rng& rng) {
  validate_scheme(scheme, scn);
  struct Visitor {
    const Scenario& scn;
    Rng& rng;
    CMatrix operator()(const GaussianIid&) const {
      return rng.cgaussian_matrix(scn.tx_antennas, scn.block_len,
                                  scn.transmit_power / scn.tx_antennas);
    }
    CMatrix operator()(const GaussianColored& s) const {
      const CMatrix root = numkit::psd_sqrt(s.cov);
      return root * rng.cgaussian_matrix(scn.tx_antennas, scn.block_len, 1.0);
    }
    CMatrix operator()(const ConstantModulusPsk& s) const {
      const double phase = 2.0 * std::numbers::pi *
                           static_cast<double>(rng.uniform_int(s.order)) / s.order;
      CMatrix x(1, 1);
      x(0, 0) = std::sqrt(scn.transmit_power) * Complex(std::cos(phase), std::sin(phase));
      return x;
    }
    CMatrix operator()(const HaarFixedCovariance& s) const {
      const CMatrix q = haar_semi_unitary(scn.block_len, scn.tx_antennas, rng);
      return std::sqrt(static_cast<double>(scn.block_len)) * numkit::psd_sqrt(s.cov) *
             q.adjoint();
    }
    CMatrix operator()(const Deterministic& s) const { return s.signal; }
  };
  return std::visit(Visitor{scn, rng}, scheme);
}

CMatrix sample_cov(const CMatrix& x) {
  return (x * x.adjoint()) / static_cast<double>(x.cols());
}

CMatrix lift(const CMatrix& x, int sense_rx_antennas) {
  return numkit::kron(x.transpose(),
                      CMatrix::Identity(sense_rx_antennas, sense_rx_antennas));
}

std::pair<CVector, CMatrix> sample_target(const Scenario& scn, Rng& rng) {
  const Index d = scn.target_dim();
  const CMatrix root = numkit::psd_sqrt(scn.target_prior_cov);
  CVector w(d);
  for (Index i = 0; i < d; ++i) w(i) = rng.cgaussian(1.0);
  CVector h = root * w;
  CMatrix h_mat = numkit::unvec(h, scn.sense_rx_antennas, scn.tx_antennas);
  return {std::move(h), std::move(h_mat)};
}

namespace {

CMatrix propagate(const CMatrix& x, const CMatrix& channel, double noise_var, Rng& rng) {
  if (channel.cols() != x.rows()) {
    throw ConfigError("channel/signal dimension mismatch");
  }
  CMatrix y = channel * x;
  if (noise_var > 0.0) {
    y += rng.cgaussian_matrix(y.rows(), y.cols(), noise_var);
  }
  return y;
}

}  // namespace

CMatrix forward_sense(const CMatrix& x, const CMatrix& h_sense, double noise_var, Rng& rng) {
  return propagate(x, h_sense, noise_var, rng);
}

CMatrix forward_comm(const CMatrix& x, const CMatrix& h_comm, double noise_var, Rng& rng) {
  return propagate(x, h_comm, noise_var, rng);
}

CMatrix sample_rayleigh_channel(Index rows, Index cols, Rng& rng) {
  return rng.cgaussian_matrix(rows, cols, 1.0);
}

CMatrix deterministic_block(const CMatrix& cov, int block_len) {
  if (block_len < cov.rows()) {
    throw ConfigError("deterministic_block: needs T >= M");
  }
  const CMatrix root = numkit::psd_sqrt(cov);
  CMatrix basis = CMatrix::Zero(block_len, cov.rows());
  for (Index j = 0; j < cov.rows(); ++j) basis(j, j) = 1.0;
  return std::sqrt(static_cast<double>(block_len)) * root * basis.adjoint();
}

}  // namespace isacdrt
