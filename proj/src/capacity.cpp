// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include "isacdrt/capacity.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "isacdrt/numkit.hpp"

namespace isacdrt::capacity {

double gaussian_rate(const CMatrix& channel, const CMatrix& cov, double noise_var) {
  if (noise_var <= 0.0) throw std::domain_error("gaussian_rate: noise variance must be > 0");
  numkit::require_psd(cov, "gaussian_rate");
  const CMatrix w = numkit::hermitize(channel * cov * channel.adjoint());
  const auto eig = numkit::hermitian_eig(w);
  double rate = 0.0;
  for (Index i = 0; i < eig.lambdas.size(); ++i) {
    rate += std::log2(1.0 + std::max(eig.lambdas(i), 0.0) / noise_var);
  }
  return rate;
}

MCEstimate ergodic_gaussian_rate(const std::vector<CMatrix>& channels,
                                 const CMatrix& cov, double noise_var) {
  if (channels.empty()) throw std::domain_error("ergodic_gaussian_rate: need >= 1 sample");
  std::vector<double> rates;
  rates.reserve(channels.size());
  for (const auto& h : channels) rates.push_back(gaussian_rate(h, cov, noise_var));
  return reduce_estimate(rates);
}

double c0(int rank, int block_len) {
  if (rank < 0 || block_len < 1) throw std::domain_error("c0: invalid arguments");
  if (rank == 0) return 0.0;
  const double l = static_cast<double>(rank);
  const double t = static_cast<double>(block_len);
  const double bracket = (t - l / 2.0) * std::log2(t / std::numbers::e) -
                         std::lgamma(t) / std::numbers::ln2 +
                         std::log2(2.0 * std::sqrt(std::numbers::pi));
  return (l / t) * bracket;
}

CapacityResult high_snr_rate(const std::vector<CMatrix>& channels, const CMatrix& cov,
                             double noise_var, int block_len, double rank_rtol) {
  if (channels.empty()) throw std::domain_error("high_snr_rate: need >= 1 sample");
  if (noise_var <= 0.0 || block_len < 1) {
    throw std::domain_error("high_snr_rate: invalid noise variance or block length");
  }
  numkit::require_psd(cov, "high_snr_rate");

  CapacityResult out;
  std::vector<double> rates;
  rates.reserve(channels.size());
  for (std::size_t k = 0; k < channels.size(); ++k) {
    const CMatrix w = numkit::hermitize(channels[k] * cov * channels[k].adjoint());
    const auto eig = numkit::hermitian_eig(w);
    const double lam_max = std::max(eig.lambdas(0), 0.0);
    if (lam_max <= 0.0) {
      throw std::domain_error("high_snr_rate: channel sample annihilates the covariance");
    }
    int rank = 0;
    double logdet = 0.0;  // log2-pseudo-det of W / noise_var
    for (Index i = 0; i < eig.lambdas.size(); ++i) {
      if (eig.lambdas(i) > rank_rtol * lam_max) {
        ++rank;
        logdet += std::log2(eig.lambdas(i) / noise_var);
      }
    }
    if (rank < eig.lambdas.size()) out.pseudo_det_used = true;
    const double pre_log = 1.0 - static_cast<double>(rank) / (2.0 * block_len);
    rates.push_back(pre_log * logdet + c0(rank, block_len));
    if (k == 0) {
      out.rank = rank;
      out.pre_log = pre_log;
      out.c0_bits = c0(rank, block_len);
    }
  }
  const MCEstimate reduced = reduce_estimate(rates);
  out.rate_bits_per_symbol = reduced.mean;
  out.rate_std_err = reduced.std_err;
  return out;
}

}  // namespace isacdrt::capacity
