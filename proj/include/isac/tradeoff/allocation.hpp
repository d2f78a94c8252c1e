#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "isac/core/config.hpp"
#include "isac/core/error.hpp"

namespace isac {

/// log2(1 + g P G_c / sigma^2), bit/s/Hz of a user with channel gain g.
inline double spectral_efficiency(double gain, const SystemConfig& cfg) {
  return std::log2(1.0 + gain * cfg.tx_power_w * cfg.comm_gain() / cfg.noise_power_w);
}

/// R_k = (t_k / T) B log2(1 + g_k P / sigma^2).
inline double user_rate(double t, double gain, const SystemConfig& cfg) {
  if (t < 0.0 || gain < 0.0) throw InvalidArgument("user_rate: t and g must be >= 0");
  return t / cfg.total_time_s * cfg.bandwidth_hz * spectral_efficiency(gain, cfg);
}

/// R = min_k R_k.
inline double min_rate(std::span<const double> t, std::span<const double> gains, const SystemConfig& cfg) {
  if (t.size() != gains.size() || t.empty()) throw InvalidArgument("min_rate: need one time share per user");
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t.size(); ++k) r = std::min(r, user_rate(t[k], gains[k], cfg));
  return r;
}

/// Sensing time charged per cycle and target.
inline double sensing_time(std::size_t cycles, const SystemConfig& cfg) {
  return static_cast<double>(cfg.num_targets) * cfg.slot_time_s * static_cast<double>(cycles);
}

/// Largest C with N T_0 C <= T.
inline std::size_t max_cycles(const SystemConfig& cfg) {
  const double c = cfg.total_time_s / (cfg.num_targets * cfg.slot_time_s);
  return static_cast<std::size_t>(std::floor(c * (1.0 + 1e-12)));
}

struct AllocationResult {
  std::size_t cycles = 0;
  std::vector<double> t;    // per-user communication time, s
  double rate = 0.0;        // R*, bit/s
  double accuracy = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> eta;  // KKT multipliers of the per-user rate constraints
  double lagrange = 0.0;    // multiplier of the time budget
  double inverse_rate_sum = 0.0;  // S = sum_k T / (B log2(1 + g_k P / sigma^2))
};

/// Max-min time allocation for a fixed C. Every user receives the same rate
///   R* = (T - N T_0 C) / S,  t_k* = T (T - N T_0 C) / (S B l_k),  eta_k = T / (B l_k S).
inline AllocationResult optimal_allocation(std::size_t cycles, std::span<const double> gains, const SystemConfig& cfg) {
  if (gains.empty()) throw InvalidArgument("optimal_allocation: no users");
  const double total = cfg.total_time_s;
  const double budget = total - sensing_time(cycles, cfg);
  if (budget < -1e-12 * total)
    throw Infeasible("optimal_allocation: sensing budget N T_0 C exceeds the frame time T");
  std::vector<double> inv(gains.size());
  double s = 0.0;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    if (gains[k] < 0.0 || !std::isfinite(gains[k])) throw InvalidArgument("optimal_allocation: gains must be >= 0");
    if (gains[k] == 0.0)
      throw Infeasible("optimal_allocation: user " + std::to_string(k) + " has zero gain, min-rate pinned to zero");
    inv[k] = total / (cfg.bandwidth_hz * spectral_efficiency(gains[k], cfg));
    s += inv[k];
  }
  AllocationResult out;
  out.cycles = cycles;
  out.inverse_rate_sum = s;
  const double free = std::max(budget, 0.0);
  out.rate = free / s;
  out.lagrange = -1.0 / s;
  for (double v : inv) {
    out.t.push_back(free * v / s);
    out.eta.push_back(v / s);
  }
  return out;
}

}  // namespace isac
