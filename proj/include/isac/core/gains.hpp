#pragma once

#include <span>
#include <vector>

#include "isac/core/config.hpp"
#include "isac/core/rng.hpp"

namespace isac {

/// g_k = |h_k|^2 with h_k ~ CN(0, pathloss_k). Zero pathloss gives zero gain.
inline std::vector<double> sample_user_gains(std::span<const double> pathloss_linear,
                                             RngStream& rng) {
  if (pathloss_linear.empty()) throw InvalidArgument("sample_user_gains: no users (K = 0)");
  std::vector<double> g;
  g.reserve(pathloss_linear.size());
  for (double var : pathloss_linear) {
    if (!(var >= 0.0)) throw InvalidArgument("sample_user_gains: pathloss must be >= 0");
    g.push_back(std::norm(rng.complex_normal(var)));
  }
  return g;
}

inline std::vector<double> sample_user_gains(const SystemConfig& cfg, RngStream& rng) {
  if (cfg.num_users == 0) throw InvalidArgument("sample_user_gains: no users (K = 0)");
  const auto pl = cfg.user_pathloss_linear();
  return sample_user_gains(std::span<const double>(pl), rng);
}

/// Configured gains when present, otherwise sampled from the "gains" stream of cfg.seed.
inline std::vector<double> resolve_user_gains(const SystemConfig& cfg) {
  if (cfg.user_gains) return *cfg.user_gains;
  RngStream rng(cfg.seed, "gains");
  return sample_user_gains(cfg, rng);
}

}  // namespace isac
