#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "isac/core/error.hpp"

namespace isac {

inline constexpr double kPmfFloor = 1e-9;

/// D(psi || xi) = sum_j psi_j log(psi_j / max(xi_j, floor)); zero-mass psi bins
/// contribute nothing. The floor keeps empty simulated bins finite; the result is
/// clamped at 0 so flooring can never make it negative.
inline double kl_divergence(std::span<const double> psi, std::span<const double> xi, double floor = kPmfFloor) {
  if (psi.size() != xi.size()) throw InvalidArgument("kl_divergence: pmf lengths differ");
  if (!(floor > 0.0)) throw InvalidArgument("kl_divergence: floor must be > 0");
  double d = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    if (psi[j] < 0.0 || xi[j] < 0.0) throw InvalidArgument("kl_divergence: negative pmf entry");
    if (psi[j] == 0.0) continue;
    d += psi[j] * std::log(psi[j] / std::max(xi[j], floor));
  }
  return std::max(0.0, d);
}

/// Element-wise mean of equally long pmfs.
inline std::vector<double> average_pmf(const std::vector<std::vector<double>>& pmfs) {
  if (pmfs.empty()) throw InvalidArgument("average_pmf: no pmfs");
  std::vector<double> out(pmfs.front().size(), 0.0);
  for (const auto& p : pmfs) {
    if (p.size() != out.size()) throw InvalidArgument("average_pmf: pmf lengths differ");
    for (std::size_t j = 0; j < p.size(); ++j) out[j] += p[j];
  }
  for (double& v : out) v /= static_cast<double>(pmfs.size());
  return out;
}

}  // namespace isac
