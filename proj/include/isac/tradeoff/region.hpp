#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "isac/curvefit/fit.hpp"
#include "isac/tradeoff/allocation.hpp"

namespace isac {

enum class Zone { comm_saturation, adversarial, sensing_saturation };

inline std::string_view to_string(Zone z) {
  switch (z) {
    case Zone::comm_saturation: return "comm_saturation";
    case Zone::adversarial: return "adversarial";
    case Zone::sensing_saturation: return "sensing_saturation";
  }
  return "?";
}

struct RegionPoint {
  std::size_t cycles = 0;
  double accuracy = 0.0;
  double rate = 0.0;
  Zone zone = Zone::adversarial;
};

struct RegionBoundary {
  std::vector<RegionPoint> points;  // ascending C, hence ascending A
};

/// Smallest integer C inside the curve's increasing range with Theta(C) >= 0.
inline std::size_t min_cycles(const CurveFit& fit) {
  if (fit.monotone_empty()) throw Infeasible("region: fitted curve has no increasing range");
  double c = std::max(1.0, std::ceil(fit.monotone.first));
  if (!in_domain(fit.family, fit.params, c)) c += 1.0;
  if (c > fit.monotone.second) throw Infeasible("region: increasing range contains no integer C");
  if (fit(c) >= 0.0) return static_cast<std::size_t>(c);
  if (fit(std::floor(fit.monotone.second)) < 0.0) throw Infeasible("region: curve never reaches a non-negative accuracy");
  double lo = c, hi = std::floor(fit.monotone.second);
  while (hi - lo > 1.0) {
    const double mid = std::floor(0.5 * (lo + hi));
    (fit(mid) >= 0.0 ? hi : lo) = mid;
  }
  return static_cast<std::size_t>(hi);
}

/// Integers from lo to hi, roughly log-spaced, both ends included.
inline std::vector<std::size_t> log_spaced_cycles(std::size_t lo, std::size_t hi, std::size_t count) {
  std::vector<std::size_t> out;
  if (count < 2 || lo >= hi) return {lo};
  for (std::size_t i = 0; i < count; ++i) {
    const double x = std::exp(std::log(static_cast<double>(lo)) +
                              (std::log(static_cast<double>(hi)) - std::log(static_cast<double>(lo))) * i / (count - 1));
    const auto c = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(x)), lo, hi);
    if (out.empty() || c > out.back()) out.push_back(c);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

/// Pareto boundary parameterized by integer C over [C_min, floor(T / (N T_0))].
/// Each point is checked against N T_0 Theta^-1(A*) + S R* = T within 1e-9 T
/// (plus the inversion error implied by the resolution of A).
inline RegionBoundary region_boundary(const CurveFit& fit, std::span<const double> gains, const SystemConfig& cfg,
                                      std::size_t num_points) {
  if (num_points < 2) throw InvalidArgument("region_boundary: need at least 2 points");
  const std::size_t lo = min_cycles(fit);
  const std::size_t hi = std::min<std::size_t>(max_cycles(cfg), static_cast<std::size_t>(std::floor(fit.monotone.second)));
  if (lo > hi) throw Infeasible("region_boundary: empty feasible C range");
  const double sup = fit.family == CurveFamily::pow3 ? fit.params[2] : fit(fit.monotone.second);
  RegionBoundary b;
  for (std::size_t c : log_spaced_cycles(lo, hi, num_points)) {
    const AllocationResult alloc = optimal_allocation(c, gains, cfg);
    RegionPoint p{c, fit(static_cast<double>(c)), alloc.rate, Zone::adversarial};
    b.points.push_back(p);
    // Points whose accuracy already rounds to the supremum have no inverse to check.
    if (p.accuracy >= sup) continue;
    const double nt0 = cfg.num_targets * cfg.slot_time_s;
    const double lhs = nt0 * invert_curve(fit, p.accuracy) + alloc.inverse_rate_sum * alloc.rate;
    // A carries only double resolution; on a flat curve that alone moves Theta^-1(A)
    // by about eps |A| / Theta'(C).
    const double resolution = nt0 * 4.0 * std::numeric_limits<double>::epsilon() *
                              std::max(1.0, std::abs(p.accuracy)) / fit.slope(static_cast<double>(c));
    if (!(std::abs(lhs - cfg.total_time_s) <= 1e-9 * cfg.total_time_s + resolution))
      throw Error("region_boundary: optimality identity violated at C = " + std::to_string(c));
  }
  return b;
}

struct ZoneThresholds {
  double low = 0.2;   // |s^| below: communication saturated
  double high = 5.0;  // |s^| above: sensing saturated
};

/// Normalized slope s^ = (dR/dA) (A_max - A_min) / R_max by central differences.
inline std::vector<double> normalized_slopes(const RegionBoundary& b) {
  const auto& p = b.points;
  const std::size_t n = p.size();
  if (n < 3) throw InvalidArgument("classify_zones: need at least 3 boundary points");
  double a_min = p.front().accuracy, a_max = p.front().accuracy, r_max = 0.0;
  for (const auto& q : p) {
    a_min = std::min(a_min, q.accuracy);
    a_max = std::max(a_max, q.accuracy);
    r_max = std::max(r_max, q.rate);
  }
  if (!(a_max > a_min) || !(r_max > 0.0)) throw InvalidArgument("classify_zones: degenerate boundary");
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = i == 0 ? 0 : i - 1, r = i + 1 == n ? n - 1 : i + 1;
    s[i] = (p[r].rate - p[l].rate) / (p[r].accuracy - p[l].accuracy) * (a_max - a_min) / r_max;
  }
  return s;
}

/// Labels by |s^| against the thresholds. The running maximum of |s^| along
/// increasing A is used so the labels always form contiguous bands
/// comm_saturation -> adversarial -> sensing_saturation.
inline RegionBoundary classify_zones(RegionBoundary b, const ZoneThresholds& th = {}) {
  if (th.low > th.high) throw InvalidArgument("classify_zones: low threshold above high threshold");
  const auto s = normalized_slopes(b);
  double run = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double m = std::abs(s[i]);
    run = std::isnan(m) ? run : std::max(run, m);
    b.points[i].zone = run > th.high ? Zone::sensing_saturation : run < th.low ? Zone::comm_saturation : Zone::adversarial;
  }
  return b;
}

/// Distinct zones in order of appearance.
inline std::vector<Zone> zone_sequence(const RegionBoundary& b) {
  std::vector<Zone> seq;
  for (const auto& p : b.points)
    if (seq.empty() || seq.back() != p.zone) seq.push_back(p.zone);
  return seq;
}

/// CSV `C,A,R_bps,zone`.
inline void write_region_csv(std::ostream& out, const RegionBoundary& b) {
  out << "C,A,R_bps,zone\n";
  out.precision(12);
  for (const auto& p : b.points) out << p.cycles << ',' << p.accuracy << ',' << p.rate << ',' << to_string(p.zone) << '\n';
}

/// One gain per line (optional header `g`, `#` comments).
inline std::vector<double> read_gains_csv(std::istream& in) {
  std::vector<double> g;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line == "g") continue;
    try {
      g.push_back(std::stod(line));
    } catch (const std::logic_error&) {
      throw InvalidArgument("read_gains_csv: malformed line '" + line + "'");
    }
  }
  return g;
}

inline std::vector<double> read_gains_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_gains_csv(in);
}

}  // namespace isac
