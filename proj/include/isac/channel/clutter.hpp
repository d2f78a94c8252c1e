#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "isac/channel/taps.hpp"
#include "isac/core/config.hpp"
#include "isac/core/rng.hpp"
#include "isac/kinematics/rcs.hpp"

namespace isac {

/// Geometry and statistics of the target-unrelated (clutter) channel.
struct ClutterConfig {
  Vec3 room{3.0, 4.5, 3.0};        // L_x, L_y, L_z, m; corner at the origin
  Vec3 radar{1.5, 1.0, 1.0};       // m
  double baseline_m = 0.3;         // D_0, TX-RX baseline
  int num_clusters = 7;            // direct path + up to six wall images
  int rays_per_cluster = 10;
  double ray_arrival_rate = 1e8;   // 1/s
  double ray_decay_const = 20e-9;  // s; E[a^2] = exp(-tau_ray / ray_decay_const)
  std::vector<double> reflection_factors = {0.02, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3};
  double evolution_rate = 0.997;   // rho

  void validate() const {
    if (!(evolution_rate >= 0.0 && evolution_rate <= 1.0))
      throw InvalidArgument("ClutterConfig: evolution rate must lie in [0, 1]");
    if (num_clusters < 1 || num_clusters > 7)
      throw InvalidArgument("ClutterConfig: num_clusters must be in [1, 7] (direct + six walls)");
    if (rays_per_cluster < 1) throw InvalidArgument("ClutterConfig: rays_per_cluster must be >= 1");
    if (!(ray_arrival_rate > 0.0) || !(ray_decay_const > 0.0) || !(baseline_m > 0.0))
      throw InvalidArgument("ClutterConfig: rates, decay constant and baseline must be > 0");
    if (!(room.array() > 0.0).all()) throw InvalidArgument("ClutterConfig: room dimensions must be > 0");
    if (reflection_factors.size() != static_cast<std::size_t>(num_clusters))
      throw InvalidArgument("ClutterConfig: need one reflection factor per cluster");
    for (double h : reflection_factors)
      if (!(h >= 0.0)) throw InvalidArgument("ClutterConfig: reflection factors must be >= 0");
    if (!((radar.array() > 0.0).all() && (radar.array() < room.array()).all()))
      throw InvalidArgument("ClutterConfig: radar outside room");
  }
};

/// Cluster delays: 0 for the direct path, then the first-order image of the
/// radar in each wall (round trip 2 d_wall / c), nearest walls first.
inline std::vector<double> cluster_delays(const ClutterConfig& cc) {
  cc.validate();
  std::vector<double> walls;
  for (int axis = 0; axis < 3; ++axis) {
    walls.push_back(2.0 * cc.radar[axis] / kSpeedOfLight);
    walls.push_back(2.0 * (cc.room[axis] - cc.radar[axis]) / kSpeedOfLight);
  }
  std::stable_sort(walls.begin(), walls.end());
  std::vector<double> out{0.0};
  for (int n = 1; n < cc.num_clusters; ++n) out.push_back(walls[n - 1]);
  return out;
}

/// Fixed delay support of the clutter channel: per cluster, its delay, its
/// path-loss scale sqrt(H_n) lambda / (4 pi (D_0 + tau_n c)), and the
/// intra-cluster ray delays.
struct ClutterSupport {
  std::vector<double> cluster_delay;
  std::vector<double> cluster_scale;
  std::vector<std::vector<double>> ray_delay;  // relative to the cluster
  double ray_decay_const = 1.0;

  std::size_t num_taps() const {
    std::size_t n = 0;
    for (const auto& r : ray_delay) n += r.size();
    return n;
  }
};

inline ClutterSupport draw_clutter_support(const ClutterConfig& cc, const SystemConfig& cfg, RngStream& rng) {
  const auto delays = cluster_delays(cc);
  const double lambda = cfg.wavelength_m();
  ClutterSupport s;
  s.ray_decay_const = cc.ray_decay_const;
  for (std::size_t n = 0; n < delays.size(); ++n) {
    s.cluster_delay.push_back(delays[n]);
    s.cluster_scale.push_back(std::sqrt(cc.reflection_factors[n]) * lambda /
                              (4.0 * kPi * (cc.baseline_m + delays[n] * kSpeedOfLight)));
    s.ray_delay.push_back(rng.arrival_times(cc.ray_arrival_rate, static_cast<std::size_t>(cc.rays_per_cluster)));
  }
  return s;
}

/// Assembles Upsilon on `support` from given ray amplitudes a_{n,m} and phases phi_{n,m}
/// (flattened cluster-major).
inline TapList assemble_clutter(const ClutterSupport& support, const std::vector<double>& amplitude,
                                const std::vector<double>& phase) {
  if (amplitude.size() != support.num_taps() || phase.size() != support.num_taps())
    throw InvalidArgument("assemble_clutter: one amplitude and phase per ray required");
  std::vector<Tap> taps;
  taps.reserve(support.num_taps());
  std::size_t k = 0;
  for (std::size_t n = 0; n < support.cluster_delay.size(); ++n) {
    for (double rd : support.ray_delay[n]) {
      taps.push_back({support.cluster_delay[n] + rd, std::polar(support.cluster_scale[n] * amplitude[k], phase[k])});
      ++k;
    }
  }
  return TapList(std::move(taps));
}

/// Fresh Rayleigh amplitudes (variance decaying exponentially with ray delay)
/// and uniform phases on a fixed support.
inline TapList draw_clutter(const ClutterSupport& support, RngStream& rng) {
  std::vector<double> amp, ph;
  amp.reserve(support.num_taps());
  ph.reserve(support.num_taps());
  for (std::size_t n = 0; n < support.cluster_delay.size(); ++n) {
    for (double rd : support.ray_delay[n]) {
      const double mean_power = std::exp(-rd / support.ray_decay_const);
      amp.push_back(rng.rayleigh(std::sqrt(mean_power / 2.0)));
      ph.push_back(rng.uniform(-kPi, kPi));
    }
  }
  return assemble_clutter(support, amp, ph);
}

/// One independent clutter snapshot Upsilon (new support and new ray draws).
inline TapList clutter_snapshot(const ClutterConfig& cc, const SystemConfig& cfg, RngStream& rng) {
  const auto support = draw_clutter_support(cc, cfg, rng);
  return draw_clutter(support, rng);
}

/// AR(1) step: v_i = rho v_{i-1} + (1 - rho) Upsilon_fresh; v_0 = Upsilon_fresh.
inline TapList evolve_clutter(const TapList* prev, const TapList& fresh, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("evolve_clutter: rho must lie in [0, 1]");
  if (prev == nullptr) return fresh;
  if (!prev->same_support(fresh)) throw InvalidArgument("evolve_clutter: mismatched tap supports");
  std::vector<Tap> taps(fresh.size());
  for (std::size_t k = 0; k < fresh.size(); ++k)
    taps[k] = {fresh[k].delay, rho * (*prev)[k].amplitude + (1.0 - rho) * fresh[k].amplitude};
  return TapList(std::move(taps));
}

/// Clutter chain of one motion sample: support frozen at cycle 0, amplitudes
/// evolved cycle by cycle.
class ClutterProcess {
 public:
  ClutterProcess(const ClutterConfig& cc, const SystemConfig& cfg, RngStream rng)
      : rho_(cc.evolution_rate), rng_(std::move(rng)), support_(draw_clutter_support(cc, cfg, rng_)) {}

  /// Advances one cycle and returns v_i.
  const TapList& next() {
    TapList fresh = draw_clutter(support_, rng_);
    state_ = evolve_clutter(state_ ? &*state_ : nullptr, fresh, rho_);
    return *state_;
  }

  const ClutterSupport& support() const { return support_; }

 private:
  double rho_;
  RngStream rng_;
  ClutterSupport support_;
  std::optional<TapList> state_;
};

}  // namespace isac
