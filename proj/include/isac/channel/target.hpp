#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "isac/channel/taps.hpp"
#include "isac/core/config.hpp"
#include "isac/core/rng.hpp"
#include "isac/kinematics/motion.hpp"

namespace isac {

/// Line-of-sight channel constant A = lambda^2 sqrt(P_t).
inline double target_channel_constant(const SystemConfig& cfg) {
  const double lambda = cfg.wavelength_m();
  return lambda * lambda * std::sqrt(cfg.sensing_gain());
}

/// Tap of one primitive at distance D (m) with RCS gain G and initial phase phi:
///   delay 2D/c, amplitude A/sqrt(4 pi) * sqrt(G)/D^2 * exp(-j 2 pi f_c 2D/c) * exp(j phi).
inline Tap primitive_tap(const SystemConfig& cfg, double distance, double gain, double phase) {
  const double delay = 2.0 * distance / kSpeedOfLight;
  const double mag = target_channel_constant(cfg) / std::sqrt(4.0 * kPi) * std::sqrt(gain) / (distance * distance);
  // Reduce the carrier phase before forming the exponential to keep full precision.
  const double carrier = std::fmod(2.0 * kPi * cfg.carrier_freq_hz * delay, 2.0 * kPi);
  return {delay, std::polar(mag, phase - carrier)};
}

/// phi_b ~ U[-pi, pi], one per primitive, held for a whole motion sample.
inline std::vector<double> draw_primitive_phases(std::size_t count, RngStream& rng) {
  std::vector<double> phi(count);
  for (auto& p : phi) p = rng.uniform(-kPi, kPi);
  return phi;
}

/// u_i: one tap per primitive at slow-time sample `cycle`.
inline TapList target_channel(const TrackSet& tracks, const SystemConfig& cfg, std::size_t cycle,
                              std::span<const double> phases) {
  if (phases.size() != tracks.num_primitives())
    throw InvalidArgument("target_channel: need one phase per primitive");
  if (tracks.num_primitives() > 0 && cycle >= tracks.num_samples())
    throw InvalidArgument("target_channel: cycle index outside the track grid");
  std::vector<Tap> taps;
  taps.reserve(tracks.num_primitives());
  for (std::size_t b = 0; b < tracks.num_primitives(); ++b) {
    const auto& tr = tracks.primitives[b];
    taps.push_back(primitive_tap(cfg, tr.distance[cycle], tr.gain[cycle], phases[b]));
  }
  return TapList(std::move(taps));
}

/// Target channel of one motion sample: tracks plus phases drawn once from `rng`.
class TargetChannel {
 public:
  TargetChannel(const TrackSet& tracks, const SystemConfig& cfg, RngStream& rng)
      : tracks_(&tracks), cfg_(&cfg), phases_(draw_primitive_phases(tracks.num_primitives(), rng)) {}

  TapList at(std::size_t cycle) const { return target_channel(*tracks_, *cfg_, cycle, phases_); }
  const std::vector<double>& phases() const { return phases_; }

 private:
  const TrackSet* tracks_;
  const SystemConfig* cfg_;
  std::vector<double> phases_;
};

}  // namespace isac
