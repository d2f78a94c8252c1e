#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "isac/channel/taps.hpp"
#include "isac/core/config.hpp"
#include "isac/core/rng.hpp"

namespace isac {

/// Accumulates tap (*) waveform into `out` with delays rounded to the fast-time grid.
inline void accumulate_taps(const TapList& taps, std::span<const cplx> waveform, const SystemConfig& cfg,
                            std::span<cplx> out) {
  const double limit = cfg.slot_time_s;
  for (const Tap& t : taps.taps()) {
    if (t.delay > limit) throw InvalidArgument("received_cycle: tap delay exceeds the slot time T_0");
    const auto shift = static_cast<std::size_t>(std::llround(t.delay * cfg.sample_rate_hz));
    for (std::size_t n = 0; n < waveform.size() && shift + n < out.size(); ++n)
      out[shift + n] += t.amplitude * waveform[n];
  }
}

/// r_i = (u + v) (*) s + n over one slot of L fast-time samples; n ~ CN(0, sigma^2)
/// per sample, drawn from `rng` whatever the noise power.
inline std::vector<cplx> received_cycle(const TapList& u, const TapList& v, std::span<const cplx> waveform,
                                        const SystemConfig& cfg, RngStream& rng) {
  std::vector<cplx> r(cfg.fast_time_len(), cplx{});
  accumulate_taps(u, waveform, cfg, r);
  accumulate_taps(v, waveform, cfg, r);
  for (auto& x : r) x += rng.complex_normal(cfg.noise_power_w);
  return r;
}

}  // namespace isac
