#pragma once

#include <cmath>
#include <vector>

#include "isac/core/config.hpp"

namespace isac {

/// Centred baseband FMCW up-chirp: instantaneous frequency sweeps -B/2 .. +B/2
/// over T_sw with slope B/T_sw and constant power |s|^2 = P.
inline std::vector<cplx> synthesize_chirp(const SystemConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.sweep_len();
  const double slope = cfg.bandwidth_hz / cfg.sweep_time_s;
  const double amp = std::sqrt(cfg.tx_power_w);
  std::vector<cplx> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / cfg.sample_rate_hz;
    const double phase = kPi * slope * t * t - kPi * cfg.bandwidth_hz * t;
    s[i] = std::polar(amp, phase);
  }
  return s;
}

}  // namespace isac
