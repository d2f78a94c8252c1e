#pragma once

#include <vector>

#include "isac/channel/clutter.hpp"
#include "isac/channel/received.hpp"
#include "isac/channel/target.hpp"
#include "isac/core/config.hpp"
#include "isac/core/rng.hpp"
#include "isac/dsp/chirp.hpp"
#include "isac/dsp/image.hpp"
#include "isac/dsp/slow_time.hpp"
#include "isac/dsp/stft.hpp"
#include "isac/kinematics/motion.hpp"

namespace isac {

/// Processing knobs of one simulated spectrogram.
struct PipelineParams {
  std::size_t cycles = 3000;  // C
  double rho = 0.997;
  std::size_t window = 128;   // W
  std::size_t hop = 1;
  int svd_threshold = 1;      // r
  double kaiser_beta = kDefaultKaiserBeta;
  double dynamic_range_db = kDefaultDynamicRangeDb;
  int gray_bins = kDefaultGrayBins;  // E
  bool clutter = true;
  bool noise = true;

  void validate() const {
    if (cycles < 1) throw InvalidArgument("pipeline: cycles must be >= 1");
    if (window < 1 || window > cycles) throw InvalidArgument("pipeline: need 1 <= W <= C");
    if (hop < 1) throw InvalidArgument("pipeline: hop must be >= 1");
    if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("pipeline: rho must lie in [0, 1]");
    if (svd_threshold < 1) throw InvalidArgument("pipeline: r must be >= 1");
  }
};

struct Scene {
  SystemConfig system;
  ClutterConfig clutter;
  MotionSpec motion;
};

struct SimulationResult {
  std::vector<cplx> slow_time;  // y~
  Spectrogram spectrogram;
  GrayResult gray;
};

/// Radar returns of one motion sample through the full front end:
/// tracks -> PBAH taps -> received cycles -> SVD cleaning -> dechirp -> STFT -> gray/pmf.
/// All randomness comes from children of `rng` ("phases", "clutter", "noise").
inline SimulationResult simulate_spectrogram(const Scene& scene, const PipelineParams& p, const RngStream& rng) {
  p.validate();
  const SystemConfig& cfg = scene.system;
  cfg.validate();
  ClutterConfig cc = scene.clutter;
  cc.evolution_rate = p.rho;
  cc.validate();
  MotionSpec motion = scene.motion;
  motion.duration = static_cast<double>(p.cycles) * cfg.pri_s;

  const TrackSet tracks = synthesize_tracks(motion, cc.radar, slow_time_grid(p.cycles, cfg.pri_s));
  RngStream phase_rng = rng.child("phases");
  RngStream noise_rng = rng.child("noise");
  const TargetChannel target(tracks, cfg, phase_rng);
  ClutterProcess clutter(cc, cfg, rng.child("clutter"));
  const auto chirp = synthesize_chirp(cfg);
  SystemConfig quiet = cfg;
  if (!p.noise) quiet.noise_power_w = 0.0;
  const TapList none;

  SimulationResult out;
  auto cycle = [&](std::size_t i) {
    const TapList u = target.at(i);
    const TapList& v = p.clutter ? clutter.next() : none;
    return received_cycle(u, v, chirp, quiet, noise_rng);
  };
  if (p.svd_threshold == 1) {
    // Y = X: dechirp cycle by cycle instead of holding the L x C matrix.
    out.slow_time.reserve(p.cycles);
    SlowTimeMatrix col;
    for (std::size_t i = 0; i < p.cycles; ++i) {
      const auto r = cycle(i);
      col.data = Eigen::Map<const Eigen::VectorXcd>(r.data(), static_cast<Eigen::Index>(r.size()));
      out.slow_time.push_back(dechirp_and_collapse(col, chirp).front());
    }
  } else {
    std::vector<std::vector<cplx>> cycles;
    cycles.reserve(p.cycles);
    for (std::size_t i = 0; i < p.cycles; ++i) cycles.push_back(cycle(i));
    const SlowTimeMatrix y = svd_denoise(stack_cycles(cycles), p.svd_threshold);
    out.slow_time = dechirp_and_collapse(y, chirp);
  }
  out.spectrogram = stft(out.slow_time, p.window, p.hop, 1.0 / cfg.pri_s, p.kaiser_beta);
  out.gray = to_gray_and_pmf(out.spectrogram.z, p.dynamic_range_db, p.gray_bins);
  return out;
}

}  // namespace isac
