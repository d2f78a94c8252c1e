#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "isac/core/parallel.hpp"
#include "isac/sim/pipeline.hpp"

namespace isac {

/// One recognition class: a motion, and a fixed subject or a random one per sample.
struct MotionLabel {
  std::string name;
  MotionClass motion = MotionClass::standing;
  std::optional<Subject> subject;
};

/// standing, walking/pacing for adults and children.
inline std::vector<MotionLabel> default_motion_labels() {
  return {{"standing", MotionClass::standing, std::nullopt},
          {"walking_adult", MotionClass::walking, Subject::adult},
          {"walking_child", MotionClass::walking, Subject::child},
          {"pacing_adult", MotionClass::pacing, Subject::adult},
          {"pacing_child", MotionClass::pacing, Subject::child}};
}

inline std::vector<MotionLabel> adult_motion_labels() {
  return {{"standing", MotionClass::standing, Subject::adult},
          {"walking", MotionClass::walking, Subject::adult},
          {"pacing", MotionClass::pacing, Subject::adult}};
}

struct LabeledSample {
  GrayImage image;
  int label = 0;
  std::size_t cycles = 0;
};

struct LabeledDataset {
  std::vector<std::string> class_names;
  std::vector<LabeledSample> samples;
  std::uint64_t seed = 0;

  int num_classes() const { return static_cast<int>(class_names.size()); }
  std::size_t size() const { return samples.size(); }
};

/// Randomized placement inside the default room: start x in [0.5, 2.5] m,
/// y in [2.5, 4.0] m, heading drawn from the half-plane pointing away from the radar.
inline MotionSpec random_motion(const MotionLabel& label, RngStream& rng) {
  const Subject subject = label.subject ? *label.subject : (rng.uniform() < 0.5 ? Subject::adult : Subject::child);
  const Vec3 start(rng.uniform(0.5, 2.5), rng.uniform(2.5, 4.0), 0.0);
  const double angle = rng.uniform(0.25 * kPi, 0.75 * kPi);
  return MotionSpec::make(label.motion, subject, start, Vec3(std::cos(angle), std::sin(angle), 0.0), 1.0);
}

/// n_per_class spectrograms per label. Sample j of class c draws everything from
/// rng.child("<c>/<j>"), so content does not depend on thread count.
inline LabeledDataset generate_dataset(const std::vector<MotionLabel>& labels, std::size_t n_per_class,
                                       const Scene& base, const PipelineParams& params, const RngStream& rng,
                                       unsigned threads = 1) {
  if (labels.empty()) throw InvalidArgument("generate_dataset: no classes");
  if (n_per_class < 1) throw InvalidArgument("generate_dataset: n_per_class must be >= 1");
  if (params.cycles < params.window)
    throw InvalidArgument("generate_dataset: C must be at least the STFT window W");

  LabeledDataset ds;
  ds.seed = rng.seed();
  for (const auto& l : labels) ds.class_names.push_back(l.name);
  ds.samples.resize(labels.size() * n_per_class);
  parallel_for(ds.samples.size(), threads, [&](std::size_t k) {
    const std::size_t c = k / n_per_class, j = k % n_per_class;
    const RngStream sample_rng = rng.child(std::to_string(c) + "/" + std::to_string(j));
    RngStream placement = sample_rng.child("placement");
    Scene scene = base;
    scene.motion = random_motion(labels[c], placement);
    auto sim = simulate_spectrogram(scene, params, sample_rng.child("pipeline"));
    ds.samples[k] = {std::move(sim.gray.image), static_cast<int>(c), params.cycles};
  });
  return ds;
}

/// Writes sample_NNNNN.pgm files plus labels.csv (`file,label,C,seed`) into dir.
/// Returns the written file names relative to dir.
inline std::vector<std::string> write_dataset(const std::filesystem::path& dir, const LabeledDataset& ds) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  std::ofstream labels(dir / "labels.csv");
  if (!labels) throw Error("cannot write " + (dir / "labels.csv").string());
  labels << "file,label,C,seed\n";
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    std::ostringstream name;
    name << "sample_" << std::setw(5) << std::setfill('0') << i << ".pgm";
    write_pgm((dir / name.str()).string(), ds.samples[i].image);
    labels << name.str() << ',' << ds.samples[i].label << ',' << ds.samples[i].cycles << ',' << ds.seed << '\n';
    files.push_back(name.str());
  }
  files.push_back("labels.csv");
  return files;
}

}  // namespace isac
