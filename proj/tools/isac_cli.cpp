// isac: command-line front end for the simulator and tradeoff analysis.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "isac/isac.hpp"
#include "isac/io/manifest.hpp"

#ifndef ISAC_DATA_DIR
#define ISAC_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace isac;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kRuntime = 3, kInfeasible = 4 };

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  unsigned threads = 0;
};

struct Context {
  SystemConfig cfg;
  std::uint64_t seed = 0;
  fs::path out;
};

Context make_context(const Globals& g) {
  Context ctx;
  if (!g.config_path.empty()) ctx.cfg = load_config(g.config_path);
  if (g.seed) ctx.cfg.seed = *g.seed;
  ctx.cfg.validate();
  ctx.seed = ctx.cfg.seed;
  ctx.out = g.out;
  fs::create_directories(ctx.out);
  return ctx;
}

RunManifest start_manifest(const std::string& command, const Globals& g, const Context& ctx) {
  RunManifest m;
  m.command = command;
  m.config_path = g.config_path;
  m.seed = ctx.seed;
  m.output_dir = ctx.out.string();
  return m;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

std::vector<MotionLabel> label_set(const std::string& name) {
  if (name == "default") return default_motion_labels();
  if (name == "adult3") return adult_motion_labels();
  throw ConfigError("classes", "expected 'default' or 'adult3'");
}

const MotionLabel& find_label(const std::vector<MotionLabel>& labels, const std::string& name) {
  for (const auto& l : labels)
    if (l.name == name) return l;
  throw ConfigError("label", "unknown class '" + name + "'");
}

std::vector<CurveFamily> parse_families(const std::vector<std::string>& names) {
  std::vector<CurveFamily> out;
  if (names.empty()) return {kAllFamilies.begin(), kAllFamilies.end()};
  for (const auto& n : names) out.push_back(parse_curve_family(n));
  return out;
}

struct PipelineOptions {
  std::size_t cycles = 3000;
  double rho = 0.997;
  std::size_t window = 128;
  int svd_r = 1;
  int bins = kDefaultGrayBins;
  double dynamic_range = kDefaultDynamicRangeDb;

  void add_to(CLI::App* app) {
    app->add_option("--cycles", cycles, "Sensing cycles C per spectrogram")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--rho", rho, "Clutter evolution rate")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app->add_option("--window", window, "STFT window W (slow-time samples)")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--svd-r", svd_r, "SVD threshold index r (1 keeps every component)")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--bins", bins, "Gray-level histogram bins E")->check(CLI::Range(2, 256))->capture_default_str();
    app->add_option("--dynamic-range", dynamic_range, "Gray-scale dynamic range, dB")->check(CLI::PositiveNumber)->capture_default_str();
  }

  PipelineParams params() const {
    PipelineParams p;
    p.cycles = cycles;
    p.rho = rho;
    p.window = window;
    p.svd_threshold = svd_r;
    p.gray_bins = bins;
    p.dynamic_range_db = dynamic_range;
    return p;
  }

  void record(RunManifest& m, bool with_cycles = true) const {
    if (with_cycles) m.parameters["cycles"] = cycles;
    m.parameters["rho"] = rho;
    m.parameters["window"] = window;
    m.parameters["svd_r"] = svd_r;
    m.parameters["bins"] = bins;
    m.parameters["dynamic_range_db"] = dynamic_range;
  }
};

// spectrogram ---------------------------------------------------------------

struct SpectrogramCmd {
  PipelineOptions pipe;
  std::string motion = "walking";
  std::string subject = "adult";
  std::vector<double> start{1.5, 3.0, 0.0};
  double heading_deg = 90.0;
  bool no_noise = false;
  bool no_clutter = false;

  void add(CLI::App& root, const Globals& g, std::function<int()>& run) {
    auto* app = root.add_subcommand("spectrogram", "Simulate one motion sample and write its spectrogram");
    pipe.add_to(app);
    app->add_option("--motion", motion, "standing | walking | pacing")->capture_default_str();
    app->add_option("--subject", subject, "adult | child")->capture_default_str();
    app->add_option("--start", start, "Start ground position x y z, m")->expected(3)->capture_default_str();
    app->add_option("--heading-deg", heading_deg, "Heading angle from the +x axis, degrees")->capture_default_str();
    app->add_flag("--no-noise", no_noise, "Disable receiver noise");
    app->add_flag("--no-clutter", no_clutter, "Disable the clutter channel");
    app->callback([this, &g, &run] { run = [this, &g] { return execute(g); }; });
  }

  int execute(const Globals& g) {
    Context ctx = make_context(g);
    Scene scene;
    scene.system = ctx.cfg;
    const double h = heading_deg * kPi / 180.0;
    scene.motion = MotionSpec::make(parse_motion_class(motion), parse_subject(subject), Vec3(start[0], start[1], start[2]),
                                    Vec3(std::cos(h), std::sin(h), 0.0), 1.0);
    PipelineParams p = pipe.params();
    p.noise = !no_noise;
    p.clutter = !no_clutter;
    const auto sim = simulate_spectrogram(scene, p, RngStream(ctx.seed, "spectrogram"));

    write_pgm((ctx.out / "spectrogram.pgm").string(), sim.gray.image);
    {
      auto out = open_out(ctx.out / "spectrogram_db.csv");
      write_spectrogram_db_csv(out, sim.spectrogram);
    }
    {
      auto out = open_out(ctx.out / "pmf.csv");
      out << "bin,p\n";
      out.precision(17);
      for (std::size_t j = 0; j < sim.gray.pmf.size(); ++j) out << j << ',' << sim.gray.pmf[j] << '\n';
    }
    RunManifest m = start_manifest("spectrogram", g, ctx);
    pipe.record(m);
    m.parameters["motion"] = motion;
    m.parameters["subject"] = subject;
    m.parameters["start"] = start;
    m.parameters["heading_deg"] = heading_deg;
    m.parameters["noise"] = !no_noise;
    m.parameters["clutter"] = !no_clutter;
    for (const char* f : {"spectrogram.pgm", "spectrogram_db.csv", "pmf.csv"}) m.add(f);
    m.write();
    std::cout << "wrote " << (ctx.out / "spectrogram.pgm").string() << " (" << sim.gray.image.rows << " x "
              << sim.gray.image.cols << ")\n";
    return kOk;
  }
};

// dataset -------------------------------------------------------------------

struct DatasetCmd {
  PipelineOptions pipe;
  std::string classes = "default";
  std::size_t per_class = 10;

  void add(CLI::App& root, const Globals& g, std::function<int()>& run) {
    auto* app = root.add_subcommand("dataset", "Generate a labeled spectrogram dataset (PGM files + labels.csv)");
    pipe.add_to(app);
    app->add_option("--classes", classes, "Class set: default (5 classes) | adult3")->capture_default_str();
    app->add_option("--per-class", per_class, "Samples per class")->check(CLI::PositiveNumber)->capture_default_str();
    app->callback([this, &g, &run] { run = [this, &g] { return execute(g); }; });
  }

  int execute(const Globals& g) {
    Context ctx = make_context(g);
    Scene scene;
    scene.system = ctx.cfg;
    const auto labels = label_set(classes);
    const auto ds = generate_dataset(labels, per_class, scene, pipe.params(), RngStream(ctx.seed, "dataset"), g.threads);
    RunManifest m = start_manifest("dataset", g, ctx);
    pipe.record(m);
    m.parameters["classes"] = classes;
    m.parameters["per_class"] = per_class;
    for (const auto& f : write_dataset(ctx.out, ds)) m.add(f);
    {
      auto out = open_out(ctx.out / "classes.csv");
      out << "label,name\n";
      for (std::size_t c = 0; c < labels.size(); ++c) out << c << ',' << labels[c].name << '\n';
    }
    m.add("classes.csv");
    m.write();
    std::cout << "wrote " << ds.size() << " spectrograms to " << ctx.out.string() << '\n';
    return kOk;
  }
};

// calibrate -----------------------------------------------------------------

struct CalibrateCmd {
  PipelineOptions pipe;
  std::string reference;
  std::string classes = "default";
  std::string label = "walking_adult";
  double rho_min = 0.99, rho_max = 1.0, rho_step = 0.001;
  std::size_t samples = 10;

  void add(CLI::App& root, const Globals& g, std::function<int()>& run) {
    auto* app = root.add_subcommand("calibrate", "Fit the clutter evolution rate to reference spectrograms by KL divergence");
    pipe.add_to(app);
    app->add_option("--reference", reference, "Reference PGM file, or a dataset directory with labels.csv")->required();
    app->add_option("--classes", classes, "Class set the simulator draws from: default | adult3")->capture_default_str();
    app->add_option("--label", label, "Class simulated (and selected from a reference dataset)")->capture_default_str();
    app->add_option("--rho-min", rho_min, "Grid start")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app->add_option("--rho-max", rho_max, "Grid end")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app->add_option("--rho-step", rho_step, "Grid step")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--samples", samples, "Simulated spectrograms per grid point")->check(CLI::PositiveNumber)->capture_default_str();
    app->callback([this, &g, &run] { run = [this, &g] { return execute(g); }; });
  }

  std::vector<double> reference_pmf(const std::vector<MotionLabel>& labels) const {
    const fs::path ref(reference);
    if (!fs::is_directory(ref)) return gray_pmf(read_pgm(ref.string()), pipe.bins);
    std::ifstream in(ref / "labels.csv");
    if (!in) throw Error("no labels.csv in '" + ref.string() + "'");
    int wanted = -1;
    for (std::size_t c = 0; c < labels.size(); ++c)
      if (labels[c].name == label) wanted = static_cast<int>(c);
    std::vector<std::vector<double>> pmfs;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::istringstream row(line);
      std::string file, lab;
      std::getline(row, file, ',');
      std::getline(row, lab, ',');
      if (std::stoi(lab) == wanted) pmfs.push_back(gray_pmf(read_pgm((ref / file).string()), pipe.bins));
    }
    if (pmfs.empty()) throw Error("reference dataset holds no samples of class '" + label + "'");
    return average_pmf(pmfs);
  }

  int execute(const Globals& g) {
    Context ctx = make_context(g);
    if (rho_max < rho_min) throw ConfigError("rho-max", "must be >= rho-min");
    const auto labels = label_set(classes);
    const MotionLabel target = find_label(labels, label);
    const auto psi = reference_pmf(labels);

    Scene base;
    base.system = ctx.cfg;
    const PipelineParams params = pipe.params();
    PmfSimulator sim = [&](double rho, const RngStream& rng) {
      RngStream placement = rng.child("placement");
      Scene scene = base;
      scene.motion = random_motion(target, placement);
      PipelineParams p = params;
      p.rho = rho;
      return simulate_spectrogram(scene, p, rng.child("pipeline")).gray.pmf;
    };
    const auto fit = fit_rho(psi, sim, rho_grid(rho_min, rho_max, rho_step), samples, RngStream(ctx.seed, "calibrate"),
                             g.threads);
    {
      auto out = open_out(ctx.out / "rho_curve.csv");
      write_rho_curve_csv(out, fit);
    }
    RunManifest m = start_manifest("calibrate", g, ctx);
    pipe.record(m);
    m.parameters["reference"] = reference;
    m.parameters["classes"] = classes;
    m.parameters["label"] = label;
    m.parameters["grid"] = {rho_min, rho_max, rho_step};
    m.parameters["samples"] = samples;
    m.add("rho_curve.csv");
    m.write();
    std::cout.precision(6);
    std::cout << "rho* = " << fit.rho << " (mean KL " << fit.kl << ")\n";
    return kOk;
  }
};

// fit -----------------------------------------------------------------------

void print_ranking(const ModelRanking& r) {
  std::cout.precision(6);
  for (std::size_t i = 0; i < r.fits.size(); ++i) {
    const auto& f = r.fits[i];
    std::cout << i + 1 << ". " << to_string(f.family) << "  ssr=" << f.ssr << "  params=";
    for (std::size_t k = 0; k < f.params.size(); ++k) std::cout << (k ? "," : "") << f.params[k];
    std::cout << '\n';
  }
  for (const auto& [family, why] : r.failures) std::cout << "failed: " << to_string(family) << ": " << why << '\n';
}

void write_fit_outputs(const fs::path& dir, const ModelRanking& r, const std::vector<CurvePoint>& pts, RunManifest& m) {
  {
    auto out = open_out(dir / "fits.csv");
    write_fits_csv(out, r.fits);
  }
  double lo = pts.front().c, hi = pts.front().c;
  for (const auto& p : pts) {
    lo = std::min(lo, p.c);
    hi = std::max(hi, p.c);
  }
  {
    auto out = open_out(dir / "curves.csv");
    write_curve_samples_csv(out, r.fits, std::max(1.0, lo / 2.0), hi * 4.0, 200);
  }
  m.add("fits.csv");
  m.add("curves.csv");
}

struct FitCmd {
  std::string points = std::string(ISAC_DATA_DIR) + "/accuracy_points.csv";
  std::vector<std::string> families;
  int starts = 64;

  void add(CLI::App& root, const Globals& g, std::function<int()>& run) {
    auto* app = root.add_subcommand("fit", "Fit and rank learning-curve families on (C, A) points");
    app->add_option("--points", points, "CSV with columns C,A")->capture_default_str();
    app->add_option("--families", families, "Families to fit (default: all seven)");
    app->add_option("--starts", starts, "Multi-starts per family")->check(CLI::PositiveNumber)->capture_default_str();
    app->callback([this, &g, &run] { run = [this, &g] { return execute(g); }; });
  }

  int execute(const Globals& g) {
    Context ctx = make_context(g);
    const auto pts = read_points_csv(points);
    if (pts.empty()) throw ConfigError("points", "no (C, A) rows in '" + points + "'");
    FitOptions opt;
    opt.starts = starts;
    const auto ranking = select_model(pts, parse_families(families), opt, RngStream(ctx.seed, "fit"));
    RunManifest m = start_manifest("fit", g, ctx);
    m.parameters["points"] = points;
    m.parameters["families"] = families;
    m.parameters["starts"] = starts;
    write_fit_outputs(ctx.out, ranking, pts, m);
    m.write();
    print_ranking(ranking);
    return kOk;
  }
};

// region --------------------------------------------------------------------

RegionBoundary compute_region(const CurveFit& fit, const SystemConfig& cfg, std::size_t points, const ZoneThresholds& th,
                              const std::vector<double>& gains) {
  return classify_zones(region_boundary(fit, gains, cfg, points), th);
}

void report_region(const RegionBoundary& b) {
  std::cout << "zones:";
  for (Zone z : zone_sequence(b)) std::cout << ' ' << to_string(z);
  std::cout << '\n';
}

struct RegionCmd {
  std::string family = "pow3";
  std::vector<double> params{61906, 2.4297, 0.9499};
  std::string fits;
  std::string gains_path;
  std::size_t points = 200;
  ZoneThresholds th;

  void add(CLI::App& root, const Globals& g, std::function<int()>& run) {
    auto* app = root.add_subcommand("region", "Accuracy-rate boundary and its zones");
    app->add_option("--family", family, "Learning-curve family")->capture_default_str();
    app->add_option("--params", params, "Curve parameters (alpha, beta, gamma, epsilon order)")->capture_default_str();
    app->add_option("--fits", fits, "fits.csv from `fit`; the top-ranked row is used (overrides --family/--params)");
    app->add_option("--gains", gains_path, "User gains CSV (default: user_gains from the config, else sampled)");
    app->add_option("--points", points, "Boundary samples")->check(CLI::Range(3, 100000))->capture_default_str();
    app->add_option("--theta-lo", th.low, "Normalized-slope threshold below which communication saturates")->capture_default_str();
    app->add_option("--theta-hi", th.high, "Normalized-slope threshold above which sensing saturates")->capture_default_str();
    app->callback([this, &g, &run] { run = [this, &g] { return execute(g); }; });
  }

  CurveFit curve() const {
    if (fits.empty()) return make_curve_fit(parse_curve_family(family), params, {});
    std::ifstream in(fits);
    if (!in) throw ConfigError("fits", "cannot open '" + fits + "'");
    std::string line;
    std::getline(in, line);
    if (!std::getline(in, line)) throw ConfigError("fits", "no fit rows in '" + fits + "'");
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    const CurveFamily f = parse_curve_family(cell);
    CurveParams p;
    for (int k = 0; k < arity(f) && std::getline(row, cell, ','); ++k) p.push_back(std::stod(cell));
    return make_curve_fit(f, p, {});
  }

  int execute(const Globals& g) {
    Context ctx = make_context(g);
    const auto gains = gains_path.empty() ? resolve_user_gains(ctx.cfg) : read_gains_csv(gains_path);
    const auto b = compute_region(curve(), ctx.cfg, points, th, gains);
    {
      auto out = open_out(ctx.out / "region.csv");
      write_region_csv(out, b);
    }
    RunManifest m = start_manifest("region", g, ctx);
    m.parameters["family"] = fits.empty() ? family : "from " + fits;
    m.parameters["params"] = params;
    m.parameters["gains"] = gains_path;
    m.parameters["points"] = points;
    m.parameters["theta_lo"] = th.low;
    m.parameters["theta_hi"] = th.high;
    m.add("region.csv");
    m.write();
    report_region(b);
    return kOk;
  }
};

// pipeline ------------------------------------------------------------------

struct PipelineCmd {
  PipelineOptions pipe;
  std::vector<std::size_t> cycle_list{64, 128, 256, 512};
  std::string classes = "adult3";
  std::size_t n_train = 20, n_test = 10;
  double window_fraction = 0.5;
  std::size_t points = 200;
  ZoneThresholds th;

  void add(CLI::App& root, const Globals& g, std::function<int()>& run) {
    auto* app = root.add_subcommand("pipeline", "dataset -> accuracy vs C -> curve fit -> region, in one run");
    pipe.add_to(app);
    app->add_option("--window-fraction", window_fraction, "STFT window as a fraction of C, capped at --window (0: fixed)")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app->add_option("--cycle-list", cycle_list, "Ascending C values to train at")->capture_default_str();
    app->add_option("--classes", classes, "Class set: default | adult3")->capture_default_str();
    app->add_option("--train", n_train, "Training samples per class")->check(CLI::Range(2, 100000))->capture_default_str();
    app->add_option("--test", n_test, "Test samples per class")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--points", points, "Boundary samples")->check(CLI::Range(3, 100000))->capture_default_str();
    app->add_option("--theta-lo", th.low, "Low zone threshold")->capture_default_str();
    app->add_option("--theta-hi", th.high, "High zone threshold")->capture_default_str();
    app->callback([this, &g, &run] { run = [this, &g] { return execute(g); }; });
  }

  int execute(const Globals& g) {
    Context ctx = make_context(g);
    Scene scene;
    scene.system = ctx.cfg;
    AccuracySweep sweep;
    sweep.labels = label_set(classes);
    sweep.n_train = n_train;
    sweep.n_test = n_test;
    sweep.window_fraction = window_fraction;
    const auto acc = accuracy_vs_cycles(cycle_list, scene, pipe.params(), sweep, RngStream(ctx.seed, "accuracy"), g.threads);

    RunManifest m = start_manifest("pipeline", g, ctx);
    pipe.record(m, false);
    m.parameters["cycle_list"] = cycle_list;
    m.parameters["classes"] = classes;
    m.parameters["train_per_class"] = n_train;
    m.parameters["test_per_class"] = n_test;
    m.parameters["window_fraction"] = window_fraction;
    m.parameters["points"] = points;
    m.parameters["theta_lo"] = th.low;
    m.parameters["theta_hi"] = th.high;
    {
      auto out = open_out(ctx.out / "accuracy.csv");
      write_accuracy_csv(out, acc);
    }
    m.add("accuracy.csv");

    std::vector<CurvePoint> pts;
    for (const auto& p : acc) pts.push_back({static_cast<double>(p.cycles), p.accuracy});
    std::vector<CurveFamily> families;
    for (CurveFamily f : kAllFamilies)
      if (arity(f) <= static_cast<int>(pts.size())) families.push_back(f);
    const auto ranking = select_model(pts, families, {}, RngStream(ctx.seed, "fit"));
    write_fit_outputs(ctx.out, ranking, pts, m);
    print_ranking(ranking);

    const auto gains = resolve_user_gains(ctx.cfg);
    std::optional<RegionBoundary> region;
    std::string used;
    for (const auto& fit : ranking.fits) {
      try {
        region = compute_region(fit, ctx.cfg, points, th, gains);
        used = std::string(to_string(fit.family));
        break;
      } catch (const Error& e) {
        std::cerr << "region with " << to_string(fit.family) << " skipped: " << e.what() << '\n';
      }
    }
    if (!region) throw Infeasible("no fitted curve yields a feasible accuracy-rate region");
    {
      auto out = open_out(ctx.out / "region.csv");
      write_region_csv(out, *region);
    }
    m.add("region.csv");
    m.parameters["region_family"] = used;
    m.write();
    std::cout << "region from " << used << '\n';
    report_region(*region);
    return kOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ISAC sensing/communication simulator and accuracy-rate tradeoff toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "System configuration file (key = value)");
  app.add_option("--seed", g.seed, "Seed override (default: config seed)");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();

  std::function<int()> run;
  SpectrogramCmd spectrogram;
  DatasetCmd dataset;
  CalibrateCmd calibrate;
  FitCmd fit;
  RegionCmd region;
  PipelineCmd pipeline;
  spectrogram.add(app, g, run);
  dataset.add(app, g, run);
  calibrate.add(app, g, run);
  fit.add(app, g, run);
  region.add(app, g, run);
  pipeline.add(app, g, run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    return run ? run() : kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
