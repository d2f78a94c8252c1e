#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "isac/calibration/kl.hpp"
#include "isac/core/parallel.hpp"
#include "isac/core/rng.hpp"

namespace isac {

/// Regenerates one spectrogram pmf at evolution rate rho from the given stream.
using PmfSimulator = std::function<std::vector<double>(double rho, const RngStream& rng)>;

struct RhoFit {
  double rho = 1.0;
  double kl = 0.0;
  std::vector<double> grid;
  std::vector<double> curve;  // mean KL per grid point
};

/// Evenly spaced grid lo, lo+step, ..., hi (endpoint snapped).
inline std::vector<double> rho_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw InvalidArgument("rho_grid: need step > 0 and hi >= lo");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = i == n ? hi : lo + static_cast<double>(i) * step;
  return g;
}

/// Brute-force argmin over `grid` of the KL between `reference` and simulated
/// pmfs, averaged over `samples` realizations per point. Realization j uses the
/// stream rng.child("sample/j") at every grid point (common random numbers), so
/// curve differences reflect rho rather than draw noise. Ties go to the larger rho.
inline RhoFit fit_rho(const std::vector<double>& reference, const PmfSimulator& simulate,
                      const std::vector<double>& grid, std::size_t samples, const RngStream& rng,
                      unsigned threads = 1) {
  if (grid.empty()) throw InvalidArgument("fit_rho: empty grid");
  if (samples < 1) throw InvalidArgument("fit_rho: samples per point must be >= 1");
  for (double r : grid)
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("fit_rho: grid values must lie in [0, 1]");

  std::vector<double> kl(grid.size() * samples);
  parallel_for(kl.size(), threads, [&](std::size_t k) {
    const std::size_t g = k / samples, j = k % samples;
    const auto pmf = simulate(grid[g], rng.child("sample/" + std::to_string(j)));
    kl[k] = kl_divergence(reference, pmf);
  });

  RhoFit fit;
  fit.grid = grid;
  fit.curve.assign(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t j = 0; j < samples; ++j) fit.curve[g] += kl[g * samples + j];
    fit.curve[g] /= static_cast<double>(samples);
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const double a = fit.curve[g], b = fit.curve[best];
    if (a < b || (a == b && grid[g] > grid[best])) best = g;
  }
  fit.rho = grid[best];
  fit.kl = fit.curve[best];
  return fit;
}

/// CSV `rho,kl`.
inline void write_rho_curve_csv(std::ostream& out, const RhoFit& fit) {
  out << "rho,kl\n";
  out.precision(12);
  for (std::size_t g = 0; g < fit.grid.size(); ++g) out << fit.grid[g] << ',' << fit.curve[g] << '\n';
}

}  // namespace isac
