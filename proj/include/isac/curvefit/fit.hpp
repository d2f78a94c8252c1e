#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "isac/core/rng.hpp"
#include "isac/curvefit/families.hpp"

namespace isac {

struct CurvePoint {
  double c = 0.0;  // cycles C
  double a = 0.0;  // accuracy A
};

struct CurveFit {
  CurveFamily family = CurveFamily::pow3;
  CurveParams params;
  double ssr = 0.0;
  double ssr_over_q = 0.0;
  std::vector<double> residuals;            // Theta(C_i) - A_i
  std::pair<double, double> domain{0, 0};   // open lower end, upper end
  std::pair<double, double> monotone{0, 0};  // Theta increasing here; empty when first > second

  double operator()(double c) const { return eval_curve(family, params, c); }
  double slope(double c) const { return curve_slope(family, params, c); }
  bool monotone_empty() const { return !(monotone.first < monotone.second); }
};

struct FitOptions {
  int starts = 64;
  int max_iterations = 500;
};

namespace curve_detail {

struct Prior {
  double lo, hi;
  bool log_scale = false;
};

// Multi-start sampling ranges, chosen to cover accuracy curves on C in the
// tens to thousands.
inline std::vector<Prior> start_priors(CurveFamily f) {
  switch (f) {
    case CurveFamily::vapor_pressure: return {{-1.0, 0.2}, {-2000.0, 0.0}};
    case CurveFamily::pow3: return {{1e-2, 1e8, true}, {0.05, 4.0}, {0.5, 1.1}};
    case CurveFamily::log_power: return {{0.5, 1.1}, {-2.0, 10.0}, {-3.0, -0.05}};
    case CurveFamily::exp4: return {{0.01, 5.0}, {-3.0, 3.0}, {0.5, 1.1}, {0.05, 1.0}};
    case CurveFamily::log_log_linear: return {{0.0, 2.0}, {-2.0, 3.0}};
    case CurveFamily::ilog2: return {{0.0, 10.0}, {0.5, 1.5}};
    case CurveFamily::pow4: return {{1e-4, 10.0, true}, {0.0, 10.0}, {0.5, 1.1}, {-3.0, -0.05}};
  }
  return {};
}

inline CurveParams project(CurveFamily f, CurveParams p) {
  const auto b = param_bounds(f);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], b.lo[i], b.hi[i]);
  return p;
}

/// SSR, or +inf when any point leaves the domain or evaluates non-finite.
inline double ssr_of(CurveFamily f, const CurveParams& p, const std::vector<CurvePoint>& pts,
                     std::vector<double>* res = nullptr) {
  double s = 0.0;
  if (res) res->clear();
  for (const auto& q : pts) {
    if (!in_domain(f, p, q.c)) return std::numeric_limits<double>::infinity();
    const double r = eval_curve(f, p, q.c) - q.a;
    if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
    if (res) res->push_back(r);
    s += r * r;
  }
  return s;
}

/// Levenberg-damped Gauss-Newton with step halving and bound projection.
/// Never accepts a step that raises the SSR.
inline std::pair<CurveParams, double> refine(CurveFamily f, CurveParams p, const std::vector<CurvePoint>& pts,
                                             int max_iterations) {
  const auto n = static_cast<Eigen::Index>(p.size());
  const auto q = static_cast<Eigen::Index>(pts.size());
  double ssr = ssr_of(f, p, pts);
  double lambda = 1e-3;
  std::vector<double> res;
  for (int it = 0; it < max_iterations && std::isfinite(ssr); ++it) {
    ssr_of(f, p, pts, &res);
    Eigen::MatrixXd j(q, n);
    Eigen::VectorXd r(q);
    for (Eigen::Index i = 0; i < q; ++i) {
      const auto row = curve_jacobian(f, p, pts[i].c);
      for (Eigen::Index k = 0; k < n; ++k) j(i, k) = row[k];
      r(i) = res[i];
    }
    if (!j.allFinite()) break;
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    bool accepted = false;
    while (!accepted && lambda < 1e12) {
      Eigen::MatrixXd a = jtj;
      for (Eigen::Index k = 0; k < n; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-300);
      Eigen::VectorXd step = a.ldlt().solve(-g);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      for (int h = 0; h < 8 && !accepted; ++h, step *= 0.5) {
        CurveParams trial = p;
        for (Eigen::Index k = 0; k < n; ++k) trial[k] += step(k);
        trial = project(f, trial);
        const double s = ssr_of(f, trial, pts);
        if (s < ssr) {
          accepted = true;
          const double gain = ssr - s;
          p = std::move(trial);
          ssr = s;
          lambda = std::max(lambda / 3.0, 1e-12);
          if (gain <= 1e-15 * std::max(ssr, 1e-300)) return {p, ssr};
        }
      }
      if (!accepted) lambda *= 10.0;
    }
    if (!accepted) break;
  }
  return {p, ssr};
}

}  // namespace curve_detail

/// Region of C where Theta is increasing: the maximal interval with positive
/// slope that contains the given anchor C, searched on a log grid up to
/// kCurveMaxC and refined by bisection on the slope sign.
inline std::pair<double, double> monotone_range(CurveFamily f, const CurveParams& p, double anchor) {
  const double lo = std::max(domain_lower(f, p), 0.0);
  auto rising = [&](double c) {
    if (!in_domain(f, p, c)) return false;
    const double s = curve_slope(f, p, c);
    return std::isfinite(s) && s > 0.0;
  };
  if (!(anchor > lo) || !rising(anchor)) return {1.0, 0.0};
  auto edge = [&](double inside, double outside) {
    for (int i = 0; i < 200; ++i) {
      const double mid = std::sqrt(inside * outside);
      if (mid == inside || mid == outside) break;
      (rising(mid) ? inside : outside) = mid;
    }
    return inside;
  };
  constexpr double kFactor = 1.02;
  double left = anchor;
  const double floor_c = std::max(lo * (1.0 + 1e-12), 1e-6);
  while (left / kFactor > floor_c && rising(left / kFactor)) left /= kFactor;
  if (left / kFactor > floor_c) left = edge(left, left / kFactor);
  else if (rising(floor_c)) left = floor_c;
  else left = edge(left, floor_c);
  double right = anchor;
  while (right * kFactor < kCurveMaxC && rising(right * kFactor)) right *= kFactor;
  right = right * kFactor < kCurveMaxC ? edge(right, right * kFactor) : kCurveMaxC;
  return {left, right};
}

inline void validate_points(const std::vector<CurvePoint>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].c > 0.0) || !std::isfinite(pts[i].c) || !std::isfinite(pts[i].a))
      throw InvalidArgument("fit_curve: C values must be positive and finite");
    for (std::size_t j = 0; j < i; ++j)
      if (pts[j].c == pts[i].c) throw InvalidArgument("fit_curve: C values must be distinct");
  }
}

/// Completes a CurveFit from family and parameters (residuals, domain, monotone range).
inline CurveFit make_curve_fit(CurveFamily f, CurveParams params, const std::vector<CurvePoint>& pts) {
  curve_detail::check_arity(f, params);
  CurveFit fit;
  fit.family = f;
  fit.params = std::move(params);
  fit.ssr = curve_detail::ssr_of(f, fit.params, pts, &fit.residuals);
  fit.ssr_over_q = pts.empty() ? 0.0 : fit.ssr / static_cast<double>(pts.size());
  fit.domain = {domain_lower(f, fit.params), kCurveMaxC};
  double anchor = 1.0;
  if (!pts.empty()) {
    std::vector<double> cs;
    for (const auto& q : pts) cs.push_back(q.c);
    std::sort(cs.begin(), cs.end());
    anchor = cs[cs.size() / 2];
  }
  fit.monotone = monotone_range(f, fit.params, anchor);
  return fit;
}

/// Least-squares fit of one family: `options.starts` random starts drawn from
/// the family priors, each refined by damped Gauss-Newton; the lowest SSR wins.
inline CurveFit fit_curve(const std::vector<CurvePoint>& pts, CurveFamily f, const FitOptions& options,
                          const RngStream& rng) {
  validate_points(pts);
  if (static_cast<int>(pts.size()) < arity(f))
    throw InvalidArgument(std::string(to_string(f)) + ": insufficient points (need " + std::to_string(arity(f)) + ")");
  const auto priors = curve_detail::start_priors(f);
  RngStream draw = rng.child(std::string(to_string(f)));
  CurveParams best;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (int s = 0; s < options.starts; ++s) {
    CurveParams p(priors.size());
    double ssr = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 100 && !std::isfinite(ssr); ++attempt) {
      for (std::size_t k = 0; k < priors.size(); ++k) {
        const auto& pr = priors[k];
        p[k] = pr.log_scale ? std::exp(draw.uniform(std::log(pr.lo), std::log(pr.hi))) : draw.uniform(pr.lo, pr.hi);
      }
      ssr = curve_detail::ssr_of(f, p, pts);
    }
    if (!std::isfinite(ssr)) continue;
    auto [q, s2] = curve_detail::refine(f, p, pts, options.max_iterations);
    if (s2 < best_ssr) {
      best_ssr = s2;
      best = std::move(q);
    }
  }
  if (!std::isfinite(best_ssr)) throw Error(std::string(to_string(f)) + ": all starts diverged");
  return make_curve_fit(f, best, pts);
}

struct ModelRanking {
  std::vector<CurveFit> fits;                                  // ascending SSR
  std::vector<std::pair<CurveFamily, std::string>> failures;  // family, reason
};

inline ModelRanking select_model(const std::vector<CurvePoint>& pts, const std::vector<CurveFamily>& families,
                                 const FitOptions& options, const RngStream& rng) {
  ModelRanking out;
  for (CurveFamily f : families) {
    try {
      out.fits.push_back(fit_curve(pts, f, options, rng));
    } catch (const Error& e) {
      out.failures.emplace_back(f, e.what());
    }
  }
  if (out.fits.empty()) throw Error("select_model: every family failed to fit");
  std::stable_sort(out.fits.begin(), out.fits.end(), [](const CurveFit& a, const CurveFit& b) { return a.ssr < b.ssr; });
  return out;
}

/// C = Theta^-1(A) on the monotone range. pow3 uses (alpha / (gamma - A))^(1/beta).
inline double invert_curve(const CurveFit& fit, double a) {
  if (fit.monotone_empty()) throw InvalidArgument("invert_curve: curve has no increasing range");
  const auto [lo, hi] = fit.monotone;
  if (fit.family == CurveFamily::pow3) {
    const double alpha = fit.params[0], beta = fit.params[1], gamma = fit.params[2];
    if (a >= gamma) throw InvalidArgument("invert_curve: accuracy at or above the asymptote is unreachable");
    const double c = std::pow(alpha / (gamma - a), 1.0 / beta);
    if (c < lo) throw InvalidArgument("invert_curve: accuracy below the curve's range");
    return c;
  }
  const double a_lo = fit(lo), a_hi = fit(hi);
  if (a >= a_hi) throw InvalidArgument("invert_curve: accuracy at or above the curve's supremum is unreachable");
  if (a < a_lo) throw InvalidArgument("invert_curve: accuracy below the curve's range");
  double l = lo, h = hi;
  for (int i = 0; i < 400; ++i) {
    const double mid = l > 0.0 ? std::sqrt(l * h) : 0.5 * (l + h);
    if (mid <= l || mid >= h) break;
    (fit(mid) < a ? l : h) = mid;
  }
  const double c = std::abs(fit(l) - a) <= std::abs(fit(h) - a) ? l : h;
  if (!(std::abs(fit(c) - a) <= 1e-10)) throw Error("invert_curve: bisection did not reach 1e-10");
  return c;
}

/// Reads `C,A` rows; a header line and `#` comment lines are skipped.
inline std::vector<CurvePoint> read_points_csv(std::istream& in) {
  std::vector<CurvePoint> pts;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("C,", 0) == 0) continue;
    }
    std::istringstream row(line);
    std::string c, a;
    if (!std::getline(row, c, ',') || !std::getline(row, a, ','))
      throw InvalidArgument("read_points_csv: malformed row '" + line + "'");
    try {
      pts.push_back({std::stod(c), std::stod(a)});
    } catch (const std::logic_error&) {
      throw InvalidArgument("read_points_csv: malformed row '" + line + "'");
    }
  }
  return pts;
}

inline std::vector<CurvePoint> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_points_csv(in);
}

/// CSV `family,param1,param2,param3,param4,ssr,ssr_over_q`; unused params are empty.
inline void write_fits_csv(std::ostream& out, const std::vector<CurveFit>& fits) {
  out << "family,param1,param2,param3,param4,ssr,ssr_over_q\n";
  out.precision(10);
  for (const auto& f : fits) {
    out << to_string(f.family);
    for (std::size_t k = 0; k < 4; ++k) {
      out << ',';
      if (k < f.params.size()) out << f.params[k];
    }
    out << ',' << f.ssr << ',' << f.ssr_over_q << '\n';
  }
}

/// Long-format sampled curves `family,C,A` on `count` log-spaced points in [c_lo, c_hi].
inline void write_curve_samples_csv(std::ostream& out, const std::vector<CurveFit>& fits, double c_lo, double c_hi,
                                    int count) {
  out << "family,C,A\n";
  out.precision(10);
  for (const auto& f : fits) {
    for (int i = 0; i < count; ++i) {
      const double c = c_lo * std::pow(c_hi / c_lo, count > 1 ? static_cast<double>(i) / (count - 1) : 0.0);
      if (!in_domain(f.family, f.params, c)) continue;
      out << to_string(f.family) << ',' << c << ',' << f(c) << '\n';
    }
  }
}

}  // namespace isac
