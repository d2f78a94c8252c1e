#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "isac/core/error.hpp"

namespace isac {

enum class CurveFamily { vapor_pressure, pow3, log_power, exp4, log_log_linear, ilog2, pow4 };

inline constexpr std::array<CurveFamily, 7> kAllFamilies = {
    CurveFamily::vapor_pressure, CurveFamily::pow3,   CurveFamily::log_power, CurveFamily::exp4,
    CurveFamily::log_log_linear, CurveFamily::ilog2, CurveFamily::pow4};

inline std::string_view to_string(CurveFamily f) {
  switch (f) {
    case CurveFamily::vapor_pressure: return "vapor_pressure";
    case CurveFamily::pow3: return "pow3";
    case CurveFamily::log_power: return "log_power";
    case CurveFamily::exp4: return "exp4";
    case CurveFamily::log_log_linear: return "log_log_linear";
    case CurveFamily::ilog2: return "ilog2";
    case CurveFamily::pow4: return "pow4";
  }
  return "?";
}

inline CurveFamily parse_curve_family(std::string_view s) {
  for (CurveFamily f : kAllFamilies)
    if (to_string(f) == s) return f;
  throw InvalidArgument("unknown curve family '" + std::string(s) + "'");
}

/// Parameters in the order (alpha, beta, gamma, epsilon), truncated to the arity.
///   vapor_pressure  exp(a + b/C)
///   pow3            g - a C^-b
///   log_power       a / (1 + (C / e^b)^g)
///   exp4            g - exp(-a C^e + b)
///   log_log_linear  log(a log C + b)
///   ilog2           b - a / log C
///   pow4            g - (a C + b)^e
inline int arity(CurveFamily f) {
  switch (f) {
    case CurveFamily::vapor_pressure:
    case CurveFamily::log_log_linear:
    case CurveFamily::ilog2: return 2;
    case CurveFamily::pow3:
    case CurveFamily::log_power: return 3;
    case CurveFamily::exp4:
    case CurveFamily::pow4: return 4;
  }
  return 0;
}

using CurveParams = std::vector<double>;

/// Box bounds enforced by projection during fitting.
struct ParamBounds {
  std::vector<double> lo, hi;
};

inline ParamBounds param_bounds(CurveFamily f) {
  switch (f) {
    case CurveFamily::vapor_pressure: return {{-20, -1e6}, {20, 1e6}};
    case CurveFamily::pow3: return {{0, 1e-6, 0}, {1e15, 20, 1.2}};
    case CurveFamily::log_power: return {{0, -50, -20}, {1.2, 50, 20}};
    case CurveFamily::exp4: return {{0, -100, 0, 0}, {1e4, 100, 1.2, 3}};
    case CurveFamily::log_log_linear: return {{-100, -1e3}, {100, 1e3}};
    case CurveFamily::ilog2: return {{-1e3, -10}, {1e3, 10}};
    case CurveFamily::pow4: return {{0, -1e6, 0, -20}, {1e6, 1e6, 1.2, 20}};
  }
  return {};
}

namespace curve_detail {

inline void check_arity(CurveFamily f, const CurveParams& p) {
  if (static_cast<int>(p.size()) != arity(f))
    throw InvalidArgument(std::string(to_string(f)) + ": expected " + std::to_string(arity(f)) + " parameters");
}

[[noreturn]] inline void domain_error(CurveFamily f, const std::string& what) {
  throw InvalidArgument(std::string(to_string(f)) + ": " + what);
}

}  // namespace curve_detail

/// True when the expression is defined at C for parameters p.
inline bool in_domain(CurveFamily f, const CurveParams& p, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) return false;
  switch (f) {
    case CurveFamily::log_log_linear: return p[0] * std::log(c) + p[1] > 0.0;
    case CurveFamily::ilog2: return c > 1.0;
    case CurveFamily::pow4: return p[0] * c + p[1] > 0.0;
    default: return true;
  }
}

/// Theta(C).
inline double eval_curve(CurveFamily f, const CurveParams& p, double c) {
  curve_detail::check_arity(f, p);
  if (!in_domain(f, p, c)) {
    switch (f) {
      case CurveFamily::log_log_linear: curve_detail::domain_error(f, "requires alpha log C + beta > 0");
      case CurveFamily::ilog2: curve_detail::domain_error(f, "requires C > 1");
      case CurveFamily::pow4: curve_detail::domain_error(f, "requires alpha C + beta > 0");
      default: curve_detail::domain_error(f, "requires C > 0");
    }
  }
  const double lc = std::log(c);
  switch (f) {
    case CurveFamily::vapor_pressure: return std::exp(p[0] + p[1] / c);
    case CurveFamily::pow3: return p[2] - p[0] * std::pow(c, -p[1]);
    case CurveFamily::log_power: return p[0] / (1.0 + std::exp(p[2] * (lc - p[1])));
    case CurveFamily::exp4: return p[2] - std::exp(-p[0] * std::pow(c, p[3]) + p[1]);
    case CurveFamily::log_log_linear: return std::log(p[0] * lc + p[1]);
    case CurveFamily::ilog2: return p[1] - p[0] / lc;
    case CurveFamily::pow4: return p[2] - std::pow(p[0] * c + p[1], p[3]);
  }
  return 0.0;
}

/// dTheta/dp at C, same order as the parameters.
inline std::vector<double> curve_jacobian(CurveFamily f, const CurveParams& p, double c) {
  eval_curve(f, p, c);  // arity and domain checks
  const double lc = std::log(c);
  switch (f) {
    case CurveFamily::vapor_pressure: {
      const double v = std::exp(p[0] + p[1] / c);
      return {v, v / c};
    }
    case CurveFamily::pow3: {
      const double q = std::pow(c, -p[1]);
      return {-q, p[0] * q * lc, 1.0};
    }
    case CurveFamily::log_power: {
      const double u = std::exp(p[2] * (lc - p[1]));
      const double d = (1.0 + u) * (1.0 + u);
      return {1.0 / (1.0 + u), p[0] * p[2] * u / d, -p[0] * u * (lc - p[1]) / d};
    }
    case CurveFamily::exp4: {
      const double ce = std::pow(c, p[3]);
      const double e = std::exp(-p[0] * ce + p[1]);
      return {e * ce, -e, 1.0, e * p[0] * ce * lc};
    }
    case CurveFamily::log_log_linear: {
      const double q = p[0] * lc + p[1];
      return {lc / q, 1.0 / q};
    }
    case CurveFamily::ilog2: return {-1.0 / lc, 1.0};
    case CurveFamily::pow4: {
      const double q = p[0] * c + p[1];
      const double qe = std::pow(q, p[3]);
      const double d = -p[3] * qe / q;
      return {d * c, d, 1.0, -qe * std::log(q)};
    }
  }
  return {};
}

/// dTheta/dC.
inline double curve_slope(CurveFamily f, const CurveParams& p, double c) {
  const double v = eval_curve(f, p, c);
  const double lc = std::log(c);
  switch (f) {
    case CurveFamily::vapor_pressure: return -v * p[1] / (c * c);
    case CurveFamily::pow3: return p[0] * p[1] * std::pow(c, -p[1] - 1.0);
    case CurveFamily::log_power: {
      const double u = std::exp(p[2] * (lc - p[1]));
      return -p[0] * p[2] * u / (c * (1.0 + u) * (1.0 + u));
    }
    case CurveFamily::exp4: {
      const double ce = std::pow(c, p[3]);
      return std::exp(-p[0] * ce + p[1]) * p[0] * p[3] * ce / c;
    }
    case CurveFamily::log_log_linear: return p[0] / (c * (p[0] * lc + p[1]));
    case CurveFamily::ilog2: return p[0] / (c * lc * lc);
    case CurveFamily::pow4: {
      const double q = p[0] * c + p[1];
      return -p[3] * p[0] * std::pow(q, p[3] - 1.0);
    }
  }
  return 0.0;
}

/// Smallest C > 0 at which the expression is defined (open lower ends are
/// nudged just inside), and the largest C considered.
inline constexpr double kCurveMaxC = 1e12;

inline double domain_lower(CurveFamily f, const CurveParams& p) {
  switch (f) {
    case CurveFamily::ilog2: return 1.0;
    case CurveFamily::log_log_linear:
      // alpha log C + beta > 0.
      if (p[0] > 0.0) return std::exp(-p[1] / p[0]);
      return p[1] > 0.0 ? 0.0 : kCurveMaxC;
    case CurveFamily::pow4:
      if (p[0] > 0.0) return std::max(0.0, -p[1] / p[0]);
      return p[1] > 0.0 ? 0.0 : kCurveMaxC;
    default: return 0.0;
  }
}

}  // namespace isac
