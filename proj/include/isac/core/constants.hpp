#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace isac {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 3.0e8;  // m/s
inline constexpr double kPi = std::numbers::pi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace isac
