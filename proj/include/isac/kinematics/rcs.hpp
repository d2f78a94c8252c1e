#pragma once

#include <Eigen/Core>
#include <cmath>

#include "isac/core/constants.hpp"
#include "isac/core/error.hpp"

namespace isac {

using Vec3 = Eigen::Vector3d;

/// Semi-axes of an ellipsoid in its principal frame (m).
struct Ellipsoid {
  double a = 0.0;  // along local x
  double b = 0.0;  // along local y
  double c = 0.0;  // along local z

  Ellipsoid scaled(double k) const { return {a * k, b * k, c * k}; }
};

/// Monostatic RCS (m^2) of an ellipsoid viewed along `view`, a direction
/// expressed in the ellipsoid's principal frame. Physical-optics formula:
///   sigma = pi a^2 b^2 c^2 / (a^2 x^2 + b^2 y^2 + c^2 z^2)^2
/// with (x, y, z) the unit viewing direction.
inline double ellipsoid_rcs(const Ellipsoid& e, Vec3 view) {
  if (!(e.a > 0.0 && e.b > 0.0 && e.c > 0.0))
    throw InvalidArgument("ellipsoid_rcs: degenerate ellipsoid (zero semi-axis)");
  const double n = view.norm();
  if (!(n > 0.0)) throw InvalidArgument("ellipsoid_rcs: zero viewing direction");
  view /= n;
  const double a2 = e.a * e.a, b2 = e.b * e.b, c2 = e.c * e.c;
  const double den = a2 * view.x() * view.x() + b2 * view.y() * view.y() + c2 * view.z() * view.z();
  return kPi * a2 * b2 * c2 / (den * den);
}

/// Principal frame of a body primitive in world coordinates (columns are the
/// local x, y, z axes).
struct PrimitivePose {
  Vec3 center = Vec3::Zero();
  Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();
};

/// G_b: RCS of the primitive's ellipsoid at the instantaneous aspect towards the radar.
inline double primitive_gain(const Ellipsoid& shape, const PrimitivePose& pose, const Vec3& radar) {
  const Vec3 los = radar - pose.center;
  return ellipsoid_rcs(shape, pose.axes.transpose() * los);
}

}  // namespace isac
