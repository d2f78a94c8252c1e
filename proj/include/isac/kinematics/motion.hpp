#pragma once

#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "isac/core/error.hpp"
#include "isac/kinematics/rcs.hpp"

namespace isac {

enum class MotionClass { standing, pacing, walking };
enum class Subject { adult, child };

inline std::string_view to_string(MotionClass m) {
  switch (m) {
    case MotionClass::standing: return "standing";
    case MotionClass::pacing: return "pacing";
    case MotionClass::walking: return "walking";
  }
  return "?";
}
inline std::string_view to_string(Subject s) { return s == Subject::adult ? "adult" : "child"; }

inline MotionClass parse_motion_class(std::string_view s) {
  if (s == "standing") return MotionClass::standing;
  if (s == "pacing") return MotionClass::pacing;
  if (s == "walking") return MotionClass::walking;
  throw InvalidArgument("unknown motion class '" + std::string(s) + "'");
}
inline Subject parse_subject(std::string_view s) {
  if (s == "adult") return Subject::adult;
  if (s == "child") return Subject::child;
  throw InvalidArgument("unknown subject '" + std::string(s) + "'");
}

inline double subject_height(Subject s) { return s == Subject::adult ? 1.75 : 1.0; }

inline double default_speed(MotionClass m) {
  switch (m) {
    case MotionClass::standing: return 0.0;
    case MotionClass::pacing: return 0.5;
    case MotionClass::walking: return 1.0;
  }
  return 0.0;
}

/// One human motion to synthesize.
struct MotionSpec {
  MotionClass motion = MotionClass::standing;
  Subject subject = Subject::adult;
  double speed = 0.0;                  // m/s
  Vec3 start = Vec3::Zero();           // ground point under the torso, m
  Vec3 heading = Vec3::UnitX();        // horizontal direction of travel
  double duration = 1.0;               // s
  int num_primitives = 16;
  double pace_length = 1.5;            // one-way pacing distance, m
  double turn_duration = 0.6;          // time to turn around when pacing, s

  static MotionSpec make(MotionClass m, Subject s, Vec3 start, Vec3 heading, double duration) {
    MotionSpec spec;
    spec.motion = m;
    spec.subject = s;
    spec.speed = default_speed(m);
    spec.start = start;
    spec.heading = heading;
    spec.duration = duration;
    return spec;
  }

  double height() const { return subject_height(subject); }

  /// Gait cycle frequency f_g = v / (1.346 sqrt(h)) in Hz.
  double gait_frequency() const { return speed / (1.346 * std::sqrt(height())); }

  void validate() const {
    if (!(duration > 0.0)) throw InvalidArgument("MotionSpec: duration must be > 0");
    if (!(speed >= 0.0) || !std::isfinite(speed)) throw InvalidArgument("MotionSpec: speed must be >= 0");
    if (motion == MotionClass::standing && speed != 0.0)
      throw InvalidArgument("MotionSpec: standing requires speed 0");
    if (motion != MotionClass::standing && !(speed > 0.0))
      throw InvalidArgument("MotionSpec: moving subject requires speed > 0");
    if (num_primitives != 16) throw InvalidArgument("MotionSpec: the body model has 16 primitives");
    if (Vec3(heading.x(), heading.y(), 0.0).norm() < 1e-12)
      throw InvalidArgument("MotionSpec: heading must have a horizontal component");
    if (motion == MotionClass::pacing) {
      if (!(pace_length > 0.0)) throw InvalidArgument("MotionSpec: pace_length must be > 0");
      if (!(turn_duration > 0.0) || turn_duration * speed >= pace_length)
        throw InvalidArgument("MotionSpec: turn must fit inside one pacing leg");
    }
  }
};

/// Per-primitive samples on the slow-time grid.
struct PrimitiveTrack {
  std::string name;
  std::vector<Vec3> position;    // m
  std::vector<double> distance;  // D_b(t), m
  std::vector<double> gain;      // G_b(t), m^2
};

struct TrackSet {
  std::vector<double> time;  // s
  std::vector<PrimitiveTrack> primitives;

  std::size_t num_samples() const { return time.size(); }
  std::size_t num_primitives() const { return primitives.size(); }
};

namespace body {

// Segment lengths and heights as fractions of standing height (anthropometric
// tables for an average adult). Radii are given for a 1.75 m adult and scale
// linearly with height.
inline constexpr double kHipHeight = 0.530;
inline constexpr double kShoulderHeight = 0.818;
inline constexpr double kNeckHeight = 0.845;
inline constexpr double kHeadHeight = 0.936;
inline constexpr double kUpperTorsoHeight = 0.724;
inline constexpr double kLowerTorsoHeight = 0.580;
inline constexpr double kShoulderHalfWidth = 0.129;
inline constexpr double kHipHalfWidth = 0.0955;
inline constexpr double kUpperArm = 0.186;
inline constexpr double kForearm = 0.146;
inline constexpr double kHand = 0.108;
inline constexpr double kThigh = 0.245;
inline constexpr double kShank = 0.246;
inline constexpr double kFoot = 0.152;
inline constexpr double kAnkleHeight = 0.039;

// Swing amplitudes (rad) at full gait scale.
inline constexpr double kHipSwing = 0.40;
inline constexpr double kKneeBase = 0.25;
inline constexpr double kKneeSwing = 0.25;
inline constexpr double kShoulderSwing = 0.35;
inline constexpr double kElbowBase = 0.15;
inline constexpr double kElbowSwing = 0.125;

inline constexpr std::array<std::string_view, 16> kNames = {
    "head",          "neck",          "upper_torso",  "lower_torso",
    "upper_arm_l",   "upper_arm_r",   "lower_arm_l",  "lower_arm_r",
    "hand_l",        "hand_r",        "upper_leg_l",  "upper_leg_r",
    "lower_leg_l",   "lower_leg_r",   "foot_l",       "foot_r"};

enum Index : int {
  kHead, kNeck, kUpperTorso, kLowerTorso,
  kUpperArmL, kUpperArmR, kLowerArmL, kLowerArmR,
  kHandL, kHandR, kUpperLegL, kUpperLegR,
  kLowerLegL, kLowerLegR, kFootL, kFootR
};

/// Ellipsoid shapes for a 1.75 m adult; body-frame axes are (forward, left, up)
/// for rigid parts and (radius, radius, half-length) for limb segments.
inline Ellipsoid base_shape(int b) {
  switch (b) {
    case kHead: return {0.095, 0.080, 0.115};
    case kNeck: return {0.055, 0.055, 0.050};
    case kUpperTorso: return {0.110, 0.175, 0.130};
    case kLowerTorso: return {0.100, 0.150, 0.115};
    case kUpperArmL: case kUpperArmR: return {0.045, 0.045, kUpperArm * 1.75 / 2};
    case kLowerArmL: case kLowerArmR: return {0.035, 0.035, kForearm * 1.75 / 2};
    case kHandL: case kHandR: return {0.025, 0.025, kHand * 1.75 / 2};
    case kUpperLegL: case kUpperLegR: return {0.070, 0.070, kThigh * 1.75 / 2};
    case kLowerLegL: case kLowerLegR: return {0.050, 0.050, kShank * 1.75 / 2};
    case kFootL: case kFootR: return {kFoot * 1.75 / 2, 0.045, 0.035};
    default: break;
  }
  throw InvalidArgument("unknown primitive index");
}

/// Unit vector pointing down, rotated forward by `angle` in the sagittal plane.
inline Vec3 limb_direction(double angle) { return {std::sin(angle), 0.0, -std::cos(angle)}; }

/// Orthonormal frame whose z axis is `axis` (limb segments are axisymmetric).
inline Eigen::Matrix3d frame_along(const Vec3& axis) {
  const Vec3 z = axis.normalized();
  const Vec3 helper = std::abs(z.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  const Vec3 x = helper.cross(z).normalized();
  const Vec3 y = z.cross(x);
  Eigen::Matrix3d m;
  m.col(0) = x;
  m.col(1) = y;
  m.col(2) = z;
  return m;
}

/// Body-frame pose of all 16 primitives for gait phase `phase`, gait scale `s`
/// (0 for a still body) and height `h`. Body frame: x forward, y left, z up,
/// origin on the ground under the torso.
inline std::array<PrimitivePose, 16> local_poses(double phase, double s, double h) {
  std::array<PrimitivePose, 16> p{};
  auto rigid = [&](int b, Vec3 c) {
    p[b].center = c;
    p[b].axes = Eigen::Matrix3d::Identity();
  };
  rigid(kHead, {0.0, 0.0, kHeadHeight * h});
  rigid(kNeck, {0.0, 0.0, kNeckHeight * h});
  rigid(kUpperTorso, {0.0, 0.0, kUpperTorsoHeight * h});
  rigid(kLowerTorso, {0.0, 0.0, kLowerTorsoHeight * h});

  auto segment = [&](int b, const Vec3& from, const Vec3& dir, double len) {
    p[b].center = from + dir * (len / 2);
    p[b].axes = frame_along(dir);
    return Vec3(from + dir * len);
  };

  for (int side = 0; side < 2; ++side) {
    const double ph = phase + (side == 0 ? 0.0 : kPi);
    const double lateral = side == 0 ? 1.0 : -1.0;

    // Arms swing opposite to the same-side leg.
    const double shoulder = -s * kShoulderSwing * std::sin(ph);
    const double elbow = kElbowBase + s * kElbowSwing * (1.0 - std::sin(ph));
    const Vec3 sh(0.0, lateral * kShoulderHalfWidth * h, kShoulderHeight * h);
    const Vec3 elbow_pt = segment(side ? kUpperArmR : kUpperArmL, sh, limb_direction(shoulder), kUpperArm * h);
    const Vec3 wrist = segment(side ? kLowerArmR : kLowerArmL, elbow_pt, limb_direction(shoulder + elbow), kForearm * h);
    segment(side ? kHandR : kHandL, wrist, limb_direction(shoulder + elbow), kHand * h);

    const double hip = s * kHipSwing * std::sin(ph);
    const double knee = s * (kKneeBase + kKneeSwing * std::sin(ph - kPi / 3));
    const Vec3 hp(0.0, lateral * kHipHalfWidth * h, kHipHeight * h);
    const Vec3 knee_pt = segment(side ? kUpperLegR : kUpperLegL, hp, limb_direction(hip), kThigh * h);
    const Vec3 ankle = segment(side ? kLowerLegR : kLowerLegL, knee_pt, limb_direction(hip - knee), kShank * h);
    const int foot = side ? kFootR : kFootL;
    p[foot].center = ankle + Vec3(0.3 * kFoot * h, 0.0, -0.5 * kAnkleHeight * h);
    p[foot].axes = Eigen::Matrix3d::Identity();
  }
  return p;
}

}  // namespace body

/// Torso ground point and facing direction at time t.
struct BodyPlacement {
  Vec3 origin;
  Vec3 forward;
};

inline double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

inline BodyPlacement placement_at(const MotionSpec& spec, double t) {
  const Vec3 dir = Vec3(spec.heading.x(), spec.heading.y(), 0.0).normalized();
  const double d = spec.speed * t;
  if (spec.motion != MotionClass::pacing) return {spec.start + dir * d, dir};

  // Triangle wave along the heading; the body turns around smoothly across a
  // window centred on each reversal, always rotating the same way so a full
  // out-and-back period ends in the starting orientation.
  const double leg = spec.pace_length;
  const double period = 2.0 * leg;
  const double m = std::fmod(d, period);
  const double along = m <= leg ? m : period - m;

  const double j = std::round(d / leg);
  const double offset = (d - j * leg) / (spec.speed * spec.turn_duration);
  double progress = std::floor(d / leg);
  if (j >= 1.0 && std::abs(offset) < 0.5) progress = (j - 1.0) + smoothstep(offset + 0.5);
  const double angle = kPi * progress;
  const Vec3 fwd(dir.x() * std::cos(angle) - dir.y() * std::sin(angle),
                 dir.x() * std::sin(angle) + dir.y() * std::cos(angle), 0.0);
  return {spec.start + dir * along, fwd};
}

/// Gait amplitude scale in [0, 1.2]; zero for a still body.
inline double gait_scale(double speed) { return std::min(1.2, std::sqrt(std::max(0.0, speed))); }

/// Upper bound on any primitive's speed: bulk speed plus limb swing plus the
/// pacing turn.
inline double max_primitive_speed(const MotionSpec& spec) {
  using namespace body;
  const double h = spec.height();
  const double s = gait_scale(spec.speed);
  const double w = 2.0 * kPi * spec.gait_frequency() * s;
  // Angular rate amplitude times the longest lever each joint moves.
  const double leg = kThigh + kShank + kFoot;
  const double arm = kUpperArm + kForearm + kHand;
  const double limbs = w * h * std::max(kHipSwing * leg + kKneeSwing * (kShank + kFoot),
                                        kShoulderSwing * arm + kElbowSwing * (kForearm + kHand));
  double turn = 0.0;
  if (spec.motion == MotionClass::pacing) {
    const double radius = h * std::hypot(kShoulderHalfWidth + 0.05, kUpperArm + kForearm + kHand + kFoot);
    turn = kPi * 1.5 / spec.turn_duration * radius;
  }
  return spec.speed + limbs + turn;
}

/// World-frame poses of all primitives at time t.
inline std::array<PrimitivePose, 16> primitive_poses(const MotionSpec& spec, double t) {
  const double phase = 2.0 * kPi * spec.gait_frequency() * t;
  auto poses = body::local_poses(phase, gait_scale(spec.speed), spec.height());
  const BodyPlacement place = placement_at(spec, t);
  const Vec3 up = Vec3::UnitZ();
  const Vec3 left = up.cross(place.forward);
  Eigen::Matrix3d rot;
  rot.col(0) = place.forward;
  rot.col(1) = left;
  rot.col(2) = up;
  for (auto& p : poses) {
    p.center = place.origin + rot * p.center;
    p.axes = rot * p.axes;
  }
  return poses;
}

/// Samples {position, D_b, G_b} of every primitive on the slow-time grid.
inline TrackSet synthesize_tracks(const MotionSpec& spec, const Vec3& radar,
                                  const std::vector<double>& grid) {
  spec.validate();
  if (grid.empty()) throw InvalidArgument("synthesize_tracks: empty time grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("synthesize_tracks: grid must be strictly increasing");

  TrackSet out;
  out.time = grid;
  out.primitives.resize(16);
  for (int b = 0; b < 16; ++b) {
    out.primitives[b].name = std::string(body::kNames[b]);
    out.primitives[b].position.reserve(grid.size());
    out.primitives[b].distance.reserve(grid.size());
    out.primitives[b].gain.reserve(grid.size());
  }
  const double scale = spec.height() / 1.75;
  constexpr double kMargin = 0.05;

  for (double t : grid) {
    const auto poses = primitive_poses(spec, t);
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto& p : poses) {
      lo = lo.cwiseMin(p.center);
      hi = hi.cwiseMax(p.center);
    }
    if ((radar.array() >= lo.array() - kMargin).all() && (radar.array() <= hi.array() + kMargin).all())
      throw InvalidArgument("synthesize_tracks: radar lies inside the subject's bounding box");
    for (int b = 0; b < 16; ++b) {
      auto& tr = out.primitives[b];
      tr.position.push_back(poses[b].center);
      tr.distance.push_back((poses[b].center - radar).norm());
      tr.gain.push_back(primitive_gain(body::base_shape(b).scaled(scale), poses[b], radar));
    }
  }
  return out;
}

/// Uniform grid t_i = i * pri, i = 0..count-1.
inline std::vector<double> slow_time_grid(std::size_t count, double pri) {
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = static_cast<double>(i) * pri;
  return g;
}

/// CSV with header `t_s,b,x_m,y_m,z_m,D_m,G`.
inline void write_tracks_csv(std::ostream& out, const TrackSet& tracks) {
  out << "t_s,b,x_m,y_m,z_m,D_m,G\n";
  out.precision(10);
  for (std::size_t i = 0; i < tracks.num_samples(); ++i) {
    for (std::size_t b = 0; b < tracks.num_primitives(); ++b) {
      const auto& tr = tracks.primitives[b];
      const Vec3& p = tr.position[i];
      out << tracks.time[i] << ',' << b << ',' << p.x() << ',' << p.y() << ',' << p.z() << ','
          << tr.distance[i] << ',' << tr.gain[i] << '\n';
    }
  }
}

}  // namespace isac
