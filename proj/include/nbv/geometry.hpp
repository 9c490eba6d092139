#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <vector>

namespace nbv {

using Vec3 = Eigen::Vector3d;

// Axis-aligned box with closed membership on all faces.
using Aabb = Eigen::AlignedBox3d;

inline constexpr double kPi = std::numbers::pi;

inline double deg(double radians) { return radians * 180.0 / kPi; }
inline double rad(double degrees) { return degrees * kPi / 180.0; }

/// Wraps an angle into [-pi, pi).
inline double normalize_yaw(double yaw) {
  double a = std::fmod(yaw + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

/// Signed smallest difference a-b, wrapped into [-pi, pi).
inline double yaw_diff(double a, double b) { return normalize_yaw(a - b); }

inline bool point_in_aabb(const Vec3& p, const Aabb& box) {
  return box.contains(p);
}

/// Camera (or end-effector) pose: position plus aim direction given as
/// yaw about +z and pitch as elevation above the horizontal plane.
struct ViewPose {
  Vec3 position{0.0, 0.0, 0.0};
  double yaw = 0.0;    // [-pi, pi)
  double pitch = 0.0;  // [-pi/2, pi/2], positive aims up

  ViewPose() = default;
  ViewPose(const Vec3& p, double yaw_in, double pitch_in = 0.0)
      : position(p), yaw(normalize_yaw(yaw_in)), pitch(pitch_in) {}

  /// Unit aim direction in world coordinates.
  Vec3 direction() const {
    const double cp = std::cos(pitch);
    return {std::cos(yaw) * cp, std::sin(yaw) * cp, std::sin(pitch)};
  }
};

/// Aim angles of the ray from `from` toward `to`.
inline void aim_at(const Vec3& from, const Vec3& to, double& yaw, double& pitch) {
  const Vec3 d = to - from;
  yaw = std::atan2(d.y(), d.x());
  pitch = std::atan2(d.z(), std::hypot(d.x(), d.y()));
}

/// Static world: axis-aligned solid boxes above an infinite ground plane.
struct Scene {
  std::vector<Aabb> boxes;
  double ground_z = 0.0;
};

}  // namespace nbv
