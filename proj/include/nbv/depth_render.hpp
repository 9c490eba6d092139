#pragma once

#include "nbv/camera.hpp"
#include "nbv/geometry.hpp"

#include <optional>

namespace nbv {

/// Distance along ray origin + t*dir (dir unit length) to the first surface:
/// box faces of the scene or the ground plane. Returns nullopt when nothing
/// is struck. A ray starting inside a box hits at t = 0.
std::optional<double> ray_hit(const Scene& scene, const Vec3& origin, const Vec3& dir);

/// Renders a synthetic depth capture of the scene from the given pose.
/// Surfaces closer than min_range produce the no-return sentinel, absence of
/// any surface within max_range produces the beyond-range sentinel.
///
/// Throws std::domain_error when the camera is inside scene geometry (a
/// scenario authoring bug, not a recoverable condition).
DepthImage render_depth(const Scene& scene, const ViewPose& pose, const CameraModel& model);

}  // namespace nbv
