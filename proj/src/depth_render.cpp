#include "nbv/depth_render.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbv {
namespace {

// Slab test. Returns entry distance (clamped to 0 when the origin is inside),
// or nullopt on a miss. Rays exactly parallel to a face count as a miss when
// outside the slab.
std::optional<double> ray_box(const Aabb& box, const Vec3& o, const Vec3& d) {
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(d[axis]) < 1e-15) {
      if (o[axis] < box.min()[axis] || o[axis] > box.max()[axis]) return std::nullopt;
      continue;
    }
    double lo = (box.min()[axis] - o[axis]) / d[axis];
    double hi = (box.max()[axis] - o[axis]) / d[axis];
    if (lo > hi) std::swap(lo, hi);
    t0 = std::max(t0, lo);
    t1 = std::min(t1, hi);
    if (t0 > t1) return std::nullopt;
  }
  return t0;
}

bool inside_any_box(const Scene& scene, const Vec3& p) {
  for (const Aabb& b : scene.boxes)
    if (b.contains(p)) return true;
  return false;
}

}  // namespace

std::optional<double> ray_hit(const Scene& scene, const Vec3& origin, const Vec3& dir) {
  std::optional<double> best;
  for (const Aabb& box : scene.boxes) {
    if (auto t = ray_box(box, origin, dir)) {
      if (!best || *t < *best) best = t;
    }
  }
  if (dir.z() < -1e-15 && origin.z() > scene.ground_z) {
    const double t = (scene.ground_z - origin.z()) / dir.z();
    if (!best || t < *best) best = t;
  }
  return best;
}

DepthImage render_depth(const Scene& scene, const ViewPose& pose, const CameraModel& model) {
  model.validate();
  if (inside_any_box(scene, pose.position) || pose.position.z() < scene.ground_z)
    throw std::domain_error("render: camera inside scene geometry");

  DepthImage img(model.width, model.height);

  const double cy = std::cos(pose.yaw), sy = std::sin(pose.yaw);
  const double cp = std::cos(pose.pitch), sp = std::sin(pose.pitch);

  for (int v = 0; v < model.height; ++v) {
    const double el = model.elevation_of_row(v);
    const double ce = std::cos(el), se = std::sin(el);
    const double cpe = cp * ce - sp * se;
    const double spe = sp * ce + cp * se;
    for (int u = 0; u < model.width; ++u) {
      const double az = model.azimuth_of_col(u);
      const double ca = std::cos(az), sa = std::sin(az);
      const Vec3 dir(cy * ca * cpe - sy * sa * cpe,
                     sy * ca * cpe + cy * sa * cpe,
                     spe);
      float& px = img.at(u, v);
      const auto t = ray_hit(scene, pose.position, dir);
      if (!t || *t > model.max_range) {
        px = DepthImage::beyond_range();
      } else if (*t < model.min_range) {
        px = DepthImage::no_return();
      } else {
        px = static_cast<float>(*t);
      }
    }
  }
  return img;
}

}  // namespace nbv
