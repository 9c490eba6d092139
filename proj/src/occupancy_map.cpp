#include "nbv/occupancy_map.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nbv {
namespace {

// Nudge applied along the ray so a hit point lying exactly on a box face
// lands inside the struck voxel instead of the air voxel in front of it.
constexpr double kHitNudge = 1e-6;

// Clips segment [a, b] to an axis-aligned box, returning parametric [t0, t1]
// within [0, 1], or false when the segment misses the box entirely.
bool clip_segment(const Aabb& box, const Vec3& a, const Vec3& b, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  const Vec3 d = b - a;
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(d[axis]) < 1e-15) {
      if (a[axis] < box.min()[axis] || a[axis] > box.max()[axis]) return false;
      continue;
    }
    double lo = (box.min()[axis] - a[axis]) / d[axis];
    double hi = (box.max()[axis] - a[axis]) / d[axis];
    if (lo > hi) std::swap(lo, hi);
    t0 = std::max(t0, lo);
    t1 = std::min(t1, hi);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

const char* to_string(VoxelState s) {
  switch (s) {
    case VoxelState::Unknown: return "unknown";
    case VoxelState::Free: return "free";
    case VoxelState::Occupied: return "occupied";
  }
  return "unknown";
}

void LogOddsParams::validate() const {
  if (!(hit > 0.0)) throw std::invalid_argument("log-odds: hit increment must be positive");
  if (!(miss < 0.0)) throw std::invalid_argument("log-odds: miss increment must be negative");
  if (!(clamp_min < clamp_max)) throw std::invalid_argument("log-odds: clamp interval empty");
  if (occupied_threshold < clamp_min || occupied_threshold > clamp_max)
    throw std::invalid_argument("log-odds: threshold outside clamp interval");
}

OccupancyMap::OccupancyMap(const Aabb& bounds, double resolution, const LogOddsParams& params)
    : bounds_(bounds), params_(params) {
  params_.validate();
  if (bounds.isEmpty()) throw std::invalid_argument("map: empty bounds");
  Aabb extent = bounds;
  extent.min() -= Vec3::Constant(resolution);
  extent.max() += Vec3::Constant(resolution);
  grid_ = GridIndexer(extent, resolution);
  log_odds_.assign(static_cast<size_t>(grid_.cell_count()), 0.0f);
  observed_.assign(static_cast<size_t>(grid_.cell_count()), 0);
}

void OccupancyMap::update(const VoxelKey& key, double delta) {
  if (!grid_.valid(key)) return;
  const std::int64_t idx = grid_.flat(key);
  if (!observed_[idx]) {
    observed_[idx] = 1;
    ++observed_total_;
  }
  const double v = std::clamp(log_odds_[idx] + delta, params_.clamp_min, params_.clamp_max);
  log_odds_[idx] = static_cast<float>(v);
}

void OccupancyMap::mark_occupied(const Vec3& p) {
  const VoxelKey key = grid_.key_of(p);
  update(key, params_.clamp_max - params_.clamp_min);
}

void OccupancyMap::mark_free_ball(const Vec3& center, double radius) {
  mark_free_ball(center, radius, nullptr);
}

void OccupancyMap::mark_free_ball(const Vec3& center, double radius,
                                  const std::function<bool(const Vec3&)>& blocked) {
  const Aabb box(center - Vec3::Constant(radius), center + Vec3::Constant(radius));
  const VoxelKey lo = grid_.key_of(box.min());
  const VoxelKey hi = grid_.key_of(box.max());
  const double r2 = radius * radius;
  for (int k = lo.k; k <= hi.k; ++k)
    for (int j = lo.j; j <= hi.j; ++j)
      for (int i = lo.i; i <= hi.i; ++i) {
        const VoxelKey key{i, j, k};
        if (!grid_.valid(key)) continue;
        const Vec3 c = grid_.center_of(key);
        if ((c - center).squaredNorm() > r2) continue;
        if (blocked && blocked(c)) continue;
        update(key, params_.miss);
      }
}

void for_each_voxel_on_segment(const GridIndexer& grid, const Vec3& a, const Vec3& b,
                               const std::function<bool(const VoxelKey&)>& visit) {
  double t0, t1;
  if (!clip_segment(grid.coverage(), a, b, t0, t1)) return;
  const Vec3 d = b - a;
  const double seg_len = d.norm();
  if (seg_len < 1e-15) {
    const VoxelKey k = grid.key_of(a);
    if (grid.valid(k)) visit(k);
    return;
  }

  // Pull the clipped endpoints a hair inside the coverage box so the start
  // voxel is well defined when the segment begins exactly on a face.
  const double t_eps = 1e-12;
  const Vec3 start = a + std::min(t0 + t_eps, 1.0) * d;
  const Vec3 end = a + std::max(t1 - t_eps, 0.0) * d;

  VoxelKey key = grid.key_of(start);
  const VoxelKey goal = grid.key_of(end);
  if (!grid.valid(key)) return;

  const double res = grid.resolution();
  int step[3];
  double t_max[3], t_delta[3];
  const int key_arr[3] = {key.i, key.j, key.k};
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] > 1e-15) {
      step[axis] = 1;
      const double boundary = grid.origin()[axis] + (key_arr[axis] + 1) * res;
      t_max[axis] = (boundary - a[axis]) / d[axis];
      t_delta[axis] = res / d[axis];
    } else if (d[axis] < -1e-15) {
      step[axis] = -1;
      const double boundary = grid.origin()[axis] + key_arr[axis] * res;
      t_max[axis] = (boundary - a[axis]) / d[axis];
      t_delta[axis] = -res / d[axis];
    } else {
      step[axis] = 0;
      t_max[axis] = std::numeric_limits<double>::infinity();
      t_delta[axis] = std::numeric_limits<double>::infinity();
    }
  }

  while (true) {
    if (!visit(key)) return;
    if (key == goal) return;
    const int axis = (t_max[0] < t_max[1]) ? (t_max[0] < t_max[2] ? 0 : 2)
                                           : (t_max[1] < t_max[2] ? 1 : 2);
    if (t_max[axis] > t1 + 1e-9) return;  // numeric safety: past the segment
    t_max[axis] += t_delta[axis];
    if (axis == 0) key.i += step[0];
    else if (axis == 1) key.j += step[1];
    else key.k += step[2];
    if (!grid.valid(key)) return;
  }
}

void integrate_depth(OccupancyMap& map, const ViewPose& pose, const CameraModel& model,
                     const DepthImage& depth) {
  model.validate();
  if (depth.width != model.width || depth.height != model.height)
    throw std::invalid_argument("integrate: depth image does not match camera model");
  if (!map.grid_.contains(pose.position))
    throw std::invalid_argument("integrate: camera outside the mapped extent");

  const double cy = std::cos(pose.yaw), sy = std::sin(pose.yaw);
  const double cp = std::cos(pose.pitch), sp = std::sin(pose.pitch);

  for (int v = 0; v < model.height; ++v) {
    const double el = model.elevation_of_row(v);
    const double ce = std::cos(el), se = std::sin(el);
    // elevation adds to camera pitch: sin(p+e), cos(p+e) via angle addition
    const double cpe = cp * ce - sp * se;
    const double spe = sp * ce + cp * se;
    for (int u = 0; u < model.width; ++u) {
      const float r = depth.at(u, v);
      if (std::isnan(r)) continue;

      const double az = model.azimuth_of_col(u);
      const double ca = std::cos(az), sa = std::sin(az);
      // Angular-grid ray: azimuth yaw+az, elevation pitch+el, assembled via
      // the angle-addition identities so only per-row/per-column trig is paid.
      const Vec3 dir(cy * ca * cpe - sy * sa * cpe,
                     sy * ca * cpe + cy * sa * cpe,
                     spe);
      const bool hit = DepthImage::is_hit(r);
      const double reach = hit ? static_cast<double>(r) : model.max_range;

      const Vec3 start = pose.position + model.min_range * dir;
      const Vec3 end = pose.position + (reach + (hit ? kHitNudge : 0.0)) * dir;
      const VoxelKey hit_key = map.grid_.key_of(end);

      for_each_voxel_on_segment(map.grid_, start, end, [&](const VoxelKey& key) {
        if (hit && key == hit_key) {
          map.update(key, map.params_.hit);
        } else {
          map.update(key, map.params_.miss);
        }
        return true;
      });
    }
  }
}

bool OccupancyMap::segment_ok(const Vec3& a, const Vec3& b, double radius,
                              bool unknown_blocks) const {
  Aabb swept(a.cwiseMin(b) - Vec3::Constant(radius), a.cwiseMax(b) + Vec3::Constant(radius));
  const VoxelKey lo = grid_.key_of(swept.min());
  const VoxelKey hi = grid_.key_of(swept.max());
  const Vec3 d = b - a;
  const double len2 = d.squaredNorm();
  const double r2 = radius * radius;
  for (int k = lo.k; k <= hi.k; ++k)
    for (int j = lo.j; j <= hi.j; ++j)
      for (int i = lo.i; i <= hi.i; ++i) {
        const VoxelKey key{i, j, k};
        const Vec3 c = grid_.center_of(key);
        double t = len2 > 0.0 ? (c - a).dot(d) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        if ((c - (a + t * d)).squaredNorm() > r2) continue;
        const VoxelState st = state_at(key);
        if (st == VoxelState::Occupied || (unknown_blocks && st != VoxelState::Free))
          return false;
      }
  return true;
}

bool OccupancyMap::is_segment_free(const Vec3& a, const Vec3& b, double radius) const {
  return segment_ok(a, b, radius, true);
}

bool OccupancyMap::is_segment_clear(const Vec3& a, const Vec3& b, double radius) const {
  return segment_ok(a, b, radius, false);
}

RegionCounts OccupancyMap::count_states_in(const Aabb& region) const {
  RegionCounts counts;
  // Voxels whose centers can lie inside the region; centers sit at half-voxel
  // offsets so a region aligned to the grid has no boundary ambiguity.
  const double res = grid_.resolution();
  const VoxelKey lo = grid_.key_of(region.min() + Vec3::Constant(0.5 * res));
  const VoxelKey hi = grid_.key_of(region.max() - Vec3::Constant(0.5 * res));
  for (int k = std::max(lo.k, 0); k <= std::min(hi.k, grid_.dim(2) - 1); ++k)
    for (int j = std::max(lo.j, 0); j <= std::min(hi.j, grid_.dim(1) - 1); ++j)
      for (int i = std::max(lo.i, 0); i <= std::min(hi.i, grid_.dim(0) - 1); ++i) {
        const VoxelKey key{i, j, k};
        if (!region.contains(grid_.center_of(key))) continue;
        switch (state_at(key)) {
          case VoxelState::Unknown: ++counts.unknown; break;
          case VoxelState::Free: ++counts.free; break;
          case VoxelState::Occupied: ++counts.occupied; break;
        }
      }
  return counts;
}

void OccupancyMap::save_voxels(std::ostream& os) const {
  os << "# grid " << grid_.origin().x() << " " << grid_.origin().y() << " " << grid_.origin().z()
     << " " << grid_.resolution() << " " << grid_.dim(0) << " " << grid_.dim(1) << " "
     << grid_.dim(2) << "\n";
  os << "# i j k state log_odds\n";
  for (std::int64_t idx = 0; idx < grid_.cell_count(); ++idx) {
    if (!observed_[idx]) continue;
    const VoxelKey key = grid_.unflat(idx);
    os << key.i << " " << key.j << " " << key.k << " " << to_string(state_at(key)) << " "
       << log_odds_[idx] << "\n";
  }
}

void OccupancyMap::save_point_cloud(std::ostream& os) const {
  os << "# x y z state\n";
  for (std::int64_t idx = 0; idx < grid_.cell_count(); ++idx) {
    if (!observed_[idx]) continue;
    const VoxelKey key = grid_.unflat(idx);
    const Vec3 c = grid_.center_of(key);
    os << c.x() << " " << c.y() << " " << c.z() << " " << to_string(state_at(key)) << "\n";
  }
}

VoxelDump load_voxels(std::istream& is) {
  VoxelDump dump;
  std::string line;
  bool have_grid = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string tag;
      ss >> tag;
      if (tag == "grid") {
        ss >> dump.origin.x() >> dump.origin.y() >> dump.origin.z() >> dump.resolution >>
            dump.dims[0] >> dump.dims[1] >> dump.dims[2];
        have_grid = !ss.fail();
      }
      continue;
    }
    std::istringstream ss(line);
    VoxelRecord rec;
    std::string state;
    ss >> rec.key.i >> rec.key.j >> rec.key.k >> state >> rec.log_odds;
    if (ss.fail()) throw std::runtime_error("voxel file: malformed line: " + line);
    if (state == "free") rec.state = VoxelState::Free;
    else if (state == "occupied") rec.state = VoxelState::Occupied;
    else if (state == "unknown") rec.state = VoxelState::Unknown;
    else throw std::runtime_error("voxel file: unknown state: " + state);
    dump.voxels.push_back(rec);
  }
  if (!have_grid) throw std::runtime_error("voxel file: missing '# grid ...' header");
  return dump;
}

void save_point_cloud(const VoxelDump& dump, std::ostream& os) {
  os << "# x y z state\n";
  for (const VoxelRecord& rec : dump.voxels) {
    const Vec3 c = dump.origin + dump.resolution * Vec3(rec.key.i + 0.5, rec.key.j + 0.5,
                                                        rec.key.k + 0.5);
    os << c.x() << " " << c.y() << " " << c.z() << " ";
    switch (rec.state) {
      case VoxelState::Free: os << "free"; break;
      case VoxelState::Occupied: os << "occupied"; break;
      case VoxelState::Unknown: os << "unknown"; break;
    }
    os << "\n";
  }
}

}  // namespace nbv
