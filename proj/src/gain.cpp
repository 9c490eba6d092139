#include "nbv/gain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace nbv {
namespace {

// All gain marching shares one discretization so the sliding-window yaw
// search sums exactly the same bins a direct evaluation would march.
//
// Azimuth bins tile the full circle (bin m is centered at -pi + (m+0.5)*dt);
// an aim window covers a fixed count of consecutive bins, selected half-open
// by bin center, so any two evaluations at the same yaw see identical rays
// and splitting a window never double-counts a bin. Polar bands tile the
// vertical field of view around the aim pitch, radial shells tile
// [0, max_range]; sampling at shell/band centers makes the summed cell
// volumes telescope to the exact wedge volume.
struct WedgeGrid {
  int n_az;
  double d_theta;
  int n_win;
  int n_phi;
  double d_phi;
  int n_r;
  double d_r;
  std::vector<double> shell_r;    // radial sample points
  std::vector<double> shell_vol;  // 2 r^2 dr + dr^3/6 per shell

  WedgeGrid(const CameraModel& model, const RayMarchSpec& spec) {
    n_az = std::max(8, static_cast<int>(std::ceil(2.0 * kPi / spec.delta_theta - 1e-9)));
    d_theta = 2.0 * kPi / n_az;
    n_win = std::clamp(static_cast<int>(std::llround(model.h_fov / d_theta)), 1, n_az);
    n_phi = std::max(1, static_cast<int>(std::ceil(model.v_fov / spec.delta_phi - 1e-9)));
    d_phi = model.v_fov / n_phi;
    n_r = std::max(1, static_cast<int>(std::ceil(model.max_range / spec.delta_r - 1e-9)));
    d_r = model.max_range / n_r;
    shell_r.resize(n_r);
    shell_vol.resize(n_r);
    for (int k = 0; k < n_r; ++k) {
      const double r = (k + 0.5) * d_r;
      shell_r[k] = r;
      shell_vol[k] = 2.0 * r * r * d_r + d_r * d_r * d_r / 6.0;
    }
  }

  double bin_center(int m) const { return -kPi + (m + 0.5) * d_theta; }

  // Index of the first bin whose center falls in [yaw - width/2, ...), where
  // width is the effective window n_win * d_theta.
  int first_window_bin(double yaw) const {
    const double lo = normalize_yaw(yaw) - 0.5 * n_win * d_theta;
    const double x = (lo + kPi) / d_theta - 0.5;
    int m0 = static_cast<int>(std::ceil(x - 1e-9));
    m0 %= n_az;
    if (m0 < 0) m0 += n_az;
    return m0;
  }
};

struct Band {
  double sin_phi;
  double cos_phi;
  double vol_scale;  // d_theta * sin(phi) * sin(d_phi/2)
};

std::vector<Band> make_bands(const WedgeGrid& w, const CameraModel& model, double pitch) {
  std::vector<Band> bands;
  bands.reserve(w.n_phi);
  const double phi_lo = 0.5 * kPi - pitch - 0.5 * model.v_fov;
  const double half = std::sin(0.5 * w.d_phi);
  for (int j = 0; j < w.n_phi; ++j) {
    const double phi = phi_lo + (j + 0.5) * w.d_phi;
    if (phi <= 0.0 || phi >= kPi) continue;  // clipped at the poles
    const double s = std::sin(phi);
    bands.push_back({s, std::cos(phi), w.d_theta * s * half});
  }
  return bands;
}

// Marches every band of one azimuth bin. A ray stops at its first Occupied
// sample; Unknown samples inside the bounds accrue their cell volume; Free
// and out-of-bounds samples are stepped through.
double march_bin(const OccupancyMap& map, const Aabb& bounds, const Vec3& pos, double az_cos,
                 double az_sin, const std::vector<Band>& bands, const WedgeGrid& w) {
  // Once a ray is outside both the grid and the counting bounds and moving
  // away on some axis it can never contribute or hit anything again, so the
  // remaining shells are skipped. This changes nothing about the result.
  const GridIndexer& grid = map.grid();
  const Vec3 grid_lo = grid.origin();
  const Vec3 grid_hi = grid.origin() + grid.resolution() * Vec3(grid.dim(0), grid.dim(1), grid.dim(2));
  const Vec3 lo = grid_lo.cwiseMin(bounds.min());
  const Vec3 hi = grid_hi.cwiseMax(bounds.max());

  double g = 0.0;
  for (const Band& b : bands) {
    const Vec3 dir(az_cos * b.sin_phi, az_sin * b.sin_phi, b.cos_phi);
    for (int k = 0; k < w.n_r; ++k) {
      const Vec3 p = pos + w.shell_r[k] * dir;
      const VoxelState st = map.state_at(p);
      if (st == VoxelState::Occupied) break;
      if (st == VoxelState::Unknown) {
        if (bounds.contains(p)) {
          g += w.shell_vol[k] * b.vol_scale;
        } else {
          bool gone = false;
          for (int a = 0; a < 3 && !gone; ++a)
            gone = (p[a] < lo[a] && dir[a] <= 0.0) || (p[a] > hi[a] && dir[a] >= 0.0);
          if (gone) break;
        }
      }
    }
  }
  return g;
}

}  // namespace

void RayMarchSpec::validate(double map_resolution, double max_range) const {
  if (!(delta_r > 0.0 && delta_theta > 0.0 && delta_phi > 0.0))
    throw std::invalid_argument("ray march: steps must be positive");
  if (delta_r > map_resolution + 1e-12)
    throw std::invalid_argument("ray march: delta_r coarser than the map resolution");
  if (max_range * delta_theta > map_resolution + 1e-9)
    throw std::invalid_argument("ray march: delta_theta too coarse for the map resolution");
  if (max_range * delta_phi > map_resolution + 1e-9)
    throw std::invalid_argument("ray march: delta_phi too coarse for the map resolution");
}

double cell_volume(double r, double phi, const RayMarchSpec& spec) {
  const double dr = spec.delta_r;
  return (2.0 * r * r * dr + dr * dr * dr / 6.0) * spec.delta_theta * std::sin(phi) *
         std::sin(0.5 * spec.delta_phi);
}

double free_space_gain(const OccupancyMap& map, const ViewPose& pose, const CameraModel& model,
                       const RayMarchSpec& spec, const Aabb& bounds) {
  model.validate();
  spec.validate(map.grid().resolution(), model.max_range);
  const WedgeGrid w(model, spec);
  const std::vector<Band> bands = make_bands(w, model, pose.pitch);

  double g = 0.0;
  const int m0 = w.first_window_bin(pose.yaw);
  for (int i = 0; i < w.n_win; ++i) {
    const int m = (m0 + i) % w.n_az;
    const double theta = w.bin_center(m);
    g += march_bin(map, bounds, pose.position, std::cos(theta), std::sin(theta), bands, w);
  }
  return g;
}

YawChoice best_yaw(const OccupancyMap& map, const Vec3& position, const CameraModel& model,
                   const RayMarchSpec& spec, const Aabb& bounds, double yaw_step) {
  model.validate();
  spec.validate(map.grid().resolution(), model.max_range);
  if (!(yaw_step > 0.0) || 2.0 * kPi / yaw_step < 8.0 - 1e-9)
    throw std::invalid_argument("best_yaw: yaw_step must cut the circle into at least 8 sectors");

  const WedgeGrid w(model, spec);
  const std::vector<Band> bands = make_bands(w, model, 0.0);

  std::vector<double> bin_gain(w.n_az);
  for (int m = 0; m < w.n_az; ++m) {
    const double theta = w.bin_center(m);
    bin_gain[m] = march_bin(map, bounds, position, std::cos(theta), std::sin(theta), bands, w);
  }
  // Summed bin-by-bin in window order, not via prefix differences, so the
  // result is bit-identical to a direct free_space_gain at the chosen yaw.
  const auto window_sum = [&](int m0) {
    double g = 0.0;
    for (int i = 0; i < w.n_win; ++i) g += bin_gain[(m0 + i) % w.n_az];
    return g;
  };

  YawChoice best{-kPi, -1.0};
  for (double yaw = -kPi; yaw < kPi - 1e-12; yaw += yaw_step) {
    const double g = window_sum(w.first_window_bin(yaw));
    if (g > best.gain) best = {normalize_yaw(yaw), g};
  }
  return best;
}

double visited_penalty(const ViewPose& pose, const VisitedSet& visited, double pos_tol,
                       double yaw_tol) {
  return visited.contains(pose, pos_tol, yaw_tol) ? -1.0 : 0.0;
}

GainBreakdown combine_gain(double g_free, double g_meas, double g_visited,
                           const GainWeights& weights, MissionMode mode) {
  GainBreakdown b;
  b.free_space = g_free;
  b.measurement = (mode == MissionMode::ExploreInspect) ? g_meas : 0.0;
  b.visited = g_visited;
  b.total = weights.free_space * b.free_space + weights.visited * b.visited;
  if (mode == MissionMode::ExploreInspect) b.total += weights.measurement * b.measurement;
  return b;
}

GainBreakdown weighted_gain(const OccupancyMap& map, const IntensityMap& intensity,
                            const VisitedSet& visited, const ViewPose& pose,
                            const GainWeights& weights, MissionMode mode,
                            const CameraModel& model, const RayMarchSpec& spec, const Aabb& bounds,
                            double pos_tol, double yaw_tol) {
  const double g_f = free_space_gain(map, pose, model, spec, bounds);
  const double g_m =
      (mode == MissionMode::ExploreInspect) ? intensity.value_at(pose.position) : 0.0;
  const double g_v = visited_penalty(pose, visited, pos_tol, yaw_tol);
  return combine_gain(g_f, g_m, g_v, weights, mode);
}

double discounted_score(double gain, double branch_step, UtilityKind kind, double lambda) {
  switch (kind) {
    case UtilityKind::Weighted: return gain;
    case UtilityKind::Exponential: return gain * std::exp(-lambda * branch_step);
    case UtilityKind::Linear: return gain - lambda * branch_step;
  }
  return gain;
}

}  // namespace nbv
