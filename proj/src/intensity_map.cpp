#include "nbv/intensity_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nbv {

double IntensityMap::raw(int i, int j, int k) const {
  if (values_.empty()) return 0.0;
  const VoxelKey key{i, j, k};
  if (!grid_.valid(key)) return 0.0;
  return values_[static_cast<size_t>(grid_.flat(key))];
}

double IntensityMap::value_at(const Vec3& p) const {
  ++reads_;
  const VoxelKey key = grid_.key_of(p);
  return raw(key.i, key.j, key.k);
}

double IntensityMap::interpolate(const Vec3& p) const {
  // Continuous coordinates in units of voxels, measured between centers.
  const double gx = (p.x() - grid_.origin().x()) / grid_.resolution() - 0.5;
  const double gy = (p.y() - grid_.origin().y()) / grid_.resolution() - 0.5;
  const double gz = (p.z() - grid_.origin().z()) / grid_.resolution() - 0.5;
  const int i0 = static_cast<int>(std::floor(gx));
  const int j0 = static_cast<int>(std::floor(gy));
  const int k0 = static_cast<int>(std::floor(gz));
  const double fx = gx - i0, fy = gy - j0, fz = gz - k0;

  double acc = 0.0;
  for (int dk = 0; dk <= 1; ++dk)
    for (int dj = 0; dj <= 1; ++dj)
      for (int di = 0; di <= 1; ++di) {
        const double w = (di ? fx : 1.0 - fx) * (dj ? fy : 1.0 - fy) * (dk ? fz : 1.0 - fz);
        if (w > 0.0) acc += w * raw(i0 + di, j0 + dj, k0 + dk);
      }
  return acc;
}

Vec3 IntensityMap::gradient_at(const Vec3& p) const {
  ++reads_;
  const double h = grid_.resolution();
  Vec3 g;
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 lo = p, hi = p;
    lo[axis] -= h;
    hi[axis] += h;
    g[axis] = (interpolate(hi) - interpolate(lo)) / (2.0 * h);
  }
  return g;
}

IntensityMap build_intensity(const GridIndexer& grid, const std::vector<IntensitySample>& samples,
                             double power, double influence_radius) {
  if (influence_radius <= 0.0) throw std::invalid_argument("intensity: influence_radius must be positive");
  for (const IntensitySample& s : samples)
    if (s.value < 0.0) throw std::invalid_argument("intensity: sample values must be non-negative");

  std::vector<double> weight_sum(static_cast<size_t>(grid.cell_count()), 0.0);
  std::vector<double> weighted(static_cast<size_t>(grid.cell_count()), 0.0);
  std::vector<double> exact(static_cast<size_t>(grid.cell_count()), -1.0);
  std::vector<int> exact_n(static_cast<size_t>(grid.cell_count()), 0);

  const double r2 = influence_radius * influence_radius;
  for (const IntensitySample& s : samples) {
    const Vec3 lo = s.position - Vec3::Constant(influence_radius);
    const Vec3 hi = s.position + Vec3::Constant(influence_radius);
    const VoxelKey klo = grid.key_of(lo);
    const VoxelKey khi = grid.key_of(hi);
    for (int k = std::max(klo.k, 0); k <= std::min(khi.k, grid.dim(2) - 1); ++k)
      for (int j = std::max(klo.j, 0); j <= std::min(khi.j, grid.dim(1) - 1); ++j)
        for (int i = std::max(klo.i, 0); i <= std::min(khi.i, grid.dim(0) - 1); ++i) {
          const VoxelKey key{i, j, k};
          const size_t idx = static_cast<size_t>(grid.flat(key));
          const double d2 = (grid.center_of(key) - s.position).squaredNorm();
          if (d2 > r2) continue;
          if (d2 < 1e-18) {
            // Sample on the center: overrides the weighted blend there.
            exact[idx] = (exact[idx] < 0.0 ? 0.0 : exact[idx] * exact_n[idx]);
            exact[idx] = (exact[idx] + s.value) / (exact_n[idx] + 1);
            ++exact_n[idx];
            continue;
          }
          const double w = 1.0 / std::pow(d2, 0.5 * power);
          weight_sum[idx] += w;
          weighted[idx] += w * s.value;
        }
  }

  std::vector<double> values(static_cast<size_t>(grid.cell_count()), 0.0);
  for (size_t idx = 0; idx < values.size(); ++idx) {
    if (exact_n[idx] > 0) values[idx] = exact[idx];
    else if (weight_sum[idx] > 0.0) values[idx] = weighted[idx] / weight_sum[idx];
  }
  return IntensityMap(grid, std::move(values));
}

}  // namespace nbv
