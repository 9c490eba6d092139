#pragma once

#include "nbv/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace nbv {

struct VoxelKey {
  int i = 0, j = 0, k = 0;
  bool operator==(const VoxelKey&) const = default;
};

/// Uniform voxel lattice over an axis-aligned extent. Voxels are half-open
/// boxes [origin + key*res, origin + (key+1)*res), so every point inside the
/// extent maps to exactly one voxel.
class GridIndexer {
 public:
  GridIndexer() = default;

  GridIndexer(const Aabb& extent, double resolution) {
    if (resolution <= 0.0) throw std::invalid_argument("grid: resolution must be positive");
    if (extent.isEmpty()) throw std::invalid_argument("grid: empty extent");
    res_ = resolution;
    inv_res_ = 1.0 / resolution;
    origin_ = extent.min();
    for (int a = 0; a < 3; ++a) {
      dims_[a] = std::max(1, static_cast<int>(std::ceil((extent.max()[a] - origin_[a]) / res_ - 1e-9)));
    }
  }

  double resolution() const { return res_; }
  const Vec3& origin() const { return origin_; }
  int dim(int axis) const { return dims_[axis]; }
  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(dims_[0]) * dims_[1] * dims_[2];
  }

  /// Grid-aligned bounding box actually covered by the voxels.
  Aabb coverage() const {
    return {origin_, origin_ + res_ * Vec3(dims_[0], dims_[1], dims_[2])};
  }

  VoxelKey key_of(const Vec3& p) const {
    return {static_cast<int>(std::floor((p.x() - origin_.x()) * inv_res_)),
            static_cast<int>(std::floor((p.y() - origin_.y()) * inv_res_)),
            static_cast<int>(std::floor((p.z() - origin_.z()) * inv_res_))};
  }

  Vec3 center_of(const VoxelKey& k) const {
    return origin_ + res_ * Vec3(k.i + 0.5, k.j + 0.5, k.k + 0.5);
  }

  bool valid(const VoxelKey& k) const {
    return k.i >= 0 && k.i < dims_[0] && k.j >= 0 && k.j < dims_[1] && k.k >= 0 && k.k < dims_[2];
  }

  bool contains(const Vec3& p) const { return valid(key_of(p)); }

  std::int64_t flat(const VoxelKey& k) const {
    return (static_cast<std::int64_t>(k.k) * dims_[1] + k.j) * dims_[0] + k.i;
  }

  VoxelKey unflat(std::int64_t idx) const {
    const int i = static_cast<int>(idx % dims_[0]);
    const std::int64_t rest = idx / dims_[0];
    return {i, static_cast<int>(rest % dims_[1]), static_cast<int>(rest / dims_[1])};
  }

 private:
  Vec3 origin_{0.0, 0.0, 0.0};
  double res_ = 0.1;
  double inv_res_ = 10.0;
  int dims_[3] = {1, 1, 1};
};

}  // namespace nbv
