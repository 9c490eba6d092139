#pragma once

#include "nbv/geometry.hpp"
#include "nbv/grid.hpp"

#include <cstdint>
#include <vector>

namespace nbv {

struct IntensitySample {
  Vec3 position{0, 0, 0};
  double value = 0.0;
};

/// Scalar inspection-interest field on the same voxel lattice as the
/// occupancy map. Built once per scenario from point samples; read-only
/// afterwards. Reads are counted so missions that must ignore the field can
/// prove they did.
class IntensityMap {
 public:
  IntensityMap() = default;
  IntensityMap(const GridIndexer& grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {}

  const GridIndexer& grid() const { return grid_; }

  /// Value of the voxel containing p; 0 outside the grid.
  double value_at(const Vec3& p) const;

  /// Central-difference gradient (step = one voxel) of the trilinearly
  /// interpolated field.
  Vec3 gradient_at(const Vec3& p) const;

  std::uint64_t reads() const { return reads_; }

 private:
  double interpolate(const Vec3& p) const;
  double raw(int i, int j, int k) const;

  GridIndexer grid_;
  std::vector<double> values_;
  mutable std::uint64_t reads_ = 0;
};

/// Inverse-distance-weighted rasterization of the samples onto the lattice:
/// each voxel center averages the samples within influence_radius with
/// weights 1/d^power; a sample lying exactly on a center wins outright.
/// Voxels beyond every sample's influence stay 0.
IntensityMap build_intensity(const GridIndexer& grid, const std::vector<IntensitySample>& samples,
                             double power = 2.0, double influence_radius = 2.0);

}  // namespace nbv
