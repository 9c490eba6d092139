#pragma once

#include "nbv/camera.hpp"
#include "nbv/geometry.hpp"
#include "nbv/grid.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace nbv {

enum class VoxelState { Unknown, Free, Occupied };

const char* to_string(VoxelState s);

struct LogOddsParams {
  double hit = 0.85;
  double miss = -0.4;
  double clamp_min = -2.0;
  double clamp_max = 3.5;
  double occupied_threshold = 0.0;  // log-odds at or above this count as Occupied

  void validate() const;
};

struct RegionCounts {
  std::int64_t unknown = 0;
  std::int64_t free = 0;
  std::int64_t occupied = 0;
  std::int64_t total() const { return unknown + free + occupied; }
};

/// Probabilistic voxel map over the exploration bounds (padded by one voxel on
/// every side so surfaces lying exactly on the bounds still get a voxel).
/// Voxels start unobserved; only sensor updates ever mark them, and once
/// observed a voxel never returns to Unknown.
class OccupancyMap {
 public:
  OccupancyMap(const Aabb& bounds, double resolution, const LogOddsParams& params = {});

  const GridIndexer& grid() const { return grid_; }
  const Aabb& bounds() const { return bounds_; }
  const LogOddsParams& params() const { return params_; }

  VoxelState state_at(const VoxelKey& key) const {
    if (!grid_.valid(key)) return VoxelState::Unknown;
    const std::int64_t idx = grid_.flat(key);
    if (!observed_[idx]) return VoxelState::Unknown;
    return log_odds_[idx] >= params_.occupied_threshold ? VoxelState::Occupied : VoxelState::Free;
  }

  VoxelState state_at(const Vec3& p) const { return state_at(grid_.key_of(p)); }

  bool observed(const VoxelKey& key) const {
    return grid_.valid(key) && observed_[grid_.flat(key)];
  }

  double log_odds_at(const VoxelKey& key) const {
    return grid_.valid(key) ? log_odds_[grid_.flat(key)] : 0.0;
  }

  /// Applies one sensor update (delta = hit or miss increment) to a voxel.
  void update(const VoxelKey& key, double delta);

  /// Saturates the voxel containing `p` to the occupied clamp. For evidence
  /// that leaves no doubt, like a bumper pressed against an obstacle.
  void mark_occupied(const Vec3& p);

  /// Marks every voxel whose center lies within `radius` of `center` with a
  /// single miss update. Used to certify the space the robot physically
  /// occupies at mission start.
  void mark_free_ball(const Vec3& center, double radius);
  // Same, but points where `blocked` returns true keep their current state;
  // lets priming stop at the faces of known-solid scene geometry.
  void mark_free_ball(const Vec3& center, double radius,
                      const std::function<bool(const Vec3&)>& blocked);

  /// True when every voxel whose center lies within `radius` of segment
  /// [a, b] is known Free. Unknown or Occupied anywhere in the capsule,
  /// including voxels outside the mapped extent, fails the check.
  // Conservative clearance: every voxel center within `radius` of the segment
  // must be Free. Unknown and out-of-grid space blocks.
  bool is_segment_free(const Vec3& a, const Vec3& b, double radius) const;
  // Optimistic clearance: blocked only by Occupied voxels; Unknown passes.
  bool is_segment_clear(const Vec3& a, const Vec3& b, double radius) const;

  RegionCounts count_states_in(const Aabb& region) const;

  /// Volume (m^3) of unknown voxels whose centers lie inside `region`.
  double unknown_volume_in(const Aabb& region) const {
    return static_cast<double>(count_states_in(region).unknown) * voxel_volume();
  }

  double voxel_volume() const {
    const double r = grid_.resolution();
    return r * r * r;
  }

  std::int64_t observed_count() const { return observed_total_; }

  void save_voxels(std::ostream& os) const;
  void save_point_cloud(std::ostream& os) const;

 private:
  friend void integrate_depth(OccupancyMap&, const ViewPose&, const CameraModel&, const DepthImage&);

  bool segment_ok(const Vec3& a, const Vec3& b, double radius, bool unknown_blocks) const;

  GridIndexer grid_;
  Aabb bounds_;
  LogOddsParams params_;
  std::vector<float> log_odds_;
  std::vector<std::uint8_t> observed_;
  std::int64_t observed_total_ = 0;
};

/// Fuses one depth capture into the map. Every pixel with a usable return
/// traces free space from min_range along the ray; a finite return also marks
/// the struck voxel occupied, a beyond-range return frees space out to
/// max_range. Pixels with a no-return sentinel are skipped. Rays are processed
/// in row-major pixel order, so integration is deterministic.
///
/// Throws std::invalid_argument when the camera sits outside the mapped
/// extent.
void integrate_depth(OccupancyMap& map, const ViewPose& pose, const CameraModel& model,
                     const DepthImage& depth);

/// Visits, in order and exactly once each, every in-grid voxel the segment
/// [a, b] passes through. The callback returns false to stop early.
void for_each_voxel_on_segment(const GridIndexer& grid, const Vec3& a, const Vec3& b,
                               const std::function<bool(const VoxelKey&)>& visit);

/// Reads a map back from the save_voxels text format.
struct VoxelRecord {
  VoxelKey key;
  VoxelState state = VoxelState::Unknown;
  double log_odds = 0.0;
};
struct VoxelDump {
  Vec3 origin{0, 0, 0};
  double resolution = 0.1;
  int dims[3] = {0, 0, 0};
  std::vector<VoxelRecord> voxels;
};
VoxelDump load_voxels(std::istream& is);
void save_point_cloud(const VoxelDump& dump, std::ostream& os);

}  // namespace nbv
