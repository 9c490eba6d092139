#pragma once

#include "nbv/camera.hpp"
#include "nbv/geometry.hpp"
#include "nbv/intensity_map.hpp"
#include "nbv/modes.hpp"
#include "nbv/occupancy_map.hpp"
#include "nbv/visited.hpp"

#include <vector>

namespace nbv {

/// Weights of the three gain terms. Defaults are the inspect-mode values;
/// exploration interchanges the first two.
struct GainWeights {
  double free_space = 5.0;
  double measurement = 1.0;
  double visited = 500.0;

  static GainWeights for_mode(MissionMode mode) {
    GainWeights w;
    if (mode == MissionMode::Explore) std::swap(w.free_space, w.measurement);
    return w;
  }
};

/// Discretization of the spherical wedge swept by the sensor frustum.
/// Requested steps are rounded so that bins tile the full circle, the
/// vertical field of view, and [0, max_range] exactly; the effective steps
/// are never coarser than requested.
struct RayMarchSpec {
  // Angular steps default to map resolution over max range: one sample per
  // voxel at the far end of the ray, the coarsest grid that misses nothing.
  double delta_r = 0.1;
  double delta_theta = 0.1 / 1.5;
  double delta_phi = 0.1 / 1.5;

  void validate(double map_resolution, double max_range) const;
};

struct GainBreakdown {
  double free_space = 0.0;   // m^3 of unknown, in-bounds volume visible
  double measurement = 0.0;  // intensity at the pose (inspect mode only)
  double visited = 0.0;      // 0 or -1
  double total = 0.0;
};

/// Volume of the spherical grid cell centered at radius r, polar angle phi,
/// with cell extents taken from the spec. Summing over a full partition of a
/// ball reproduces its volume exactly.
double cell_volume(double r, double phi, const RayMarchSpec& spec);

/// Unknown, in-bounds volume (m^3) visible from the pose: rays are marched
/// through the frustum wedge on the discretized spherical grid, accumulating
/// cell volumes at Unknown samples and stopping a ray at its first Occupied
/// sample. Free samples are marched through. The march starts at the camera,
/// not at min_range, so near-field unknown space still counts.
double free_space_gain(const OccupancyMap& map, const ViewPose& pose, const CameraModel& model,
                       const RayMarchSpec& spec, const Aabb& bounds);

struct YawChoice {
  double yaw = 0.0;
  double gain = 0.0;  // free-space gain achieved at that yaw
};

/// Best horizontal aim at `position` (pitch 0): per-azimuth gains are marched
/// once around the full circle, then an h_fov-wide window is slid over the
/// precomputed bins; candidate yaws lie on a grid of step yaw_step. The
/// returned gain is exactly free_space_gain at the returned yaw. Ties go to
/// the smallest candidate yaw.
YawChoice best_yaw(const OccupancyMap& map, const Vec3& position, const CameraModel& model,
                   const RayMarchSpec& spec, const Aabb& bounds, double yaw_step = rad(10.0));

/// -1 when the pose matches the visited set within the tolerances, else 0.
double visited_penalty(const ViewPose& pose, const VisitedSet& visited, double pos_tol = 0.05,
                       double yaw_tol = rad(10.0));

/// Assembles the weighted sum from already-computed terms. Exploration mode
/// drops the measurement term entirely.
GainBreakdown combine_gain(double g_free, double g_meas, double g_visited,
                           const GainWeights& weights, MissionMode mode);

/// Full gain of a candidate view against the current map, interest field and
/// visit history. In Explore mode the intensity map is never read.
GainBreakdown weighted_gain(const OccupancyMap& map, const IntensityMap& intensity,
                            const VisitedSet& visited, const ViewPose& pose,
                            const GainWeights& weights, MissionMode mode,
                            const CameraModel& model, const RayMarchSpec& spec, const Aabb& bounds,
                            double pos_tol = 0.05, double yaw_tol = rad(10.0));

/// Selection score after the motion-cost ablation: Weighted returns the gain
/// unchanged, Exponential scales by exp(-lambda * branch_step), Linear
/// subtracts lambda * branch_step. branch_step is the edge length to the
/// node's parent.
double discounted_score(double gain, double branch_step, UtilityKind kind, double lambda = 0.25);

}  // namespace nbv
