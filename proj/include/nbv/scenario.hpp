#pragma once

#include "nbv/camera.hpp"
#include "nbv/geometry.hpp"
#include "nbv/intensity_map.hpp"
#include "nbv/modes.hpp"
#include "nbv/occupancy_map.hpp"
#include "nbv/robot.hpp"
#include "nbv/rrt.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nbv {

/// Everything one mission run needs. Loaded from a scenario file, then
/// optionally overridden by CLI flags; the planner sub-config carries the
/// search tunables while camera, bounds and weights are stamped in at
/// mission start.
struct ScenarioConfig {
  std::string name = "unnamed";

  Scene scene;
  Aabb bounds;
  Aabb roi;
  double resolution = 0.1;

  LogOddsParams log_odds;
  PlannerConfig planner;
  ArmWorkspace workspace;
  MotionCostModel motion;
  ArmMode arm = ArmMode::Mobile;

  BasePose start;
  std::vector<IntensitySample> intensity_samples;
  double idw_power = 2.0;
  double influence_radius = 2.0;

  std::uint64_t seed = 0;
  bool seed_was_given = true;

  int max_iterations = 300;
  double max_sim_time = 3600.0;  // simulated seconds
  double footprint_radius = 0.3;
  double start_bubble_radius = 1.0;
  double g_min_voxels = 5.0;  // initial threshold, in voxel volumes of free-space gain
  std::size_t cache_capacity = 30;
};

struct ScenarioCheck {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

/// Static lint of a scenario: parameter sanity, ROI containment, start-pose
/// collision and clearance, camera/march consistency. Errors block a run;
/// warnings (like a defaulted seed) do not.
ScenarioCheck validate_scenario(const ScenarioConfig& config);

/// Camera stow position for the configured start base pose.
ViewPose start_camera_pose(const ScenarioConfig& config);

}  // namespace nbv
