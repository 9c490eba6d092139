#include "nbv/scenario.hpp"

#include <cmath>
#include <exception>

namespace nbv {
namespace {

RobotState probe_state(const ScenarioConfig& config) {
  RobotState state;
  state.base = config.start;
  state.base.heading = normalize_yaw(config.start.heading);
  state.workspace = config.workspace;
  state.motion = config.motion;
  state.ground_z = config.scene.ground_z;
  return state;
}

}  // namespace

ViewPose start_camera_pose(const ScenarioConfig& config) {
  RobotState probe = probe_state(config);
  return stow_pose(probe);
}

ScenarioCheck validate_scenario(const ScenarioConfig& config) {
  ScenarioCheck check;
  const auto err = [&](const std::string& m) { check.errors.push_back(m); };
  const auto warn = [&](const std::string& m) { check.warnings.push_back(m); };
  const auto guard = [&](const auto& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      err(e.what());
    }
  };

  if (!(config.resolution > 0.0)) err("resolution: must be positive");
  guard([&] { config.log_odds.validate(); });
  guard([&] { config.planner.camera.validate(); });
  if (config.resolution > 0.0)
    guard([&] { config.planner.march.validate(config.resolution, config.planner.camera.max_range); });
  guard([&] { config.workspace.validate(); });
  guard([&] { config.motion.validate(); });

  const Vec3 span = config.bounds.max() - config.bounds.min();
  if (!(span.x() > 0.0 && span.y() > 0.0 && span.z() > 0.0)) err("bounds: box is empty");
  const Vec3 roi_span = config.roi.max() - config.roi.min();
  if (!(roi_span.x() > 0.0 && roi_span.y() > 0.0 && roi_span.z() > 0.0)) err("roi: box is empty");
  if (!config.bounds.contains(config.roi)) err("roi: extends outside the exploration bounds");

  if (!(config.planner.step_length > 0.0)) err("planner.step_length: must be positive");
  if (!(config.planner.min_separation > 0.0 &&
        config.planner.min_separation < config.planner.step_length))
    err("planner.min_separation: must lie in (0, step_length)");
  if (!(config.planner.sample_radius > config.workspace.max_reach))
    err("planner.sample_radius: must exceed the arm's max reach");
  if (!(config.planner.clearance_radius > 0.0)) err("planner.clearance_radius: must be positive");
  if (!(config.planner.pos_tol > 0.0 && config.planner.yaw_tol > 0.0))
    err("planner.visited_pos_tol / visited_yaw_deg: must be positive");
  if (config.planner.max_nodes < 1) err("planner.max_nodes: must be at least 1");
  if (config.planner.tries_per_node < 1) err("planner.tries_per_node: must be at least 1");

  if (config.max_iterations < 1) err("max_iterations: must be at least 1");
  if (!(config.max_sim_time > 0.0)) err("max_sim_time: must be positive");
  if (!(config.footprint_radius > 0.0)) err("footprint_radius: must be positive");
  if (!(config.cache_capacity >= 1)) err("cache_capacity: must be at least 1");
  if (!(config.g_min_voxels > 0.0)) err("g_min_voxels: must be positive");
  if (!(config.start_bubble_radius > config.planner.clearance_radius))
    err("start_bubble_radius: must exceed the clearance radius or no first edge can validate");

  for (std::size_t i = 0; i < config.intensity_samples.size(); ++i)
    if (config.intensity_samples[i].value < 0.0)
      err("intensity_samples[" + std::to_string(i) + "]: negative value");
  if (config.planner.mode == MissionMode::ExploreInspect && config.intensity_samples.empty())
    warn("explore_inspect mode with no intensity samples: aiming falls back to coverage sweeps");
  if (!config.seed_was_given) warn("seed missing; defaulting to 0");

  for (std::size_t i = 0; i < config.scene.boxes.size(); ++i) {
    const Aabb& b = config.scene.boxes[i];
    const Vec3 s = b.max() - b.min();
    if (!(s.x() > 0.0 && s.y() > 0.0 && s.z() > 0.0))
      err("scene.boxes[" + std::to_string(i) + "]: box is empty");
  }

  // Start pose placement, checked against the scene geometry directly (the
  // map does not exist yet).
  const ViewPose stow = start_camera_pose(config);
  if (!point_in_aabb(stow.position, config.bounds))
    err("start: camera stow pose falls outside the exploration bounds");
  if (stow.position.z() <= config.scene.ground_z) err("start: camera below ground");
  const Vec3 base_point(config.start.x, config.start.y, config.scene.ground_z);
  for (std::size_t i = 0; i < config.scene.boxes.size(); ++i) {
    const Aabb& b = config.scene.boxes[i];
    if (b.contains(stow.position))
      err("start: camera pose in collision with scene box " + std::to_string(i));
    else if (b.exteriorDistance(stow.position) < config.planner.clearance_radius)
      err("start: camera pose lacks clearance to scene box " + std::to_string(i));
    if (b.exteriorDistance(base_point) < config.footprint_radius &&
        b.min().z() < config.scene.ground_z + config.workspace.z_max)
      err("start: base footprint overlaps scene box " + std::to_string(i));
  }
  if (!capsule_clear(body_capsule(probe_state(config), config.footprint_radius), config.scene))
    err("start: robot body does not fit at the start pose");

  return check;
}

}  // namespace nbv
