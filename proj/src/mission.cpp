#include "nbv/mission.hpp"

#include <chrono>
#include <stdexcept>
#include <utility>

namespace nbv {

const char* to_string(MissionAction action) {
  switch (action) {
    case MissionAction::ArmPrefix: return "arm_prefix";
    case MissionAction::Drive: return "drive";
    case MissionAction::Terminate: return "terminate";
  }
  return "?";
}

MissionState::MissionState(const ScenarioConfig& config)
    : map(config.bounds, config.resolution, config.log_odds),
      planner(config.planner),
      rng(config.seed) {
  planner.bounds = config.bounds;
  planner.weights = GainWeights::for_mode(planner.mode);
  planner.pitch_limit = config.workspace.pitch_limit;  // aim only where the arm can point

  intensity =
      build_intensity(map.grid(), config.intensity_samples, config.idw_power, config.influence_radius);

  robot.base = config.start;
  robot.base.heading = normalize_yaw(config.start.heading);
  robot.workspace = config.workspace;
  robot.motion = config.motion;
  robot.ground_z = config.scene.ground_z;
  robot.camera = stow_pose(robot);

  // 100%-unexplored reference volumes, taken before any priming.
  env_unknown_baseline = map.unknown_volume_in(config.bounds);
  roi_unknown_baseline = map.unknown_volume_in(config.roi);

  // A pristine map blocks every tree edge (Unknown is not traversable for
  // the clearance test), so the immediate surroundings start as free space.
  // The bubble must not reach inside scene geometry: the robot can vouch for
  // where its body fits, not for the inside of the crate next to it.
  const Scene& scene = config.scene;
  map.mark_free_ball(robot.camera.position, config.start_bubble_radius, [&scene](const Vec3& p) {
    for (const Aabb& b : scene.boxes)
      if (b.contains(p)) return true;
    return false;
  });
  certify_body_space(robot, map, config.footprint_radius);

  cache = CacheSet(config.cache_capacity,
                   config.g_min_voxels * map.voxel_volume() * planner.weights.free_space);

  pending.push_back(robot.camera);
}

void compute_metrics(const OccupancyMap& map, const Aabb& bounds, const Aabb& roi,
                     double roi_baseline, double env_baseline, double* roi_fraction,
                     double* env_fraction) {
  *roi_fraction = roi_baseline > 0.0 ? map.unknown_volume_in(roi) / roi_baseline : 0.0;
  *env_fraction = env_baseline > 0.0 ? map.unknown_volume_in(bounds) / env_baseline : 0.0;
}

IterationRecord run_iteration(MissionState& state, const ScenarioConfig& config) {
  IterationRecord rec;
  state.iteration += 1;
  rec.iteration = state.iteration;

  const std::vector<ViewPose> todo = std::move(state.pending);
  state.pending.clear();
  execute_views(state.robot, todo, config.scene, state.planner.camera, state.map, state.visited,
                state.planner.clearance_radius, config.arm);

  const auto t0 = std::chrono::steady_clock::now();
  // Dead goals must not linger in the cache: selection skips them, but their
  // gains would keep feeding the variable threshold, and a threshold propped
  // up by unselectable entries can end the run with most of the world unseen.
  std::erase_if(state.cache.entries, [&](const CacheEntry& e) {
    return state.blacklist.contains(e.pose, state.planner.pos_tol, state.planner.yaw_tol);
  });
  refilter_cache(state.cache, state.map, state.intensity, state.visited,
                 state.robot.camera.position, state.planner);
  // An empty cache gives the variable threshold nothing to stand on; left
  // alone it would stay wherever the last surviving entry put it, which can
  // be far above what fresh frontier views can earn and would end the run
  // with most of the world unseen. Fall back to the configured floor.
  if (state.cache.entries.empty()) state.cache.g_min = state.cache.fixed_threshold;
  state.planner.arm_base = arm_anchor(state.robot);
  const RrtTree tree =
      expand_tree(state.robot.camera, state.map, state.intensity, state.visited, state.planner,
                  state.rng);
  merge_into_cache(state.cache, tree, state.planner);
  const BestChoice choice = best_node(tree, state.cache, state.planner, state.blacklist);
  rec.planning_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  rec.tree_size = tree.size();
  rec.best_gain = choice.gain.total;

  if (choice.gain.total < state.cache.g_min) {
    state.finished = true;
    rec.action = MissionAction::Terminate;
  } else {
    const std::vector<ViewPose> branch =
        choice.from_cache ? std::vector<ViewPose>{choice.pose} : extract_branch(tree, choice.id);
    std::vector<ViewPose> prefix =
        reachable_prefix(branch, state.robot, state.map, state.visited,
                         state.planner.clearance_radius, config.arm, state.planner.pos_tol,
                         state.planner.yaw_tol);
    if (!prefix.empty()) {
      state.pending = std::move(prefix);
      rec.action = MissionAction::ArmPrefix;
    } else {
      rec.action = MissionAction::Drive;
      const double bx = state.robot.base.x;
      const double by = state.robot.base.y;
      if (approach(state.robot, choice.pose, state.map, config.scene, config.footprint_radius,
                   config.arm)) {
        state.pending.assign(1, state.robot.camera);
        // A drive that moved nothing, or that landed on an already-captured
        // view, has delivered everything it ever will: the base is as close
        // as the planner can bring it and the goal still was not realized.
        const double moved = std::hypot(state.robot.base.x - bx, state.robot.base.y - by);
        if (moved < 1e-9 || state.visited.contains(state.robot.camera, state.planner.pos_tol,
                                                   state.planner.yaw_tol))
          state.blacklist.add(choice.pose);
      } else {
        state.blacklist.add(choice.pose);
      }
    }
  }

  compute_metrics(state.map, config.bounds, config.roi, state.roi_unknown_baseline,
                  state.env_unknown_baseline, &rec.roi_unknown_fraction,
                  &rec.env_unknown_fraction);
  rec.sim_time_s = state.robot.sim_time;
  rec.base_distance_m = state.robot.base_distance;
  return rec;
}

MissionResult run_mission(const ScenarioConfig& config,
                          const std::function<void(const IterationRecord&)>& on_record) {
  const ScenarioCheck check = validate_scenario(config);
  if (!check.ok()) {
    std::string joined = "scenario invalid:";
    for (const std::string& e : check.errors) joined += "\n  " + e;
    throw std::invalid_argument(joined);
  }

  MissionState state(config);
  std::vector<IterationRecord> records;
  while (!state.finished && state.iteration < config.max_iterations &&
         state.robot.sim_time < config.max_sim_time) {
    const IterationRecord rec = run_iteration(state, config);
    records.push_back(rec);
    if (on_record) on_record(rec);
  }

  MissionResult result(std::move(state));
  result.records = std::move(records);
  return result;
}

}  // namespace nbv
