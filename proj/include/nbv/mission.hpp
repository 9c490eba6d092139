#pragma once

#include "nbv/scenario.hpp"

#include <functional>
#include <vector>

namespace nbv {

enum class MissionAction { ArmPrefix, Drive, Terminate };
const char* to_string(MissionAction action);

struct IterationRecord {
  int iteration = 0;
  double planning_time_s = 0.0;  // wall clock over refilter + expand + select
  double sim_time_s = 0.0;       // cumulative simulated time
  double roi_unknown_fraction = 1.0;  // unknown volume left, relative to the pristine map
  double env_unknown_fraction = 1.0;
  double base_distance_m = 0.0;  // cumulative
  int tree_size = 0;
  double best_gain = 0.0;
  MissionAction action = MissionAction::Terminate;

  double roi_explored_pct() const { return 100.0 * (1.0 - roi_unknown_fraction); }
  double env_explored_pct() const { return 100.0 * (1.0 - env_unknown_fraction); }
};

struct MissionState {
  int iteration = 0;
  OccupancyMap map;
  IntensityMap intensity;
  RobotState robot;
  VisitedSet visited;
  CacheSet cache;
  std::vector<ViewPose> pending;
  bool finished = false;

  // Goals that failed navigation, or whose drive ended where the camera had
  // already captured, are dead as selection targets for the rest of the run.
  // A shorter memory lets two such goals alternate forever, each winning
  // while the other sits out its ban.
  VisitedSet blacklist;

  // Unknown volumes of the pristine map, the 100%-unexplored reference.
  double roi_unknown_baseline = 0.0;
  double env_unknown_baseline = 0.0;

  PlannerConfig planner;  // resolved from the scenario; arm_base tracks the robot
  std::mt19937_64 rng;    // one stream for the whole mission

  explicit MissionState(const ScenarioConfig& config);
};

/// One pass of the outer loop: execute pending captures, refilter the cache,
/// grow a fresh tree at the current camera pose, pick the best candidate,
/// then either stop (best below g_min), hand the arm a reachable branch
/// prefix, or drive the base toward the goal. Planning time covers
/// refilter + expansion + selection only.
IterationRecord run_iteration(MissionState& state, const ScenarioConfig& config);

/// (roi_unknown_fraction, env_unknown_fraction) against the given baselines.
void compute_metrics(const OccupancyMap& map, const Aabb& bounds, const Aabb& roi,
                     double roi_baseline, double env_baseline, double* roi_fraction,
                     double* env_fraction);

struct MissionResult {
  std::vector<IterationRecord> records;
  MissionState state;  // final map, robot odometry, visited set

  MissionResult(MissionState&& s) : state(std::move(s)) {}
};

/// Runs iterations until termination or the iteration/simulated-time caps.
/// Throws std::invalid_argument when the scenario fails validation. Records
/// stream through on_record as they are produced.
MissionResult run_mission(const ScenarioConfig& config,
                          const std::function<void(const IterationRecord&)>& on_record = {});

}  // namespace nbv
