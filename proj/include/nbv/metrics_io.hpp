#pragma once

#include "nbv/mission.hpp"
#include "nbv/scenario.hpp"

#include <string>
#include <vector>

namespace nbv {

/// Per-run scalars used by the aggregate summary: final coverage, final
/// odometry, and the mean per-iteration planning time.
struct RunStats {
  std::string run_id;
  std::uint64_t seed = 0;
  std::string mode, gain_threshold, sampling, cache, utility, arm;
  int iterations = 0;
  double roi_pct = 0.0;
  double env_pct = 0.0;
  double distance_m = 0.0;
  double mean_planning_s = 0.0;
  double max_planning_s = 0.0;
  double sim_time_s = 0.0;

  /// Key identifying the flag combination (everything except seed/run id).
  std::string cell_key() const;
};

RunStats stats_from(const ScenarioConfig& config, const std::string& run_id,
                    const std::vector<IterationRecord>& records);

/// One CSV row per iteration, fixed column set:
/// run_id, seed, mode, gain_threshold, sampling, cache, utility, arm,
/// iteration, planning_time_s, sim_time_s, roi_pct, env_pct, distance_m,
/// tree_size, best_gain, action.
void write_run_csv(const std::string& path, const ScenarioConfig& config,
                   const std::string& run_id, const std::vector<IterationRecord>& records);

/// One row per flag combination: run count plus mean and population standard
/// deviation of the per-run scalars. Rows are sorted by the flag tuple.
void write_summary_csv(const std::string& path, const std::vector<RunStats>& runs);

}  // namespace nbv
