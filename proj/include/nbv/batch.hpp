#pragma once

#include "nbv/metrics_io.hpp"
#include "nbv/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nbv {

/// Sweep description: which scenario, which seeds, and the flag values each
/// ablation axis should take. An empty axis keeps the scenario's own value;
/// the sweep runs every seed against every combination.
struct RunManifest {
  std::string scenario_path;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "out";
  bool export_voxels = false;
  bool export_cloud = false;

  std::vector<std::string> modes;
  std::vector<std::string> thresholds;
  std::vector<std::string> samplings;
  std::vector<std::string> caches;
  std::vector<std::string> utilities;
  std::vector<std::string> arms;
};

RunManifest load_manifest(const std::string& path);

/// Stable identifier: scenario name, the six flags, then the seed.
std::string make_run_id(const ScenarioConfig& config);

/// Runs the whole sweep: one metrics CSV per run, a summary CSV over all
/// finished runs, optional map exports, and a timestamped progress log
/// (matrix.log) in the output directory, which keeps the CSVs byte-stable
/// across reruns. Failed runs are logged and skipped. Returns 0 when every
/// run finished, 1 otherwise.
int run_matrix(const RunManifest& manifest);

}  // namespace nbv
