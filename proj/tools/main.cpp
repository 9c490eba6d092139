#include "nbv/batch.hpp"
#include "nbv/metrics_io.hpp"
#include "nbv/mission.hpp"
#include "nbv/scenario_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

struct FlagOverrides {
  std::string mode, threshold, sampling, cache, utility, arm;
  std::int64_t seed = -1;
  int max_iterations = -1;
  double max_sim_time = -1.0;

  void apply(nbv::ScenarioConfig& config) const {
    if (!mode.empty()) config.planner.mode = nbv::parse_mission_mode(mode);
    if (!threshold.empty()) config.planner.threshold = nbv::parse_threshold_mode(threshold);
    if (!sampling.empty()) config.planner.sampling = nbv::parse_sampling(sampling);
    if (!cache.empty()) config.planner.cache = nbv::parse_cache_mode(cache);
    if (!utility.empty()) config.planner.utility = nbv::parse_utility(utility);
    if (!arm.empty()) config.arm = nbv::parse_arm_mode(arm);
    if (seed >= 0) {
      config.seed = static_cast<std::uint64_t>(seed);
      config.seed_was_given = true;
    }
    if (max_iterations > 0) config.max_iterations = max_iterations;
    if (max_sim_time > 0.0) config.max_sim_time = max_sim_time;
  }
};

void add_flag_options(CLI::App* cmd, FlagOverrides& f) {
  cmd->add_option("--mode", f.mode, "explore | explore_inspect");
  cmd->add_option("--threshold", f.threshold, "fixed | variable");
  cmd->add_option("--sampling", f.sampling, "hemisphere | uniform");
  cmd->add_option("--cache", f.cache, "filtered | unfiltered");
  cmd->add_option("--utility", f.utility, "weighted | exponential | linear");
  cmd->add_option("--arm", f.arm, "mobile | stationary");
  cmd->add_option("--seed", f.seed, "RNG seed override");
  cmd->add_option("--max-iterations", f.max_iterations, "iteration cap override");
  cmd->add_option("--max-sim-time", f.max_sim_time, "simulated-time cap override (s)");
}

int cmd_run(const std::string& scenario_path, const FlagOverrides& flags,
            const std::string& csv_path, const std::string& voxels_path, bool quiet) {
  std::vector<std::string> warnings;
  nbv::ScenarioConfig config = nbv::load_scenario(scenario_path, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  flags.apply(config);

  const std::string run_id = nbv::make_run_id(config);
  const auto on_record = [&](const nbv::IterationRecord& r) {
    if (quiet) return;
    std::printf("it %3d  %-10s  gain %10.4f  tree %3d  roi %6.2f%%  env %6.2f%%  dist %7.2f m  plan %.3f s\n",
                r.iteration, nbv::to_string(r.action), r.best_gain, r.tree_size,
                r.roi_explored_pct(), r.env_explored_pct(), r.base_distance_m, r.planning_time_s);
  };

  const nbv::MissionResult result = nbv::run_mission(config, on_record);
  const nbv::RunStats stats = nbv::stats_from(config, run_id, result.records);
  std::printf("%s: %d iterations, roi %.2f%%, env %.2f%%, distance %.2f m, sim %.1f s\n",
              run_id.c_str(), stats.iterations, stats.roi_pct, stats.env_pct, stats.distance_m,
              stats.sim_time_s);

  if (!csv_path.empty()) nbv::write_run_csv(csv_path, config, run_id, result.records);
  if (!voxels_path.empty()) {
    std::ofstream os(voxels_path);
    if (!os) {
      std::cerr << voxels_path << ": cannot open for writing\n";
      return 1;
    }
    result.state.map.save_voxels(os);
  }
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  std::vector<std::string> warnings;
  nbv::ScenarioConfig config;
  try {
    config = nbv::load_scenario(scenario_path, &warnings);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const nbv::ScenarioCheck check = nbv::validate_scenario(config);
  for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";
  for (const std::string& w : check.warnings) std::cout << "warning: " << w << "\n";
  for (const std::string& e : check.errors) std::cout << "error: " << e << "\n";
  if (check.ok()) {
    std::cout << scenario_path << ": ok\n";
    return 0;
  }
  return 1;
}

int cmd_export(const std::string& voxels_path, const std::string& cloud_path) {
  std::ifstream is(voxels_path);
  if (!is) {
    std::cerr << voxels_path << ": cannot open\n";
    return 1;
  }
  const nbv::VoxelDump dump = nbv::load_voxels(is);
  std::ofstream os(cloud_path);
  if (!os) {
    std::cerr << cloud_path << ": cannot open for writing\n";
    return 1;
  }
  nbv::save_point_cloud(dump, os);
  std::cout << cloud_path << ": " << dump.voxels.size() << " occupied voxels\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Next-best-view mission driver"};
  app.require_subcommand(1);

  std::string scenario_path, manifest_path, csv_path, voxels_path, cloud_path;
  bool quiet = false;
  FlagOverrides flags;

  CLI::App* run = app.add_subcommand("run", "run one mission");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--csv", csv_path, "write per-iteration metrics here");
  run->add_option("--save-voxels", voxels_path, "write the final map's voxel dump here");
  run->add_flag("--quiet", quiet, "suppress per-iteration output");
  add_flag_options(run, flags);

  CLI::App* matrix = app.add_subcommand("matrix", "run a seeded ablation sweep");
  matrix->add_option("--manifest", manifest_path, "manifest file")->required();

  CLI::App* validate = app.add_subcommand("validate", "lint a scenario file");
  validate->add_option("--scenario", scenario_path, "scenario file")->required();

  CLI::App* exp = app.add_subcommand("export", "convert a voxel dump to a point cloud");
  exp->add_option("--voxels", voxels_path, "voxel dump file")->required();
  exp->add_option("--cloud", cloud_path, "point cloud output (xyz)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_path, flags, csv_path, voxels_path, quiet);
    if (matrix->parsed()) return nbv::run_matrix(nbv::load_manifest(manifest_path));
    if (validate->parsed()) return cmd_validate(scenario_path);
    if (exp->parsed()) return cmd_export(voxels_path, cloud_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
