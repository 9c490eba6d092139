#include "nbv/batch.hpp"

#include "nbv/scenario_io.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace nbv {

using json = nlohmann::json;

namespace {

std::vector<std::string> string_list(const json& j, const std::string& path) {
  std::vector<std::string> out;
  if (j.is_string()) {
    out.push_back(j.get<std::string>());
    return out;
  }
  if (!j.is_array()) throw std::runtime_error(path + ": expected a string or string array");
  for (const auto& v : j) {
    if (!v.is_string()) throw std::runtime_error(path + ": expected strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%d %H:%M:%S", std::localtime(&now));
  return buf;
}

}  // namespace

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error(path + ": top level must be an object");

  RunManifest m;
  if (!j.contains("scenario") || !j["scenario"].is_string())
    throw std::runtime_error("scenario: required string field");
  m.scenario_path = j["scenario"].get<std::string>();

  if (!j.contains("seeds") || !j["seeds"].is_array() || j["seeds"].empty())
    throw std::runtime_error("seeds: required non-empty array");
  for (const auto& s : j["seeds"]) {
    if (!s.is_number_integer()) throw std::runtime_error("seeds: expected integers");
    m.seeds.push_back(s.get<std::uint64_t>());
  }

  if (j.contains("output_dir")) m.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("export_voxels")) m.export_voxels = j["export_voxels"].get<bool>();
  if (j.contains("export_cloud")) m.export_cloud = j["export_cloud"].get<bool>();

  if (j.contains("matrix")) {
    const json& mx = j["matrix"];
    if (!mx.is_object()) throw std::runtime_error("matrix: expected an object");
    if (mx.contains("mode")) m.modes = string_list(mx["mode"], "matrix.mode");
    if (mx.contains("threshold")) m.thresholds = string_list(mx["threshold"], "matrix.threshold");
    if (mx.contains("sampling")) m.samplings = string_list(mx["sampling"], "matrix.sampling");
    if (mx.contains("cache")) m.caches = string_list(mx["cache"], "matrix.cache");
    if (mx.contains("utility")) m.utilities = string_list(mx["utility"], "matrix.utility");
    if (mx.contains("arm")) m.arms = string_list(mx["arm"], "matrix.arm");
  }
  return m;
}

std::string make_run_id(const ScenarioConfig& config) {
  std::string id = config.name;
  for (const char* flag :
       {to_string(config.planner.mode), to_string(config.planner.threshold),
        to_string(config.planner.sampling), to_string(config.planner.cache),
        to_string(config.planner.utility), to_string(config.arm)})
    id += std::string("-") + flag;
  id += "-s" + std::to_string(config.seed);
  return id;
}

int run_matrix(const RunManifest& manifest) {
  namespace fs = std::filesystem;
  fs::create_directories(manifest.output_dir);

  std::ofstream log(fs::path(manifest.output_dir) / "matrix.log", std::ios::app);
  const auto note = [&](const std::string& line) { log << timestamp() << "  " << line << "\n" << std::flush; };

  std::vector<std::string> warnings;
  const ScenarioConfig base = load_scenario(manifest.scenario_path, &warnings);
  for (const std::string& w : warnings) note("warning: " + w);

  // Every configured axis expands; missing axes keep the scenario's value.
  const auto axis = [](const std::vector<std::string>& values, const std::string& fallback) {
    return values.empty() ? std::vector<std::string>{fallback} : values;
  };
  const auto modes = axis(manifest.modes, to_string(base.planner.mode));
  const auto thresholds = axis(manifest.thresholds, to_string(base.planner.threshold));
  const auto samplings = axis(manifest.samplings, to_string(base.planner.sampling));
  const auto caches = axis(manifest.caches, to_string(base.planner.cache));
  const auto utilities = axis(manifest.utilities, to_string(base.planner.utility));
  const auto arms = axis(manifest.arms, to_string(base.arm));

  std::vector<RunStats> stats;
  int failures = 0;

  for (const std::string& mode : modes)
    for (const std::string& threshold : thresholds)
      for (const std::string& sampling : samplings)
        for (const std::string& cache : caches)
          for (const std::string& utility : utilities)
            for (const std::string& arm : arms)
              for (const std::uint64_t seed : manifest.seeds) {
                ScenarioConfig config = base;
                config.planner.mode = parse_mission_mode(mode);
                config.planner.threshold = parse_threshold_mode(threshold);
                config.planner.sampling = parse_sampling(sampling);
                config.planner.cache = parse_cache_mode(cache);
                config.planner.utility = parse_utility(utility);
                config.arm = parse_arm_mode(arm);
                config.seed = seed;
                config.seed_was_given = true;

                const std::string run_id = make_run_id(config);
                note("start " + run_id);
                try {
                  const MissionResult result = run_mission(config);
                  const fs::path csv = fs::path(manifest.output_dir) / (run_id + ".csv");
                  write_run_csv(csv.string(), config, run_id, result.records);
                  stats.push_back(stats_from(config, run_id, result.records));
                  if (manifest.export_voxels) {
                    std::ofstream os(fs::path(manifest.output_dir) / (run_id + "_voxels.txt"));
                    result.state.map.save_voxels(os);
                  }
                  if (manifest.export_cloud) {
                    std::ofstream os(fs::path(manifest.output_dir) / (run_id + "_cloud.xyz"));
                    result.state.map.save_point_cloud(os);
                  }
                  note("done " + run_id + " (" + std::to_string(result.records.size()) +
                       " iterations)");
                } catch (const std::exception& e) {
                  ++failures;
                  note("FAILED " + run_id + ": " + e.what());
                }
              }

  write_summary_csv((fs::path(manifest.output_dir) / "summary.csv").string(), stats);
  note("summary written (" + std::to_string(stats.size()) + " runs, " +
       std::to_string(failures) + " failures)");
  return failures == 0 ? 0 : 1;
}

}  // namespace nbv
