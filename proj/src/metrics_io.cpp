#include "nbv/metrics_io.hpp"

#include "nbv/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace nbv {
namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

struct Accumulator {
  std::vector<double> values;
  void add(double v) { values.push_back(v); }
  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
  }
  double stddev() const {  // population form: single-run cells report 0
    if (values.empty()) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size()));
  }
};

}  // namespace

std::string RunStats::cell_key() const {
  return mode + "," + gain_threshold + "," + sampling + "," + cache + "," + utility + "," + arm;
}

RunStats stats_from(const ScenarioConfig& config, const std::string& run_id,
                    const std::vector<IterationRecord>& records) {
  RunStats s;
  s.run_id = run_id;
  s.seed = config.seed;
  s.mode = to_string(config.planner.mode);
  s.gain_threshold = to_string(config.planner.threshold);
  s.sampling = to_string(config.planner.sampling);
  s.cache = to_string(config.planner.cache);
  s.utility = to_string(config.planner.utility);
  s.arm = to_string(config.arm);
  s.iterations = static_cast<int>(records.size());
  if (records.empty()) return s;

  const IterationRecord& last = records.back();
  s.roi_pct = last.roi_explored_pct();
  s.env_pct = last.env_explored_pct();
  s.distance_m = last.base_distance_m;
  s.sim_time_s = last.sim_time_s;
  double total = 0.0;
  for (const IterationRecord& r : records) {
    total += r.planning_time_s;
    s.max_planning_s = std::max(s.max_planning_s, r.planning_time_s);
  }
  s.mean_planning_s = total / static_cast<double>(records.size());
  return s;
}

void write_run_csv(const std::string& path, const ScenarioConfig& config,
                   const std::string& run_id, const std::vector<IterationRecord>& records) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  std::fprintf(f,
               "run_id,seed,mode,gain_threshold,sampling,cache,utility,arm,iteration,"
               "planning_time_s,sim_time_s,roi_pct,env_pct,distance_m,tree_size,best_gain,action\n");
  for (const IterationRecord& r : records) {
    std::fprintf(f, "%s,%llu,%s,%s,%s,%s,%s,%s,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%d,%.9g,%s\n",
                 run_id.c_str(), static_cast<unsigned long long>(config.seed),
                 to_string(config.planner.mode), to_string(config.planner.threshold),
                 to_string(config.planner.sampling), to_string(config.planner.cache),
                 to_string(config.planner.utility), to_string(config.arm), r.iteration,
                 r.planning_time_s, r.sim_time_s, r.roi_explored_pct(), r.env_explored_pct(),
                 r.base_distance_m, r.tree_size, r.best_gain, to_string(r.action));
  }
  std::fclose(f);
}

void write_summary_csv(const std::string& path, const std::vector<RunStats>& runs) {
  struct Cell {
    std::string mode, gain_threshold, sampling, cache, utility, arm;
    Accumulator roi, env, dist, plan, sim, iters;
  };
  std::map<std::string, Cell> cells;  // keyed by the flag tuple, so rows sort by it
  for (const RunStats& r : runs) {
    Cell& c = cells[r.cell_key()];
    c.mode = r.mode;
    c.gain_threshold = r.gain_threshold;
    c.sampling = r.sampling;
    c.cache = r.cache;
    c.utility = r.utility;
    c.arm = r.arm;
    c.roi.add(r.roi_pct);
    c.env.add(r.env_pct);
    c.dist.add(r.distance_m);
    c.plan.add(r.mean_planning_s);
    c.sim.add(r.sim_time_s);
    c.iters.add(r.iterations);
  }

  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  std::fprintf(f,
               "mode,gain_threshold,sampling,cache,utility,arm,runs,"
               "roi_pct_mean,roi_pct_std,env_pct_mean,env_pct_std,"
               "distance_m_mean,distance_m_std,planning_time_s_mean,planning_time_s_std,"
               "sim_time_s_mean,sim_time_s_std,iterations_mean,iterations_std\n");
  for (const auto& [key, c] : cells) {
    std::fprintf(f, "%s,%s,%s,%s,%s,%s,%zu", c.mode.c_str(), c.gain_threshold.c_str(),
                 c.sampling.c_str(), c.cache.c_str(), c.utility.c_str(), c.arm.c_str(),
                 c.roi.values.size());
    for (const Accumulator* a : {&c.roi, &c.env, &c.dist, &c.plan, &c.sim, &c.iters})
      std::fprintf(f, ",%s,%s", fmt("%.6f", a->mean()).c_str(), fmt("%.6f", a->stddev()).c_str());
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace nbv
