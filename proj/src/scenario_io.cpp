#include "nbv/scenario_io.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <stdexcept>

namespace nbv {

using json = nlohmann::json;

const char* to_string(MissionMode m) {
  return m == MissionMode::Explore ? "explore" : "explore_inspect";
}
const char* to_string(GainThresholdMode m) {
  return m == GainThresholdMode::Fixed ? "fixed" : "variable";
}
const char* to_string(SamplingStrategy s) {
  return s == SamplingStrategy::HemisphereSurface ? "hemisphere" : "uniform";
}
const char* to_string(CacheMode m) { return m == CacheMode::Filtered ? "filtered" : "unfiltered"; }
const char* to_string(UtilityKind k) {
  switch (k) {
    case UtilityKind::Weighted: return "weighted";
    case UtilityKind::Exponential: return "exponential";
    case UtilityKind::Linear: return "linear";
  }
  return "?";
}
const char* to_string(ArmMode m) { return m == ArmMode::Mobile ? "mobile" : "stationary"; }

namespace {

[[noreturn]] void bad_value(const std::string& what, const std::string& got) {
  throw std::runtime_error(what + ": unknown value '" + got + "'");
}

}  // namespace

MissionMode parse_mission_mode(const std::string& s) {
  if (s == "explore") return MissionMode::Explore;
  if (s == "explore_inspect") return MissionMode::ExploreInspect;
  bad_value("mode", s);
}
GainThresholdMode parse_threshold_mode(const std::string& s) {
  if (s == "fixed") return GainThresholdMode::Fixed;
  if (s == "variable") return GainThresholdMode::Variable;
  bad_value("threshold", s);
}
SamplingStrategy parse_sampling(const std::string& s) {
  if (s == "hemisphere") return SamplingStrategy::HemisphereSurface;
  if (s == "uniform") return SamplingStrategy::UniformBox;
  bad_value("sampling", s);
}
CacheMode parse_cache_mode(const std::string& s) {
  if (s == "filtered") return CacheMode::Filtered;
  if (s == "unfiltered") return CacheMode::Unfiltered;
  bad_value("cache", s);
}
UtilityKind parse_utility(const std::string& s) {
  if (s == "weighted") return UtilityKind::Weighted;
  if (s == "exponential") return UtilityKind::Exponential;
  if (s == "linear") return UtilityKind::Linear;
  bad_value("utility", s);
}
ArmMode parse_arm_mode(const std::string& s) {
  if (s == "mobile") return ArmMode::Mobile;
  if (s == "stationary") return ArmMode::Stationary;
  bad_value("arm", s);
}

namespace {

// Field readers that name the offending path on any type mismatch.
double num(const json& j, const std::string& path) {
  if (!j.is_number()) throw std::runtime_error(path + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw std::runtime_error(path + ": expected an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw std::runtime_error(path + ": expected a string");
  return j.get<std::string>();
}

Vec3 triple(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3)
    throw std::runtime_error(path + ": expected an array of 3 numbers");
  return Vec3(num(j[0], path + "[0]"), num(j[1], path + "[1]"), num(j[2], path + "[2]"));
}

Aabb box(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("min") || !j.contains("max"))
    throw std::runtime_error(path + ": expected an object with 'min' and 'max'");
  return Aabb(triple(j["min"], path + ".min"), triple(j["max"], path + ".max"));
}

// Applies `set` when the key exists; keeps the default otherwise.
template <typename F>
void opt(const json& j, const std::string& key, const std::string& path, F set) {
  if (j.contains(key)) set(j[key], path + "." + key);
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");

  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error(path + ": top level must be an object");

  ScenarioConfig c;

  static const std::set<std::string> known = {
      "name",      "seed",       "mode",    "arm",      "bounds",          "roi",
      "resolution", "ground_z",  "boxes",   "start",    "intensity_samples", "idw_power",
      "influence_radius", "planner", "camera", "march",  "workspace",       "motion",
      "log_odds",  "max_iterations", "max_sim_time", "footprint_radius",
      "start_bubble_radius", "g_min_voxels", "cache_capacity"};
  for (const auto& item : j.items())
    if (!known.count(item.key()) && warnings)
      warnings->push_back(path + ": unknown key '" + item.key() + "'");

  opt(j, "name", "", [&](const json& v, const std::string& p) { c.name = text(v, p); });

  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw std::runtime_error("seed: expected an integer");
    c.seed = j["seed"].get<std::uint64_t>();
  } else {
    c.seed = 0;
    c.seed_was_given = false;
  }

  opt(j, "mode", "", [&](const json& v, const std::string& p) {
    c.planner.mode = parse_mission_mode(text(v, p));
  });
  opt(j, "arm", "", [&](const json& v, const std::string& p) { c.arm = parse_arm_mode(text(v, p)); });

  if (!j.contains("bounds")) throw std::runtime_error("bounds: required field missing");
  c.bounds = box(j["bounds"], "bounds");
  if (!j.contains("roi")) throw std::runtime_error("roi: required field missing");
  c.roi = box(j["roi"], "roi");

  opt(j, "resolution", "", [&](const json& v, const std::string& p) { c.resolution = num(v, p); });
  opt(j, "ground_z", "", [&](const json& v, const std::string& p) { c.scene.ground_z = num(v, p); });

  if (j.contains("boxes")) {
    const json& arr = j["boxes"];
    if (!arr.is_array()) throw std::runtime_error("boxes: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      c.scene.boxes.push_back(box(arr[i], "boxes[" + std::to_string(i) + "]"));
  }

  if (j.contains("start")) {
    const json& s = j["start"];
    opt(s, "x", "start", [&](const json& v, const std::string& p) { c.start.x = num(v, p); });
    opt(s, "y", "start", [&](const json& v, const std::string& p) { c.start.y = num(v, p); });
    opt(s, "heading", "start",
        [&](const json& v, const std::string& p) { c.start.heading = num(v, p); });
  }

  if (j.contains("intensity_samples")) {
    const json& arr = j["intensity_samples"];
    if (!arr.is_array()) throw std::runtime_error("intensity_samples: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = "intensity_samples[" + std::to_string(i) + "]";
      const json& row = arr[i];
      if (!row.is_array() || row.size() != 4)
        throw std::runtime_error(p + ": expected [x, y, z, value]");
      IntensitySample sample;
      sample.position = Vec3(num(row[0], p), num(row[1], p), num(row[2], p));
      sample.value = num(row[3], p + ".value");
      c.intensity_samples.push_back(sample);
    }
  }
  opt(j, "idw_power", "", [&](const json& v, const std::string& p) { c.idw_power = num(v, p); });
  opt(j, "influence_radius", "",
      [&](const json& v, const std::string& p) { c.influence_radius = num(v, p); });

  if (j.contains("planner")) {
    const json& pl = j["planner"];
    const std::string pp = "planner";
    opt(pl, "sampling", pp, [&](const json& v, const std::string& p) {
      c.planner.sampling = parse_sampling(text(v, p));
    });
    opt(pl, "cache", pp, [&](const json& v, const std::string& p) {
      c.planner.cache = parse_cache_mode(text(v, p));
    });
    opt(pl, "threshold", pp, [&](const json& v, const std::string& p) {
      c.planner.threshold = parse_threshold_mode(text(v, p));
    });
    opt(pl, "utility", pp, [&](const json& v, const std::string& p) {
      c.planner.utility = parse_utility(text(v, p));
    });
    opt(pl, "step_length", pp,
        [&](const json& v, const std::string& p) { c.planner.step_length = num(v, p); });
    opt(pl, "tries_per_node", pp,
        [&](const json& v, const std::string& p) { c.planner.tries_per_node = integer(v, p); });
    opt(pl, "max_nodes", pp,
        [&](const json& v, const std::string& p) { c.planner.max_nodes = integer(v, p); });
    opt(pl, "min_separation", pp,
        [&](const json& v, const std::string& p) { c.planner.min_separation = num(v, p); });
    opt(pl, "clearance_radius", pp,
        [&](const json& v, const std::string& p) { c.planner.clearance_radius = num(v, p); });
    opt(pl, "sample_radius", pp,
        [&](const json& v, const std::string& p) { c.planner.sample_radius = num(v, p); });
    opt(pl, "discount_lambda", pp,
        [&](const json& v, const std::string& p) { c.planner.discount_lambda = num(v, p); });
    opt(pl, "yaw_step_deg", pp,
        [&](const json& v, const std::string& p) { c.planner.yaw_step = rad(num(v, p)); });
    opt(pl, "refilter_radius", pp,
        [&](const json& v, const std::string& p) { c.planner.refilter_radius = num(v, p); });
    opt(pl, "visited_pos_tol", pp,
        [&](const json& v, const std::string& p) { c.planner.pos_tol = num(v, p); });
    opt(pl, "visited_yaw_deg", pp,
        [&](const json& v, const std::string& p) { c.planner.yaw_tol = rad(num(v, p)); });
  }

  if (j.contains("camera")) {
    const json& cam = j["camera"];
    const std::string cp = "camera";
    opt(cam, "h_fov_deg", cp,
        [&](const json& v, const std::string& p) { c.planner.camera.h_fov = rad(num(v, p)); });
    opt(cam, "v_fov_deg", cp,
        [&](const json& v, const std::string& p) { c.planner.camera.v_fov = rad(num(v, p)); });
    opt(cam, "min_range", cp,
        [&](const json& v, const std::string& p) { c.planner.camera.min_range = num(v, p); });
    opt(cam, "max_range", cp,
        [&](const json& v, const std::string& p) { c.planner.camera.max_range = num(v, p); });
    opt(cam, "width", cp,
        [&](const json& v, const std::string& p) { c.planner.camera.width = integer(v, p); });
    opt(cam, "height", cp,
        [&](const json& v, const std::string& p) { c.planner.camera.height = integer(v, p); });
  }

  if (j.contains("march")) {
    const json& m = j["march"];
    const std::string mp = "march";
    opt(m, "delta_r", mp,
        [&](const json& v, const std::string& p) { c.planner.march.delta_r = num(v, p); });
    opt(m, "delta_theta", mp,
        [&](const json& v, const std::string& p) { c.planner.march.delta_theta = num(v, p); });
    opt(m, "delta_phi", mp,
        [&](const json& v, const std::string& p) { c.planner.march.delta_phi = num(v, p); });
  }

  if (j.contains("workspace")) {
    const json& w = j["workspace"];
    const std::string wp = "workspace";
    opt(w, "arm_base_offset", wp, [&](const json& v, const std::string& p) {
      c.workspace.arm_base_offset = triple(v, p);
    });
    opt(w, "max_reach", wp,
        [&](const json& v, const std::string& p) { c.workspace.max_reach = num(v, p); });
    opt(w, "inner_radius", wp,
        [&](const json& v, const std::string& p) { c.workspace.inner_radius = num(v, p); });
    opt(w, "z_min", wp, [&](const json& v, const std::string& p) { c.workspace.z_min = num(v, p); });
    opt(w, "z_max", wp, [&](const json& v, const std::string& p) { c.workspace.z_max = num(v, p); });
    opt(w, "pitch_limit", wp,
        [&](const json& v, const std::string& p) { c.workspace.pitch_limit = num(v, p); });
  }

  if (j.contains("motion")) {
    const json& m = j["motion"];
    const std::string mp = "motion";
    opt(m, "base_speed", mp,
        [&](const json& v, const std::string& p) { c.motion.base_speed = num(v, p); });
    opt(m, "arm_eef_speed", mp,
        [&](const json& v, const std::string& p) { c.motion.arm_eef_speed = num(v, p); });
    opt(m, "base_turn_rate", mp,
        [&](const json& v, const std::string& p) { c.motion.base_turn_rate = num(v, p); });
  }

  if (j.contains("log_odds")) {
    const json& lo = j["log_odds"];
    const std::string lp = "log_odds";
    opt(lo, "hit", lp, [&](const json& v, const std::string& p) { c.log_odds.hit = num(v, p); });
    opt(lo, "miss", lp, [&](const json& v, const std::string& p) { c.log_odds.miss = num(v, p); });
    opt(lo, "clamp_min", lp,
        [&](const json& v, const std::string& p) { c.log_odds.clamp_min = num(v, p); });
    opt(lo, "clamp_max", lp,
        [&](const json& v, const std::string& p) { c.log_odds.clamp_max = num(v, p); });
    opt(lo, "occupied_threshold", lp,
        [&](const json& v, const std::string& p) { c.log_odds.occupied_threshold = num(v, p); });
  }

  opt(j, "max_iterations", "",
      [&](const json& v, const std::string& p) { c.max_iterations = integer(v, p); });
  opt(j, "max_sim_time", "",
      [&](const json& v, const std::string& p) { c.max_sim_time = num(v, p); });
  opt(j, "footprint_radius", "",
      [&](const json& v, const std::string& p) { c.footprint_radius = num(v, p); });
  opt(j, "start_bubble_radius", "",
      [&](const json& v, const std::string& p) { c.start_bubble_radius = num(v, p); });
  opt(j, "g_min_voxels", "",
      [&](const json& v, const std::string& p) { c.g_min_voxels = num(v, p); });
  opt(j, "cache_capacity", "", [&](const json& v, const std::string& p) {
    c.cache_capacity = static_cast<std::size_t>(integer(v, p));
  });

  return c;
}

}  // namespace nbv
