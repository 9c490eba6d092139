#pragma once

#include "nbv/mission.hpp"
#include "nbv/scenario.hpp"

#include <string>

namespace nbv {

// enum <-> text, shared by scenario files, CLI flags and metrics columns
MissionMode parse_mission_mode(const std::string& s);
GainThresholdMode parse_threshold_mode(const std::string& s);
SamplingStrategy parse_sampling(const std::string& s);
CacheMode parse_cache_mode(const std::string& s);
UtilityKind parse_utility(const std::string& s);
ArmMode parse_arm_mode(const std::string& s);

/// Parses and lightly checks a scenario file. Structural problems (bad
/// syntax, wrong types, unknown enum values) throw std::runtime_error with
/// the offending field named; semantic checks stay in validate_scenario.
/// Unknown top-level keys are collected into `warnings` when given.
ScenarioConfig load_scenario(const std::string& path, std::vector<std::string>* warnings = nullptr);

}  // namespace nbv
