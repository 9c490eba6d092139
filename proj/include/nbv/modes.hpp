#pragma once

namespace nbv {

/// What the mission optimizes: pure coverage, or coverage plus attraction to
/// the inspection-interest field.
enum class MissionMode { Explore, ExploreInspect };

/// How the minimum-gain termination threshold evolves.
enum class GainThresholdMode { Fixed, Variable };

/// Where tree extension targets are drawn from.
enum class SamplingStrategy {
  HemisphereSurface,  // upper hemisphere shell around the arm base
  UniformBox,         // uniform inside the exploration bounds
};

/// What happens to cached view candidates between iterations.
enum class CacheMode { Filtered, Unfiltered };

/// Node scoring used when picking the next view.
enum class UtilityKind { Weighted, Exponential, Linear };

/// Whether the arm plans views while the base moves, or the camera stays in a
/// fixed stow pose and only the base repositions.
enum class ArmMode { Mobile, Stationary };

const char* to_string(MissionMode);
const char* to_string(GainThresholdMode);
const char* to_string(SamplingStrategy);
const char* to_string(CacheMode);
const char* to_string(UtilityKind);
const char* to_string(ArmMode);

}  // namespace nbv
