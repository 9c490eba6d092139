#pragma once

#include "nbv/camera.hpp"
#include "nbv/gain.hpp"
#include "nbv/geometry.hpp"
#include "nbv/intensity_map.hpp"
#include "nbv/modes.hpp"
#include "nbv/occupancy_map.hpp"
#include "nbv/visited.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace nbv {

struct RrtNode {
  int id = 0;
  int parent = -1;  // -1 marks the root
  ViewPose pose;
  double step_length = 0.0;    // edge length to the parent
  double branch_length = 0.0;  // cumulative length from the root
  GainBreakdown gain;
  double score = 0.0;  // utility used for selection; equals gain.total for Weighted
};

/// Camera-pose tree grown by expand_tree. Nodes are stored in insertion
/// order, ids are indices. Nearest-neighbor lookup is an exact linear scan;
/// trees are capped at a few hundred nodes, so nothing fancier pays off.
class RrtTree {
 public:
  explicit RrtTree(const ViewPose& root_pose);

  const RrtNode& node(int id) const { return nodes_[id]; }
  RrtNode& node(int id) { return nodes_[id]; }
  const std::vector<RrtNode>& nodes() const { return nodes_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  /// Id of the node closest to p; also reports the smallest distance seen.
  int nearest(const Vec3& p, double* min_dist = nullptr) const;

  /// Appends a node under `parent` and returns its id. Edge bookkeeping
  /// (step and branch lengths) is derived here.
  int add(int parent, const ViewPose& pose);

 private:
  std::vector<RrtNode> nodes_;
};

struct CacheEntry {
  ViewPose pose;
  GainBreakdown gain;  // last evaluated value; may be stale
};

/// Cross-iteration store of high-utility candidate poses plus the running
/// gain threshold. `fixed_threshold` keeps the configured initial value for
/// the fixed-threshold mode and for the unfiltered re-evaluation rule.
struct CacheSet {
  std::vector<CacheEntry> entries;
  std::size_t capacity = 30;
  double g_min = 0.0;
  double fixed_threshold = 0.0;

  CacheSet() = default;
  CacheSet(std::size_t cap, double initial_g_min)
      : capacity(cap), g_min(initial_g_min), fixed_threshold(initial_g_min) {}
};

struct PlannerConfig {
  MissionMode mode = MissionMode::ExploreInspect;
  SamplingStrategy sampling = SamplingStrategy::HemisphereSurface;
  CacheMode cache = CacheMode::Filtered;
  GainThresholdMode threshold = GainThresholdMode::Variable;
  UtilityKind utility = UtilityKind::Weighted;

  double step_length = 0.5;      // steer step l
  int tries_per_node = 50;       // sampling tries budgeted per addition
  int max_nodes = 600;           // tree size cap
  double min_separation = 0.3;   // pairwise node distance floor d
  double clearance_radius = 0.25;  // edge/pose clearance r_b
  double sample_radius = 1.5;    // hemisphere radius, must exceed arm reach
  double discount_lambda = 0.25;
  double yaw_step = rad(10.0);
  double pitch_limit = 1.0;      // aiming pitch clamp, radians
  double pos_tol = 0.05;         // visited-match tolerances
  double yaw_tol = rad(10.0);
  double cache_pos_tol = 0.3;    // cache clustering tolerances
  double cache_yaw_tol = rad(10.0);
  double refilter_radius = 5.0;  // unfiltered re-evaluation radius

  CameraModel camera;
  RayMarchSpec march;
  GainWeights weights;
  Aabb bounds;
  Vec3 arm_base = Vec3::Zero();  // center of the sampling hemisphere
};

/// Uniform position draw. HemisphereSurface: on the upper half of the sphere
/// of `radius` around arm_base, then clamped into bounds. UniformBox: inside
/// bounds. Consumes a fixed number of rng words per call.
Vec3 sample_position(SamplingStrategy sampling, const Vec3& arm_base, double radius,
                     const Aabb& bounds, std::mt19937_64& rng);

/// Point on the segment q_near -> q_rand at distance min(l, |q_rand-q_near|)
/// from q_near. Callers must reject coincident inputs.
Vec3 steer(const Vec3& q_near, const Vec3& q_rand, double l);

/// Orientation for a freshly accepted position. Inspect mode aims along the
/// intensity gradient when it has a usable direction (pitch clamped to the
/// limit); zero or near-vertical gradients, and Explore mode always, fall
/// back to the horizon-level yaw sweep.
ViewPose assign_orientation(const Vec3& position, MissionMode mode, const OccupancyMap& map,
                            const IntensityMap& intensity, const PlannerConfig& cfg);

/// Acceptance test plus insertion. The candidate joins the tree under its
/// nearest node iff it is inside bounds, at least `d` from every existing
/// node, and the connecting segment is free at clearance r_b.
bool try_add_node(RrtTree& tree, const OccupancyMap& map, const Aabb& bounds,
                  const ViewPose& candidate, double d, double r_b);

/// Grows a fresh tree from root_pose until max_nodes nodes exist or the
/// aggregate try budget (max_nodes * tries_per_node draws) runs out. Every
/// accepted node receives an orientation and a full gain evaluation; the
/// root is evaluated as-is, keeping its current aim.
RrtTree expand_tree(const ViewPose& root_pose, const OccupancyMap& map,
                    const IntensityMap& intensity, const VisitedSet& visited,
                    const PlannerConfig& cfg, std::mt19937_64& rng);

/// Re-evaluates cached candidates against the current map.
/// Filtered: entries whose stored gain exceeds g_min are re-evaluated at
/// their stored pose, the top `capacity` by new total survive, and in
/// Variable mode g_min becomes the lowest surviving total. Unfiltered:
/// entries with stored gain above the fixed threshold and within
/// refilter_radius of the robot are re-evaluated; everything is kept and
/// g_min stays put.
void refilter_cache(CacheSet& cache, const OccupancyMap& map, const IntensityMap& intensity,
                    const VisitedSet& visited, const Vec3& robot_position,
                    const PlannerConfig& cfg);

/// Stores tree nodes with gain.total > g_min for future iterations. A node
/// matching an existing entry within the cache tolerances replaces that
/// entry's pose and gain instead of appending. Filtered mode truncates to
/// the top `capacity` by total gain (g_min is not touched here).
void merge_into_cache(CacheSet& cache, const RrtTree& tree, const PlannerConfig& cfg);

struct BestChoice {
  bool from_cache = false;
  int id = 0;  // node id, or entry index for cache picks
  ViewPose pose;
  GainBreakdown gain;
  double score = 0.0;
};

/// Argmax of the selection score over tree nodes and cache entries. Ties go
/// to the shorter branch (cache entries count as zero), then the lower id;
/// cache ids are offset past the tree's so tree nodes win id ties. The
/// blacklist overload skips candidates matching a recently failed goal, and
/// falls back to the unrestricted pick if that excludes everything.
BestChoice best_node(const RrtTree& tree, const CacheSet& cache, const PlannerConfig& cfg);
BestChoice best_node(const RrtTree& tree, const CacheSet& cache, const PlannerConfig& cfg,
                     const VisitedSet& blacklist);

/// Poses along the parent chain root -> target, root excluded.
std::vector<ViewPose> extract_branch(const RrtTree& tree, int target_id);

}  // namespace nbv
