#include "nbv/rrt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace nbv {
namespace {

// Uniform double in [0, 1) built from the top 53 bits of one engine word, so
// the draw sequence is identical across standard libraries.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void sort_by_gain_desc(std::vector<CacheEntry>& entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const CacheEntry& a, const CacheEntry& b) {
    return a.gain.total > b.gain.total;
  });
}

}  // namespace

RrtTree::RrtTree(const ViewPose& root_pose) {
  RrtNode root;
  root.id = 0;
  root.pose = root_pose;
  nodes_.push_back(root);
}

int RrtTree::nearest(const Vec3& p, double* min_dist) const {
  int best = 0;
  double best_d2 = (nodes_[0].pose.position - p).squaredNorm();
  for (int i = 1; i < static_cast<int>(nodes_.size()); ++i) {
    const double d2 = (nodes_[i].pose.position - p).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  if (min_dist) *min_dist = std::sqrt(best_d2);
  return best;
}

int RrtTree::add(int parent, const ViewPose& pose) {
  RrtNode n;
  n.id = static_cast<int>(nodes_.size());
  n.parent = parent;
  n.pose = pose;
  n.step_length = (pose.position - nodes_[parent].pose.position).norm();
  n.branch_length = nodes_[parent].branch_length + n.step_length;
  nodes_.push_back(n);
  return n.id;
}

Vec3 sample_position(SamplingStrategy sampling, const Vec3& arm_base, double radius,
                     const Aabb& bounds, std::mt19937_64& rng) {
  if (sampling == SamplingStrategy::HemisphereSurface) {
    // Archimedes hat-box: uniform height over [0, R] plus uniform azimuth is
    // uniform on the hemisphere surface.
    const double z = radius * unit_draw(rng);
    const double az = 2.0 * kPi * unit_draw(rng) - kPi;
    const double rho = std::sqrt(std::max(0.0, radius * radius - z * z));
    Vec3 p = arm_base + Vec3(rho * std::cos(az), rho * std::sin(az), z);
    return p.cwiseMax(bounds.min()).cwiseMin(bounds.max());
  }
  const Vec3 span = bounds.max() - bounds.min();
  return bounds.min() + Vec3(span.x() * unit_draw(rng), span.y() * unit_draw(rng),
                             span.z() * unit_draw(rng));
}

Vec3 steer(const Vec3& q_near, const Vec3& q_rand, double l) {
  const Vec3 delta = q_rand - q_near;
  const double dist = delta.norm();
  const double step = std::min(l, dist);
  return q_near + delta * (step / dist);
}

ViewPose assign_orientation(const Vec3& position, MissionMode mode, const OccupancyMap& map,
                            const IntensityMap& intensity, const PlannerConfig& cfg) {
  if (mode == MissionMode::ExploreInspect) {
    const Vec3 g = intensity.gradient_at(position);
    const double horizontal = std::hypot(g.x(), g.y());
    if (horizontal > 1e-12) {
      const double yaw = std::atan2(g.y(), g.x());
      const double pitch =
          std::clamp(std::atan2(g.z(), horizontal), -cfg.pitch_limit, cfg.pitch_limit);
      return ViewPose(position, yaw, pitch);
    }
    if (std::abs(g.z()) > 1e-12) {
      // Vertical gradient: pitch saturates at the limit, yaw comes from the
      // coverage sweep since the gradient gives no heading.
      const YawChoice yc = best_yaw(map, position, cfg.camera, cfg.march, cfg.bounds, cfg.yaw_step);
      return ViewPose(position, yc.yaw, std::copysign(cfg.pitch_limit, g.z()));
    }
  }
  const YawChoice yc = best_yaw(map, position, cfg.camera, cfg.march, cfg.bounds, cfg.yaw_step);
  return ViewPose(position, yc.yaw, 0.0);
}

bool try_add_node(RrtTree& tree, const OccupancyMap& map, const Aabb& bounds,
                  const ViewPose& candidate, double d, double r_b) {
  if (!point_in_aabb(candidate.position, bounds)) return false;
  double min_dist = 0.0;
  const int near = tree.nearest(candidate.position, &min_dist);
  if (min_dist < d) return false;
  if (!map.is_segment_free(tree.node(near).pose.position, candidate.position, r_b)) return false;
  tree.add(near, candidate);
  return true;
}

RrtTree expand_tree(const ViewPose& root_pose, const OccupancyMap& map,
                    const IntensityMap& intensity, const VisitedSet& visited,
                    const PlannerConfig& cfg, std::mt19937_64& rng) {
  RrtTree tree(root_pose);
  const auto evaluate = [&](RrtNode& n) {
    n.gain = weighted_gain(map, intensity, visited, n.pose, cfg.weights, cfg.mode, cfg.camera,
                           cfg.march, cfg.bounds, cfg.pos_tol, cfg.yaw_tol);
    n.score = discounted_score(n.gain.total, n.step_length, cfg.utility, cfg.discount_lambda);
  };
  evaluate(tree.node(0));

  const int64_t budget = static_cast<int64_t>(cfg.max_nodes) * cfg.tries_per_node;
  int64_t tries = 0;
  while (tries < budget && tree.size() < cfg.max_nodes) {
    ++tries;
    const Vec3 q_rand = sample_position(cfg.sampling, cfg.arm_base, cfg.sample_radius, cfg.bounds, rng);
    double dist = 0.0;
    const int anchor = tree.nearest(q_rand, &dist);
    if (dist < 1e-9) continue;
    const Vec3 q_new = steer(tree.node(anchor).pose.position, q_rand, cfg.step_length);
    if (!try_add_node(tree, map, cfg.bounds, ViewPose(q_new, 0.0, 0.0), cfg.min_separation,
                      cfg.clearance_radius))
      continue;
    RrtNode& n = tree.node(tree.size() - 1);
    n.pose = assign_orientation(q_new, cfg.mode, map, intensity, cfg);
    evaluate(n);
  }
  return tree;
}

void refilter_cache(CacheSet& cache, const OccupancyMap& map, const IntensityMap& intensity,
                    const VisitedSet& visited, const Vec3& robot_position,
                    const PlannerConfig& cfg) {
  if (cache.entries.empty()) return;
  const auto reeval = [&](CacheEntry& e) {
    e.gain = weighted_gain(map, intensity, visited, e.pose, cfg.weights, cfg.mode, cfg.camera,
                           cfg.march, cfg.bounds, cfg.pos_tol, cfg.yaw_tol);
  };

  if (cfg.cache == CacheMode::Filtered) {
    std::vector<CacheEntry> kept;
    kept.reserve(cache.entries.size());
    for (CacheEntry& e : cache.entries) {
      if (e.gain.total > cache.g_min) {
        reeval(e);
        kept.push_back(e);
      }
    }
    sort_by_gain_desc(kept);
    if (kept.size() > cache.capacity) kept.resize(cache.capacity);
    cache.entries = std::move(kept);
    if (cfg.threshold == GainThresholdMode::Variable && !cache.entries.empty())
      cache.g_min = cache.entries.back().gain.total;
    return;
  }

  // Unfiltered: refresh stored gains near the robot, drop nothing. Entries
  // that eroded below the threshold stay but are never re-evaluated again.
  const double r2 = cfg.refilter_radius * cfg.refilter_radius;
  for (CacheEntry& e : cache.entries) {
    if (e.gain.total > cache.fixed_threshold &&
        (e.pose.position - robot_position).squaredNorm() <= r2)
      reeval(e);
  }
}

void merge_into_cache(CacheSet& cache, const RrtTree& tree, const PlannerConfig& cfg) {
  const double p2 = cfg.cache_pos_tol * cfg.cache_pos_tol;
  for (const RrtNode& n : tree.nodes()) {
    if (!(n.gain.total > cache.g_min)) continue;
    bool clustered = false;
    for (CacheEntry& e : cache.entries) {
      if ((e.pose.position - n.pose.position).squaredNorm() > p2) continue;
      if (std::abs(yaw_diff(e.pose.yaw, n.pose.yaw)) > cfg.cache_yaw_tol) continue;
      e.pose = n.pose;
      e.gain = n.gain;
      clustered = true;
      break;
    }
    if (!clustered) cache.entries.push_back({n.pose, n.gain});
  }
  if (cfg.cache == CacheMode::Filtered && cache.entries.size() > cache.capacity) {
    sort_by_gain_desc(cache.entries);
    cache.entries.resize(cache.capacity);
  }
}

BestChoice best_node(const RrtTree& tree, const CacheSet& cache, const PlannerConfig& cfg) {
  const VisitedSet no_blacklist;
  return best_node(tree, cache, cfg, no_blacklist);
}

BestChoice best_node(const RrtTree& tree, const CacheSet& cache, const PlannerConfig& cfg,
                     const VisitedSet& blacklist) {
  // Two passes: honor the blacklist, but never come back empty-handed if it
  // excludes every candidate (the tree always has its root).
  for (int honor_blacklist = 1; honor_blacklist >= 0; --honor_blacklist) {
    bool found = false;
    BestChoice best;
    double best_branch = 0.0;
    const auto consider = [&](bool from_cache, int id, const ViewPose& pose,
                              const GainBreakdown& gain, double score, double branch) {
      if (honor_blacklist && blacklist.contains(pose, cfg.pos_tol, cfg.yaw_tol)) return;
      if (found) {
        if (score < best.score) return;
        if (score == best.score && branch > best_branch) return;
        if (score == best.score && branch == best_branch && id > best.id) return;
      }
      best = BestChoice{from_cache, id, pose, gain, score};
      best_branch = branch;
      found = true;
    };
    for (const RrtNode& n : tree.nodes())
      consider(false, n.id, n.pose, n.gain, n.score, n.branch_length);
    for (std::size_t i = 0; i < cache.entries.size(); ++i) {
      const CacheEntry& e = cache.entries[i];
      consider(true, cfg.max_nodes + static_cast<int>(i), e.pose, e.gain, e.gain.total, 0.0);
    }
    if (found) return best;
  }
  return {};
}

std::vector<ViewPose> extract_branch(const RrtTree& tree, int target_id) {
  std::vector<ViewPose> chain;
  for (int id = target_id; tree.node(id).parent >= 0; id = tree.node(id).parent)
    chain.push_back(tree.node(id).pose);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

}  // namespace nbv
