#include "nbv/robot.hpp"

#include "nbv/depth_render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace nbv {

void ArmWorkspace::validate() const {
  if (!(inner_radius >= 0.0 && inner_radius < max_reach))
    throw std::invalid_argument("arm workspace: inner radius must sit below max reach");
  if (!(z_min < z_max)) throw std::invalid_argument("arm workspace: empty vertical band");
  if (!(pitch_limit > 0.0)) throw std::invalid_argument("arm workspace: pitch limit must be positive");
}

void MotionCostModel::validate() const {
  if (!(base_speed > 0.0 && arm_eef_speed > 0.0 && base_turn_rate > 0.0))
    throw std::invalid_argument("motion cost model: all rates must be positive");
}

Vec3 arm_anchor(const RobotState& state) {
  const double c = std::cos(state.base.heading);
  const double s = std::sin(state.base.heading);
  const Vec3& o = state.workspace.arm_base_offset;
  return Vec3(state.base.x + c * o.x() - s * o.y(), state.base.y + s * o.x() + c * o.y(),
              state.ground_z + o.z());
}

ViewPose stow_pose(const RobotState& state) {
  const double c = std::cos(state.base.heading);
  const double s = std::sin(state.base.heading);
  const Vec3 pos(state.base.x + 0.65 * c, state.base.y + 0.65 * s, state.ground_z + 1.0);
  return ViewPose(pos, state.base.heading, 0.0);
}

bool is_arm_reachable(const RobotState& state, const ViewPose& target, const OccupancyMap& map,
                      double r_b, ArmMode arm) {
  if (arm == ArmMode::Stationary) {
    // The arm never leaves the stow position; only re-aiming in place works.
    return (target.position - stow_pose(state).position).norm() < 1e-9;
  }
  const ArmWorkspace& ws = state.workspace;
  const double dist = (target.position - arm_anchor(state)).norm();
  if (dist < ws.inner_radius || dist > ws.max_reach) return false;
  const double height = target.position.z() - state.ground_z;
  if (height < ws.z_min || height > ws.z_max) return false;
  if (std::abs(target.pitch) > ws.pitch_limit) return false;
  // Arm motions collision-check against mapped obstacles only: unknown
  // pockets do not pin the arm down the way they gate RRT edge growth,
  // mirroring how manipulation planners treat unmapped space as traversable.
  if (!map.is_segment_clear(target.position, target.position, r_b)) return false;
  return map.is_segment_clear(state.camera.position, target.position, r_b);
}

std::vector<ViewPose> reachable_prefix(const std::vector<ViewPose>& branch,
                                       const RobotState& state, const OccupancyMap& map,
                                       const VisitedSet& visited, double r_b, ArmMode arm,
                                       double pos_tol, double yaw_tol) {
  std::vector<ViewPose> prefix;
  RobotState probe = state;  // camera advances along the run; the base stays
  for (const ViewPose& pose : branch) {
    if (visited.contains(pose, pos_tol, yaw_tol)) break;
    if (!is_arm_reachable(probe, pose, map, r_b, arm)) break;
    prefix.push_back(pose);
    probe.camera = pose;
  }
  return prefix;
}

void NavGrid::cell_of(double x, double y, int& i, int& j) const {
  i = static_cast<int>(std::floor((x - origin_x) / res));
  j = static_cast<int>(std::floor((y - origin_y) / res));
}

NavGrid build_nav_grid(const OccupancyMap& map, double z_low, double z_high,
                       double footprint_radius) {
  const GridIndexer& g = map.grid();
  NavGrid nav;
  nav.origin_x = g.origin().x();
  nav.origin_y = g.origin().y();
  nav.res = g.resolution();
  nav.nx = g.dim(0);
  nav.ny = g.dim(1);
  nav.blocked.assign(static_cast<std::size_t>(nav.nx) * nav.ny, 0);

  // Pass 1: columns containing an Occupied voxel inside the height band.
  std::vector<std::uint8_t> column(nav.blocked.size(), 0);
  for (int k = 0; k < g.dim(2); ++k) {
    const double z = g.origin().z() + (k + 0.5) * nav.res;
    if (z < z_low || z > z_high) continue;
    for (int j = 0; j < nav.ny; ++j)
      for (int i = 0; i < nav.nx; ++i) {
        if (column[j * (std::int64_t)nav.nx + i]) continue;
        if (map.state_at(VoxelKey{i, j, k}) == VoxelState::Occupied)
          column[j * (std::int64_t)nav.nx + i] = 1;
      }
  }

  // Pass 2: dilate by the footprint disc.
  const int reach = static_cast<int>(std::ceil(footprint_radius / nav.res));
  const double r2 = footprint_radius * footprint_radius;
  for (int j = 0; j < nav.ny; ++j)
    for (int i = 0; i < nav.nx; ++i) {
      if (!column[j * (std::int64_t)nav.nx + i]) continue;
      for (int dj = -reach; dj <= reach; ++dj)
        for (int di = -reach; di <= reach; ++di) {
          const int ii = i + di;
          const int jj = j + dj;
          if (!nav.in_grid(ii, jj)) continue;
          if ((di * (double)di + dj * (double)dj) * nav.res * nav.res > r2) continue;
          nav.blocked[jj * (std::int64_t)nav.nx + ii] = 1;
        }
    }
  return nav;
}

BasePath plan_on_grid(const NavGrid& grid, double from_x, double from_y, double to_x, double to_y,
                      double goal_radius) {
  BasePath result;
  int si = 0, sj = 0;
  grid.cell_of(from_x, from_y, si, sj);
  if (!grid.in_grid(si, sj)) return result;

  const auto is_goal = [&](int i, int j) {
    const double dx = grid.center_x(i) - to_x;
    const double dy = grid.center_y(j) - to_y;
    if (goal_radius <= 0.0) {
      int gi = 0, gj = 0;
      grid.cell_of(to_x, to_y, gi, gj);
      return i == gi && j == gj;
    }
    return dx * dx + dy * dy <= goal_radius * goal_radius;
  };
  const auto heuristic = [&](int i, int j) {
    const double dx = grid.center_x(i) - to_x;
    const double dy = grid.center_y(j) - to_y;
    return std::max(0.0, std::sqrt(dx * dx + dy * dy) - goal_radius);
  };

  const std::int64_t cells = static_cast<std::int64_t>(grid.nx) * grid.ny;
  std::vector<double> cost(cells, std::numeric_limits<double>::infinity());
  std::vector<std::int32_t> parent(cells, -1);
  std::vector<std::uint8_t> done(cells, 0);
  const auto flat = [&](int i, int j) { return static_cast<std::int64_t>(j) * grid.nx + i; };

  using Entry = std::pair<double, std::int64_t>;  // (f, cell); ties pop lowest cell
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;

  const std::int64_t start = flat(si, sj);
  cost[start] = 0.0;
  open.emplace(heuristic(si, sj), start);

  static const int di8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static const int dj8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const double diag = grid.res * std::sqrt(2.0);

  std::int64_t goal = -1;
  while (!open.empty()) {
    const auto [f, cur] = open.top();
    open.pop();
    if (done[cur]) continue;
    done[cur] = 1;
    const int ci = static_cast<int>(cur % grid.nx);
    const int cj = static_cast<int>(cur / grid.nx);
    if (is_goal(ci, cj)) {
      goal = cur;
      break;
    }
    for (int n = 0; n < 8; ++n) {
      const int ni = ci + di8[n];
      const int nj = cj + dj8[n];
      if (grid.is_blocked(ni, nj)) continue;
      if (n >= 4 && (grid.is_blocked(ci + di8[n], cj) || grid.is_blocked(ci, cj + dj8[n])))
        continue;  // no corner cutting
      const std::int64_t nf = flat(ni, nj);
      const double step = n < 4 ? grid.res : diag;
      if (cost[cur] + step < cost[nf]) {
        cost[nf] = cost[cur] + step;
        parent[nf] = static_cast<std::int32_t>(cur);
        open.emplace(cost[nf] + heuristic(ni, nj), nf);
      }
    }
  }
  if (goal < 0) return result;

  std::vector<std::int64_t> chain;
  for (std::int64_t c = goal; c >= 0; c = parent[c]) chain.push_back(c);
  std::reverse(chain.begin(), chain.end());

  result.found = true;
  result.waypoints.emplace_back(from_x, from_y);
  for (std::size_t idx = 1; idx < chain.size(); ++idx) {
    const int i = static_cast<int>(chain[idx] % grid.nx);
    const int j = static_cast<int>(chain[idx] / grid.nx);
    result.waypoints.emplace_back(grid.center_x(i), grid.center_y(j));
  }
  for (std::size_t idx = 1; idx < result.waypoints.size(); ++idx)
    result.length += (result.waypoints[idx] - result.waypoints[idx - 1]).norm();
  return result;
}

BasePath plan_base_path(const OccupancyMap& map, const RobotState& state, double to_x, double to_y,
                        double footprint_radius, double goal_radius) {
  const NavGrid nav =
      build_nav_grid(map, state.ground_z, state.ground_z + state.workspace.z_max, footprint_radius);
  return plan_on_grid(nav, state.base.x, state.base.y, to_x, to_y, goal_radius);
}

std::vector<BodyBall> body_capsule(const RobotState& state, double footprint_radius) {
  std::vector<BodyBall> balls;
  const Vec3 base_floor(state.base.x, state.base.y, state.ground_z);
  const Vec3 anchor = arm_anchor(state);
  const Vec3 stow = stow_pose(state).position;

  // Chassis and mast column: stacked footprint balls from the floor to the
  // arm base, then the stowed boom out to the sensor head.
  for (double z = footprint_radius; z <= anchor.z() - state.ground_z + 1e-9; z += footprint_radius)
    balls.push_back({base_floor + Vec3(0.0, 0.0, z), footprint_radius});
  const double arm_len = (stow - anchor).norm();
  for (double t = 0.0; t <= 1.0 + 1e-9; t += 0.2 / std::max(arm_len, 1e-9))
    balls.push_back({anchor + std::min(t, 1.0) * (stow - anchor), 0.2});
  balls.push_back({stow, state.workspace.inner_radius});
  return balls;
}

bool capsule_clear(const std::vector<BodyBall>& capsule, const Scene& scene) {
  for (const BodyBall& b : capsule)
    for (const Aabb& box : scene.boxes)
      if (box.exteriorDistance(b.center) < b.radius) return false;
  return true;
}

namespace {

// The bumper touched something. Write every contact point into the map so
// the next path query routes around it; without this the obstacle can sit
// inside the camera's minimum range forever and the planner would keep
// producing the same blocked path.
void mark_contacts(const std::vector<BodyBall>& capsule, const Scene& scene, OccupancyMap& map) {
  for (const BodyBall& b : capsule)
    for (const Aabb& box : scene.boxes)
      if (box.exteriorDistance(b.center) < b.radius)
        map.mark_occupied(b.center.cwiseMax(box.min()).cwiseMin(box.max()));
}

}  // namespace

void certify_body_space(const RobotState& state, OccupancyMap& map, double footprint_radius) {
  for (const BodyBall& b : body_capsule(state, footprint_radius))
    map.mark_free_ball(b.center, b.radius);
}

bool approach(RobotState& state, const ViewPose& q_best, OccupancyMap& map, const Scene& scene,
              double footprint_radius, ArmMode arm) {
  // A mobile arm closes the final gap itself, so the base holds a standoff.
  // A stowed arm never will, so the base has to deliver the camera: aim the
  // drive at the point that puts the stow position on the goal's projection.
  double to_x = q_best.position.x();
  double to_y = q_best.position.y();
  double goal_radius = 0.7 * state.workspace.max_reach;
  if (arm == ArmMode::Stationary) {
    const Vec3 stow_offset = stow_pose(state).position - Vec3(state.base.x, state.base.y, 0.0);
    const double boom = std::hypot(stow_offset.x(), stow_offset.y());
    to_x -= boom * std::cos(q_best.yaw);
    to_y -= boom * std::sin(q_best.yaw);
    goal_radius = footprint_radius;
  }
  const BasePath path = plan_base_path(map, state, to_x, to_y, footprint_radius, goal_radius);
  if (!path.found) return false;

  // Walk the waypoints physically. The plan came from the map, where unknown
  // ground is traversable; the bumper stops the base before its body would
  // actually strike scene geometry the map has not seen yet.
  double traveled = 0.0;
  Eigen::Vector2d at(state.base.x, state.base.y);
  for (std::size_t w = 1; w < path.waypoints.size(); ++w) {
    const Eigen::Vector2d next = path.waypoints[w];
    const Eigen::Vector2d step = next - at;
    if (step.squaredNorm() < 1e-18) continue;
    RobotState probe = state;
    probe.base.x = next.x();
    probe.base.y = next.y();
    probe.base.heading = normalize_yaw(std::atan2(step.y(), step.x()));
    const std::vector<BodyBall> capsule = body_capsule(probe, footprint_radius);
    if (!capsule_clear(capsule, scene)) {
      mark_contacts(capsule, scene, map);
      break;
    }
    traveled += step.norm();
    at = next;
    state.base.x = next.x();
    state.base.y = next.y();
    state.base.heading = probe.base.heading;
  }
  state.base_distance += traveled;
  state.sim_time += traveled / state.motion.base_speed;

  // Turn to face the goal unless swinging the boom around would hit
  // something; the wrist can still aim the camera either way. If the turn
  // is refused, the touch goes into the map like any other bumper contact.
  const double dx = q_best.position.x() - state.base.x;
  const double dy = q_best.position.y() - state.base.y;
  const double face = arm == ArmMode::Stationary ? q_best.yaw : std::atan2(dy, dx);
  if (arm == ArmMode::Stationary || dx * dx + dy * dy > 1e-18) {
    RobotState probe = state;
    probe.base.heading = normalize_yaw(face);
    const std::vector<BodyBall> capsule = body_capsule(probe, footprint_radius);
    if (capsule_clear(capsule, scene)) {
      state.sim_time +=
          std::abs(yaw_diff(probe.base.heading, state.base.heading)) / state.motion.base_turn_rate;
      state.base.heading = probe.base.heading;
    } else {
      mark_contacts(capsule, scene, map);
    }
  }
  certify_body_space(state, map, footprint_radius);

  // Arm parked at stow; the wrist aims the camera for the arrival capture.
  // With a stowed arm the camera sits (near) the goal's projection already,
  // so it adopts the goal's own aim instead of pointing at it.
  const ViewPose stow = stow_pose(state);
  double yaw = q_best.yaw;
  double pitch = q_best.pitch;
  if (arm == ArmMode::Mobile) aim_at(stow.position, q_best.position, yaw, pitch);
  state.camera = ViewPose(stow.position, yaw,
                          std::clamp(pitch, -state.workspace.pitch_limit, state.workspace.pitch_limit));
  return true;
}

ExecuteResult execute_views(RobotState& state, const std::vector<ViewPose>& poses,
                            const Scene& scene, const CameraModel& model, OccupancyMap& map,
                            VisitedSet& visited, double r_b, ArmMode arm) {
  ExecuteResult result;
  for (const ViewPose& pose : poses) {
    if (!is_arm_reachable(state, pose, map, r_b, arm)) {
      ++result.skipped;
      continue;
    }
    const double travel = (pose.position - state.camera.position).norm();
    state.arm_travel += travel;
    state.sim_time += travel / state.motion.arm_eef_speed;
    state.camera = pose;
    const DepthImage depth = render_depth(scene, pose, model);
    integrate_depth(map, pose, model, depth);
    visited.add(pose);
    ++result.captures;
  }
  return result;
}

}  // namespace nbv
