#pragma once

#include "nbv/camera.hpp"
#include "nbv/geometry.hpp"
#include "nbv/modes.hpp"
#include "nbv/occupancy_map.hpp"
#include "nbv/visited.hpp"

#include <cstdint>
#include <vector>

namespace nbv {

struct BasePose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // kept normalized to [-pi, pi)
};

/// Reach envelope standing in for the arm's inverse kinematics. The anchor
/// offset is expressed in the base frame (x forward).
struct ArmWorkspace {
  Vec3 arm_base_offset = Vec3(0.0, 0.0, 0.5);
  double max_reach = 1.3;
  double inner_radius = 0.35;  // camera cannot focus inside its own near range
  double z_min = 0.4;          // vertical band, meters above ground
  double z_max = 1.4;
  double pitch_limit = 1.0;

  void validate() const;
};

struct MotionCostModel {
  double base_speed = 0.5;     // m/s
  double arm_eef_speed = 0.2;  // m/s of camera displacement
  double base_turn_rate = 0.5;  // rad/s

  void validate() const;
};

struct RobotState {
  BasePose base;
  ArmWorkspace workspace;
  MotionCostModel motion;
  ViewPose camera;
  double ground_z = 0.0;

  // odometry, all non-decreasing
  double base_distance = 0.0;
  double arm_travel = 0.0;
  double sim_time = 0.0;
};

/// World position of the arm mounting point for the current base pose.
Vec3 arm_anchor(const RobotState& state);

/// Default camera parking spot: 0.65 m ahead of the base at 1.0 m above
/// ground, level, looking along the heading. Sits comfortably inside the
/// workspace envelope.
ViewPose stow_pose(const RobotState& state);

/// Workspace-envelope reachability: target distance from the anchor within
/// [inner_radius, max_reach], target height inside the vertical band, pitch
/// within limits, a clearance ball at the target free, and the straight
/// segment from the current camera free at the same clearance. With a
/// stationary arm only the stow position itself passes.
bool is_arm_reachable(const RobotState& state, const ViewPose& target, const OccupancyMap& map,
                      double r_b, ArmMode arm = ArmMode::Mobile);

/// Longest leading run of branch poses that are unvisited and arm-reachable,
/// each checked from its predecessor in the run (the first from the current
/// camera pose). Stops at the first failure.
std::vector<ViewPose> reachable_prefix(const std::vector<ViewPose>& branch,
                                       const RobotState& state, const OccupancyMap& map,
                                       const VisitedSet& visited, double r_b,
                                       ArmMode arm = ArmMode::Mobile, double pos_tol = 0.05,
                                       double yaw_tol = rad(10.0));

/// 2D traversability raster over the map's footprint. A column is blocked
/// when any Occupied voxel with center height inside [z_low, z_high] lies
/// within footprint_radius of the column center; Unknown never blocks.
struct NavGrid {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double res = 0.1;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> blocked;

  bool in_grid(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
  bool is_blocked(int i, int j) const { return !in_grid(i, j) || blocked[j * (std::int64_t)nx + i] != 0; }
  void cell_of(double x, double y, int& i, int& j) const;
  double center_x(int i) const { return origin_x + (i + 0.5) * res; }
  double center_y(int j) const { return origin_y + (j + 0.5) * res; }
};

NavGrid build_nav_grid(const OccupancyMap& map, double z_low, double z_high,
                       double footprint_radius);

struct BasePath {
  bool found = false;
  std::vector<Eigen::Vector2d> waypoints;  // from start point through cell centers
  double length = 0.0;
};

/// 8-connected A* over the nav grid, diagonal steps cost res*sqrt(2) and are
/// refused when either adjacent orthogonal cell is blocked (no corner
/// cutting). The search ends at the first expanded cell whose center lies
/// within goal_radius of the target (goal_radius 0 means the target's own
/// cell); the straight-line-minus-radius heuristic keeps costs identical to
/// an exhaustive shortest-path search.
BasePath plan_on_grid(const NavGrid& grid, double from_x, double from_y, double to_x, double to_y,
                      double goal_radius = 0.0);

/// Convenience wrapper: builds the nav grid for the robot-height band
/// [ground, ground + z_max] and plans from the base pose.
BasePath plan_base_path(const OccupancyMap& map, const RobotState& state, double to_x, double to_y,
                        double footprint_radius, double goal_radius = 0.0);

struct BodyBall {
  Vec3 center;
  double radius;
};

/// Ball cover of the volume the robot physically occupies with the arm
/// stowed: chassis and mast column over the base, the boom out to the sensor
/// head, and the head itself.
std::vector<BodyBall> body_capsule(const RobotState& state, double footprint_radius);

/// True when no capsule ball touches scene geometry.
bool capsule_clear(const std::vector<BodyBall>& capsule, const Scene& scene);

/// Marks the body capsule volume free in the map. The robot stands here
/// without collision, so this is knowledge the map may record even though
/// the camera cannot see inside its own minimum range. The same clearing
/// keeps navigation costmaps from walling a robot into its spawn.
void certify_body_space(const RobotState& state, OccupancyMap& map, double footprint_radius);

/// Drives the base toward the ground projection of q_best. With a mobile arm
/// the base stops at the standoff distance 0.7 * max_reach so the target
/// stays inside the arm workspace; with the arm stowed nothing will close
/// that last gap, so the base instead aims to put the stowed camera right on
/// the projection (offset-corrected) and realize the view itself. The path
/// comes from the map, but motion is physical: a bumper check stops the base
/// at the last waypoint whose body capsule stays clear of the actual scene,
/// the way a real platform halts short of an unmapped obstacle, and any
/// contact points are written into the map so the next plan routes around
/// them. Accrues base odometry and simulated drive plus final turn time; on
/// arrival the heading and the stowed camera aim at q_best (the turn is
/// skipped if swinging the boom would strike geometry) and the body volume
/// at the destination is certified free.
/// Returns false when no path exists (the caller blacklists the goal).
bool approach(RobotState& state, const ViewPose& q_best, OccupancyMap& map, const Scene& scene,
              double footprint_radius, ArmMode arm);

struct ExecuteResult {
  int captures = 0;
  int skipped = 0;  // poses that stopped being reachable since planning
};

/// Runs the camera through `poses` in order: each still-reachable pose costs
/// arm travel and time, renders a depth image from the scene, integrates it,
/// and joins the visited set. Unreachable poses are skipped and counted.
ExecuteResult execute_views(RobotState& state, const std::vector<ViewPose>& poses,
                            const Scene& scene, const CameraModel& model, OccupancyMap& map,
                            VisitedSet& visited, double r_b, ArmMode arm = ArmMode::Mobile);

}  // namespace nbv
