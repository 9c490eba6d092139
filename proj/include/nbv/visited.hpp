#pragma once

#include "nbv/geometry.hpp"

#include <vector>

namespace nbv {

/// Append-only log of camera poses the mission has already captured from.
class VisitedSet {
 public:
  void add(const ViewPose& pose) { poses_.push_back(pose); }
  size_t size() const { return poses_.size(); }
  const std::vector<ViewPose>& poses() const { return poses_; }

  /// True when some visited pose lies within pos_tol (Euclidean) of the query
  /// and both view angles match within yaw_tol (yaw wrapped, pitch plain).
  /// Pitch gets the same tolerance as yaw: a camera tilted further down sees
  /// different content from the same spot just as a turned one does.
  bool contains(const ViewPose& q, double pos_tol, double yaw_tol) const {
    const double p2 = pos_tol * pos_tol;
    for (const ViewPose& v : poses_) {
      if ((v.position - q.position).squaredNorm() > p2) continue;
      if (std::abs(yaw_diff(v.yaw, q.yaw)) <= yaw_tol &&
          std::abs(v.pitch - q.pitch) <= yaw_tol)
        return true;
    }
    return false;
  }

 private:
  std::vector<ViewPose> poses_;
};

}  // namespace nbv
