#pragma once

#include "nbv/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nbv {

/// Depth sensor with rays on a uniform angular grid: pixel (u, v) looks along
/// azimuth yaw - h_fov/2 + (u + 0.5) * h_fov / width and elevation
/// pitch + v_fov/2 - (v + 0.5) * v_fov / height (row 0 is the top of the
/// image). Ranges are Euclidean distances along the ray, valid in
/// [min_range, max_range].
struct CameraModel {
  double h_fov = rad(86.0);
  double v_fov = rad(57.0);
  double min_range = 0.3;
  double max_range = 1.5;
  int width = 160;
  int height = 120;

  void validate() const {
    if (!(h_fov > 0.0 && h_fov <= 2.0 * kPi) || !(v_fov > 0.0 && v_fov < kPi))
      throw std::invalid_argument("camera: field of view out of range");
    if (!(0.0 <= min_range && min_range < max_range))
      throw std::invalid_argument("camera: require 0 <= min_range < max_range");
    if (width < 2 || height < 2)
      throw std::invalid_argument("camera: image must be at least 2x2");
  }

  double azimuth_of_col(int u) const { return -0.5 * h_fov + (u + 0.5) * h_fov / width; }
  double elevation_of_row(int v) const { return 0.5 * v_fov - (v + 0.5) * v_fov / height; }
};

/// Row-major range image. A pixel holds either a finite range inside
/// [min_range, max_range], or one of two non-finite sentinels: NaN where the
/// first surface is closer than min_range (nothing usable), +inf where no
/// surface exists within max_range (free space out to max_range).
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<float> ranges;

  static constexpr float no_return() { return std::numeric_limits<float>::quiet_NaN(); }
  static constexpr float beyond_range() { return std::numeric_limits<float>::infinity(); }

  static bool is_hit(float r) { return std::isfinite(r); }
  static bool is_beyond_range(float r) { return std::isinf(r); }

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), ranges(static_cast<size_t>(w) * h, no_return()) {}

  float& at(int u, int v) { return ranges[static_cast<size_t>(v) * width + u]; }
  float at(int u, int v) const { return ranges[static_cast<size_t>(v) * width + u]; }
};

}  // namespace nbv
