#pragma once

// Shared helpers for the verification suites.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "articugeo/synth_world.hpp"
#include "articugeo/verify.hpp"

namespace articugeo::verify_detail {

inline std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

inline std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

class SuiteBuilder {
 public:
  explicit SuiteBuilder(std::string name) { result_.suite = std::move(name); }

  void add(const std::string& name, bool passed, double value, double tol, const std::string& detail = "") {
    result_.checks.push_back({name, passed, value, tol, detail});
  }
  /// value <= tol, NaN fails.
  void at_most(const std::string& name, double value, double tol, const std::string& detail = "") {
    add(name, std::isfinite(value) && value <= tol, value, tol, detail);
  }
  void at_least(const std::string& name, double value, double tol, const std::string& detail = "") {
    add(name, std::isfinite(value) && value >= tol, value, tol, detail);
  }
  /// Boolean property; value counts violations.
  void holds(const std::string& name, std::size_t violations, const std::string& detail = "") {
    add(name, violations == 0, static_cast<double>(violations), 0.0, detail);
  }

  /// Runs `fn`; an exception turns into a failed check named `name`.
  template <class Fn>
  void guard(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(name, false, NAN, 0.0, std::string("threw: ") + e.what());
    }
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::Vector3d random_unit(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = {n(rng), n(rng), n(rng)};
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline SE3Transform random_transform(Rng& rng, double max_angle, double max_trans) {
  const Eigen::Vector3d axis = random_unit(rng);
  const Eigen::Vector3d t(uniform(rng, -max_trans, max_trans), uniform(rng, -max_trans, max_trans),
                          uniform(rng, -max_trans, max_trans));
  return SE3Transform::from_axis_angle(axis, uniform(rng, 0.0, max_angle), t);
}

/// Camera of the default layout at a reduced raster, extrinsic = identity.
inline CameraModel test_camera(int width, int height, double fov_deg = 100.0) {
  RigLayout layout;
  layout.width = width;
  layout.height = height;
  layout.horizontal_fov_deg = fov_deg;
  CameraModel cam = default_rig(layout).cameras[5];
  cam.extrinsic_to_lidar = SE3Transform();
  return cam;
}

/// Camera -> world for a camera at `pos`, yawed left by `yaw`, pitched down by
/// `pitch` (world z-up, x forward).
inline SE3Transform camera_pose(const Eigen::Vector3d& pos, double yaw, double pitch) {
  return {camera_mount_rotation(yaw, pitch), pos};
}

constexpr double kDeg = M_PI / 180.0;

}  // namespace articugeo::verify_detail
