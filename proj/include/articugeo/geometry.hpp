#pragma once

// Pinhole camera and rigid-body primitives.
//
// Camera frame convention: x right, y down, z forward. Every module follows it.

#include <array>
#include <span>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "articugeo/error.hpp"
#include "articugeo/scalar.hpp"

namespace articugeo {

template <class S>
using Vec3 = Eigen::Matrix<S, 3, 1>;

using Point3 = Eigen::Vector3d;

/// Continuous image coordinates. Integer values are pixel centers.
template <class S>
struct PixelT {
  S u{0};
  S v{0};
};
using Pixel = PixelT<double>;

/// Rigid transform x -> R x + t.
class SE3Transform {
 public:
  SE3Transform() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}
  SE3Transform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
      : rotation_(rotation), translation_(translation) {}

  static SE3Transform identity() { return {}; }
  static SE3Transform from_translation(const Eigen::Vector3d& t) {
    return {Eigen::Matrix3d::Identity(), t};
  }
  static SE3Transform from_axis_angle(const Eigen::Vector3d& axis, double angle,
                                      const Eigen::Vector3d& t = Eigen::Vector3d::Zero()) {
    return {Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(), t};
  }
  /// 16 values, row-major 4x4 homogeneous matrix. The last row is ignored.
  static SE3Transform from_row_major(std::span<const double, 16> m);

  std::array<double, 16> to_row_major() const;
  Eigen::Matrix4d matrix() const;

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  SE3Transform inverse() const {
    Eigen::Matrix3d rt = rotation_.transpose();
    return {rt, -(rt * translation_)};
  }

  /// (a * b)(P) = a(b(P)).
  SE3Transform operator*(const SE3Transform& b) const {
    return {rotation_ * b.rotation_, rotation_ * b.translation_ + translation_};
  }

  template <class S>
  Vec3<S> apply(const Vec3<S>& p) const {
    return rotation_.cast<S>() * p + translation_.cast<S>();
  }
  Point3 operator*(const Point3& p) const { return rotation_ * p + translation_; }

  /// R^T R = I and det R = +1 within `tol`, all entries finite.
  bool is_valid(double tol = 1e-9) const;

  /// Projects the rotation back onto SO(3) (polar decomposition).
  SE3Transform orthonormalized() const;

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

inline SE3Transform compose(const SE3Transform& a, const SE3Transform& b) { return a * b; }
inline SE3Transform inverse(const SE3Transform& t) { return t.inverse(); }

/// ||R_a^T R_b - I||_F.
double rotation_error_frobenius(const SE3Transform& a, const SE3Transform& b);

/// Geodesic angle between the rotations, radians.
double rotation_angle_between(const SE3Transform& a, const SE3Transform& b);

/// Pinhole intrinsics plus the camera -> LiDAR extrinsic of the owning vehicle.
/// `extrinsic_to_lidar` maps camera-frame points into the LiDAR frame.
struct CameraModel {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;
  SE3Transform extrinsic_to_lidar;

  bool is_valid() const {
    return fx > 0 && fy > 0 && width > 0 && height > 0 && cx >= 0 && cx < width && cy >= 0 &&
           cy < height && extrinsic_to_lidar.is_valid();
  }
  bool in_bounds(double u, double v) const {
    return u >= 0.0 && v >= 0.0 && u <= width - 1 && v <= height - 1;
  }
  /// Unit-depth ray K^{-1} (u, v, 1).
  template <class S>
  Vec3<S> ray(const S& u, const S& v) const {
    return Vec3<S>((u - cx) / fx, (v - cy) / fy, S(1.0));
  }
};

/// D * K^{-1} (u, v, 1). Throws kInvalidDepth unless depth > 0.
template <class S>
Vec3<S> unproject(const PixelT<S>& p, const S& depth, const CameraModel& cam) {
  require(value_of(depth) > 0.0, ErrorCode::kInvalidDepth, "unproject: depth must be positive");
  return cam.ray(p.u, p.v) * depth;
}

template <class S>
struct Projection {
  PixelT<S> pixel;
  S depth;
};

/// (fx x/z + cx, fy y/z + cy) and z. Throws kBehindCamera unless z > 0.
template <class S>
Projection<S> project(const Vec3<S>& point, const CameraModel& cam) {
  require(value_of(point.z()) > 0.0, ErrorCode::kBehindCamera, "project: point behind camera");
  const S inv_z = S(1.0) / point.z();
  return {{point.x() * inv_z * cam.fx + cam.cx, point.y() * inv_z * cam.fy + cam.cy}, point.z()};
}

}  // namespace articugeo
