#include "articugeo/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace articugeo {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDepth: return "invalid-depth";
    case ErrorCode::kBehindCamera: return "behind-camera";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kIncompleteState: return "incomplete-state";
    case ErrorCode::kEmptyContexts: return "empty-contexts";
    case ErrorCode::kMissingPriors: return "missing-priors";
    case ErrorCode::kDegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::kEmptyOverlap: return "empty-overlap";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kEmptyEvaluation: return "empty-evaluation";
    case ErrorCode::kUnknownVehicle: return "unknown-vehicle";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kUnknownSuite: return "unknown-suite";
  }
  return "unknown";
}

SE3Transform SE3Transform::from_row_major(std::span<const double, 16> m) {
  Eigen::Matrix3d r;
  Eigen::Vector3d t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r(i, j) = m[4 * i + j];
    t(i) = m[4 * i + 3];
  }
  return {r, t};
}

std::array<double, 16> SE3Transform::to_row_major() const {
  std::array<double, 16> out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[4 * i + j] = rotation_(i, j);
    out[4 * i + 3] = translation_(i);
  }
  out[15] = 1.0;
  return out;
}

Eigen::Matrix4d SE3Transform::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

bool SE3Transform::is_valid(double tol) const {
  if (!rotation_.allFinite() || !translation_.allFinite()) return false;
  const double ortho = (rotation_.transpose() * rotation_ - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(rotation_.determinant() - 1.0) <= tol;
}

SE3Transform SE3Transform::orthonormalized() const {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(rotation_, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d& v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0) u.col(2) *= -1.0;
  return {u * v.transpose(), translation_};
}

double rotation_error_frobenius(const SE3Transform& a, const SE3Transform& b) {
  return (a.rotation().transpose() * b.rotation() - Eigen::Matrix3d::Identity()).norm();
}

double rotation_angle_between(const SE3Transform& a, const SE3Transform& b) {
  const Eigen::Matrix3d r = a.rotation().transpose() * b.rotation();
  const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace articugeo
