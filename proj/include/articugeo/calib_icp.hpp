#pragma once

// Cross-vehicle LiDAR extrinsics by point-to-point ICP, and point cloud to
// image projection.

#include <optional>
#include <string>
#include <vector>

#include "articugeo/geometry.hpp"
#include "articugeo/grid.hpp"

namespace articugeo {

struct PointCloud {
  std::vector<Point3> points;
  std::vector<double> intensities;  // empty or one per point

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

PointCloud transform_cloud(const PointCloud& cloud, const SE3Transform& t);

struct IcpConfig {
  int max_iterations = 50;
  /// Stop once the residual changes by less than this (meters).
  double convergence_eps = 1e-5;
  /// Correspondences farther than this are rejected (meters).
  double max_correspondence_dist = 1.0;
  /// Optional tighter gates, strictly decreasing and below
  /// max_correspondence_dist. Each one restarts the iteration from the previous
  /// result. A tighter gate never raises the truncated residual at a fixed
  /// pose, so the residual stays non-increasing across stages.
  std::vector<double> refine_dists;
  SE3Transform initial_guess;

  bool is_valid() const;
};

struct IcpResult {
  /// Maps source coordinates into target coordinates.
  SE3Transform transform;
  /// Truncated RMS: every source point contributes min(d, gate) to its
  /// nearest target point, gate being the current stage's distance.
  /// Non-increasing over iterations.
  double rms_residual = 0.0;
  /// Summed over all stages.
  int iterations = 0;
  /// Whether the last stage converged before its iteration cap.
  bool converged = false;
  std::size_t inliers = 0;
  /// rms_residual at the start of each stage and after every iteration.
  std::vector<double> residual_history;
};

/// Alternates exact nearest-neighbor correspondences (gated by
/// max_correspondence_dist) with the closed-form SVD alignment.
/// Throws kEmptyOverlap when no correspondence survives the gate and
/// kDegenerateGeometry when the correspondence cross-covariance has rank < 3.
IcpResult icp_register(const PointCloud& source, const PointCloud& target, const IcpConfig& cfg = {});

/// Least-squares rigid transform mapping src[i] onto dst[i] (Kabsch/Umeyama
/// with reflection guard).
SE3Transform align_point_pairs(const std::vector<Point3>& src, const std::vector<Point3>& dst);

/// Z-buffered projection: each pixel keeps the smallest positive z of the
/// points whose projection rounds to it; empty pixels are 0.
DepthMap project_cloud_to_image(const PointCloud& cloud, const SE3Transform& cloud_to_camera,
                                const CameraModel& cam);

/// ASCII PLY: `ply / format ascii 1.0 / element vertex N / property float x|y|z / end_header`.
void write_ply(const std::string& path, const PointCloud& cloud);
PointCloud read_ply(const std::string& path);
std::string format_ply(const PointCloud& cloud);
PointCloud parse_ply(const std::string& text, const std::string& origin);

}  // namespace articugeo
