#pragma once

// Ray-cast synthetic world with exact ground truth: textured planes, walls and
// boxes; an articulated two-segment trajectory; LiDAR sweeps; and a prior
// provider that fakes scale-ambiguous depth and noisy normals.
//
// World frame is z-up. LiDAR frames are x forward, y left, z up.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "articugeo/calib_icp.hpp"
#include "articugeo/grid.hpp"
#include "articugeo/rig.hpp"

namespace articugeo {

/// Solid texture: base + sum_k amplitude_k * sin(2 pi wavevector_k . X + phase_k),
/// evaluated at world points, so it is continuous across primitives that share it.
struct Grating {
  Eigen::Vector3d wavevector = Eigen::Vector3d::Zero();  // cycles per meter
  double phase = 0.0;
  Eigen::Vector3d amplitude = Eigen::Vector3d::Zero();  // per RGB channel
};

struct Texture {
  Eigen::Vector3d base{0.5, 0.5, 0.5};
  std::vector<Grating> gratings;

  Eigen::Vector3d color(const Eigen::Vector3d& x) const;
  /// Every channel stays inside [0, 1] at every point.
  bool is_valid() const;
};

/// Three long-wavelength gratings per channel; smooth enough that bilinear
/// resampling at the default raster size is near exact.
Texture default_texture();

/// Horizontal plane z = height facing up.
struct GroundPlane {
  double height = 0.0;
  Texture texture = default_texture();
};

/// Vertical plane through (point.x, point.y) with horizontal unit normal,
/// spanning z_min..z_max. Infinite along its horizontal extent.
struct Wall {
  Eigen::Vector2d point = Eigen::Vector2d::Zero();
  Eigen::Vector2d normal{1.0, 0.0};
  double z_min = 0.0;
  double z_max = 30.0;
  Texture texture = default_texture();
};

/// Axis-aligned box.
struct Box {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Ones();
  Texture texture = default_texture();
};

/// Interior of a rounded box: the points within `radius` of the inner box
/// [min + radius, max - radius]. Flat faces meet through cylindrical and
/// spherical fillets, so the surface is C1 everywhere. Seen from inside; the
/// flat bottom face counts as ground.
struct RoundedRoom {
  Eigen::Vector3d min{-13.0, -9.0, 0.0};
  Eigen::Vector3d max{13.0, 9.0, 8.0};
  double radius = 1.2;
  Texture texture = default_texture();

  bool contains(const Eigen::Vector3d& x) const;
};

struct Scene {
  std::optional<GroundPlane> ground;
  std::optional<RoundedRoom> room;
  std::vector<Wall> walls;
  std::vector<Box> boxes;
  /// Hits farther than this along the ray are treated as misses (meters).
  double max_range = 200.0;

  /// Throws kInvalidArgument: invalid textures, non-unit wall normals, empty or
  /// intersecting boxes, boxes below the ground.
  void validate() const;
};

struct Hit {
  double t = 0.0;  // ray parameter
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();  // unit, world frame, unoriented
  const Texture* texture = nullptr;
  bool ground = false;
};

/// Closest hit with 0 < t and |t * dir| <= max_range. Ties go to the earlier
/// primitive (ground, room, walls, then boxes).
std::optional<Hit> intersect(const Scene& scene, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir);

/// Convex room: ground at z = 0 and four inward-facing walls at x = +-half_x,
/// y = +-half_y, wall_height tall.
Scene room_scene(double half_x = 20.0, double half_y = 14.0, double wall_height = 40.0);
Scene ground_scene();
/// A RoundedRoom with default extents and nothing else; bounded depth and no
/// creases.
Scene smooth_room_scene();

struct HingeGeometry {
  /// Front LiDAR to hinge, and hinge to rear LiDAR, along each vehicle's -x.
  double front_arm = 2.5;
  double rear_arm = 2.5;

  /// T_{L_r L_f} for articulation angle phi (yaw of rear relative to front).
  SE3Transform rear_to_front(double phi) const;
};

struct Trajectory {
  /// World <- front LiDAR, per frame.
  std::vector<SE3Transform> front_poses;
  /// Rear yaw relative to the front vehicle, radians, per frame.
  std::vector<double> articulation;
  HingeGeometry hinge;

  int frames() const { return static_cast<int>(front_poses.size()); }
  SE3Transform front_pose(int frame) const;
  SE3Transform rear_pose(int frame) const;
  SE3Transform lidar_pose(Vehicle v, int frame) const {
    return v == Vehicle::kFront ? front_pose(frame) : rear_pose(frame);
  }
  /// T_{L_r L_f} at a frame.
  SE3Transform cross_vehicle(int frame) const;

  /// Throws kInvalidArgument: size mismatch, |angle| > pi/2, invalid poses,
  /// per-frame jumps above 10 m or 45 degrees.
  void validate() const;
};

/// Planar drive: constant speed and yaw rate, articulation ramping linearly
/// from `articulation_start` by `articulation_swing` over the sequence.
struct TrajectorySpec {
  int frames = 10;
  double speed = 0.5;      // meters per frame
  double yaw_rate = 0.02;  // radians per frame
  double start_x = -2.0;
  double start_y = 0.0;
  double start_yaw = 0.0;
  double lidar_height = 2.0;
  double articulation_start = -10.0 * M_PI / 180.0;
  double articulation_swing = 20.0 * M_PI / 180.0;
  HingeGeometry hinge;
};

Trajectory make_trajectory(const TrajectorySpec& spec);

struct ArticulatedMotion {
  SE3Transform front;     // L_f(t) -> L_f(tau)
  SE3Transform rear;      // L_r(t) -> L_r(tau)
  SE3Transform cross_t;   // T_{L_r L_f} at t
  SE3Transform cross_tau; // T_{L_r L_f} at tau
};

/// Throws kOutOfRange for frames outside the trajectory.
ArticulatedMotion articulated_motion(const Trajectory& traj, int t, int tau);

/// Rig state of frame `tau` as seen from target frame `t`.
RigState rig_state(const Trajectory& traj, int t, int tau);

struct LidarPattern {
  int n_azimuth = 1800;
  std::vector<double> elevations_deg;  // empty = 32 beams, -25..+15 degrees
  /// Azimuth window in degrees (LiDAR frame, counter-clockwise from +x).
  double azimuth_min_deg = -180.0;
  double azimuth_max_deg = 180.0;
  /// Uniform per-sample elevation/azimuth offsets within one beam/step spacing.
  /// Two scanners on identical grids trace rings whose mismatch biases
  /// point-to-point registration; jitter breaks that regularity.
  bool jitter = true;

  std::vector<double> elevations() const;
  bool is_valid() const;
};

/// Beams from the LiDAR origin; points in the LiDAR frame with Gaussian range
/// noise. Misses are omitted. Same inputs and seed give identical clouds.
PointCloud sample_lidar(const Scene& scene, const SE3Transform& lidar_pose, const LidarPattern& pattern,
                        double noise_sigma, std::uint64_t seed);

struct CameraRender {
  ImageBuffer image;
  DepthMap depth;
  NormalMap normals;  // camera frame, toward the camera
  PixelMask ground;
};

struct FrameRender {
  int frame = 0;
  std::array<CameraRender, kNumCameras> cameras;
  std::optional<PointCloud> lidar_front;
  std::optional<PointCloud> lidar_rear;
};

struct RenderOptions {
  bool lidar = false;
  LidarPattern pattern;
  double lidar_noise = 0.0;
  std::uint64_t seed = 0;
};

CameraRender render_camera(const Scene& scene, const CameraModel& cam, const SE3Transform& camera_to_world);

/// Renders every camera of the rig at `frame`. Throws kOutOfRange.
FrameRender render(const Scene& scene, const RigConfig& rig, const Trajectory& traj, int frame,
                   const RenderOptions& opts = {});

struct Priors {
  DepthMap depth;
  NormalMap normals;
};

/// Pseudo depth = scale * GT depth. Pseudo normals = GT normals rotated by
/// exactly normal_noise_deg about a random axis perpendicular to each normal.
/// The random stream is keyed by (seed, stream).
Priors prior_provider(const CameraRender& gt, double scale, double normal_noise_deg, std::uint64_t seed,
                      std::uint64_t stream = 0);

/// Deterministic 64-bit mixing of a seed with stream identifiers.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

}  // namespace articugeo
