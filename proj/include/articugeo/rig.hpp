#pragma once

// The articulated two-segment rig: ten cameras, two LiDAR frames, warping
// contexts and the per-context transform from target camera to source camera.
//
// Extrinsic convention: CameraModel::extrinsic_to_lidar (written E below) maps
// camera-frame points into the owning vehicle's LiDAR frame. Target-to-source
// transforms are therefore
//   within-vehicle spatial:  E_j^{-1} E_i
//   cross-vehicle spatial:   E_j^{-1} T_{L_i L_j} E_i
// and a camera's motion is E^{-1} J E for a vehicle joint motion J.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "articugeo/geometry.hpp"

namespace articugeo {

inline constexpr int kNumCameras = 10;

enum class Vehicle { kFront, kRear };

const char* to_string(Vehicle v);
Vehicle parse_vehicle(const std::string& s);

/// "C0".."C9" <-> 0..9.
std::string camera_name(int cam);
int parse_camera(const std::string& s);

/// Unordered camera pair as listed; losses use both directions.
using CameraPair = std::pair<int, int>;

/// Built-in cross-vehicle pair table. type 0: no intermediate view between the
/// two cameras, type 1: one, type 2: two.
const std::vector<CameraPair>& cv_pairs(int type);

struct RigConfig {
  std::array<CameraModel, kNumCameras> cameras{};
  std::array<Vehicle, kNumCameras> vehicles{};
  /// Measured mounting height over flat ground, meters.
  std::array<double, kNumCameras> camera_heights_gt{};
  /// Optional replacements for the built-in cross-vehicle pair table.
  std::array<std::optional<std::vector<CameraPair>>, 3> cv_pairs_override{};
  /// Optional replacement for the derived within-vehicle pairs.
  std::optional<std::vector<CameraPair>> wv_pairs_override;

  Vehicle vehicle_of(int cam) const;
  std::vector<int> cameras_on(Vehicle v) const;

  /// Throws kInvalidArgument on broken invariants: camera validity, the
  /// C0..C4 rear / C5..C9 front partition, pair membership.
  void validate() const;

  const std::vector<CameraPair>& cross_vehicle_pairs(int type) const;
  /// Same-vehicle pairs whose optical axes are closer than the horizontal field
  /// of view, unless overridden.
  std::vector<CameraPair> within_vehicle_pairs() const;

  /// Cross-vehicle pairs whose optical axes (straight rig) are at least one
  /// horizontal field of view apart. Warnings only.
  std::vector<std::string> overlap_warnings() const;
};

/// Optical axis of a camera in its LiDAR frame.
Eigen::Vector3d optical_axis(const CameraModel& cam);
double horizontal_fov(const CameraModel& cam);

/// Layout knobs for the built-in ten-camera rig.
struct RigLayout {
  int width = 320;
  int height = 192;
  double horizontal_fov_deg = 100.0;
  /// Camera mounting height below the LiDAR origin (meters, positive = lower).
  double camera_drop = 0.5;
  double lidar_height = 2.0;
};

/// Ten level cameras per the layout: front vehicle C5 forward, C9/C6 left/right,
/// C8/C7 rear-left/rear-right; rear vehicle C0 backward, C1/C4 left/right,
/// C2/C3 front-left/front-right.
RigConfig default_rig(const RigLayout& layout = {});

/// Camera -> vehicle rotation for a level camera yawed by `yaw` (left positive)
/// and pitched down by `pitch`, vehicle frame x forward, y left, z up.
Eigen::Matrix3d camera_mount_rotation(double yaw, double pitch = 0.0);

enum class ContextKind { kTemporal, kWvSpatial, kCvSpatial, kWvSpatioTemporal, kCvSpatioTemporal };

const char* to_string(ContextKind k);

struct ContextSpec {
  ContextKind kind = ContextKind::kTemporal;
  /// Cross-vehicle type 0..2 for CV kinds; ignored otherwise.
  int cv_type = 0;
  int target_cam = 0;
  int source_cam = 0;
  /// tau - t: -1 or +1 for temporal kinds, 0 for spatial ones.
  int source_offset = 0;

  /// Throws kInvalidArgument when the kind/camera/time combination is inconsistent.
  void validate(const RigConfig& rig) const;
};

/// Rig state at one timestamp.
struct RigState {
  int timestamp = 0;
  /// T_{L_r L_f}: rear-LiDAR coordinates -> front-LiDAR coordinates.
  std::optional<SE3Transform> cross_vehicle;
  /// Joint motion of each vehicle's LiDAR from the target time t to this
  /// state's time: maps L(t) coordinates to L(this) coordinates.
  std::optional<SE3Transform> joint_motion_front;
  std::optional<SE3Transform> joint_motion_rear;

  const std::optional<SE3Transform>& joint_motion(Vehicle v) const {
    return v == Vehicle::kFront ? joint_motion_front : joint_motion_rear;
  }
};

/// E^{-1} J E: the camera motion induced by joint motion J.
SE3Transform camera_pose_from_joint(const CameraModel& cam, const SE3Transform& joint);

/// T_{L_i L_j} for the vehicles of cameras i and j, from T_{L_r L_f}.
SE3Transform lidar_to_lidar(Vehicle from, Vehicle to, const SE3Transform& cross_rear_to_front);

/// Target-camera (time t) to source-camera (time tau) transform for `ctx`.
/// Joint motions come from `state_tau`, the cross-vehicle transform from
/// `state_t`. Throws kIncompleteState when required data is missing.
SE3Transform context_transform(const ContextSpec& ctx, const RigConfig& rig,
                               const RigState& state_t, const RigState& state_tau);

}  // namespace articugeo
