#include "articugeo/rig.hpp"

#include <algorithm>
#include <cmath>

namespace articugeo {

namespace {

const std::array<std::vector<CameraPair>, 3>& builtin_cv_pairs() {
  static const std::array<std::vector<CameraPair>, 3> pairs = {{
      {{8, 2}, {7, 3}},
      {{9, 2}, {6, 3}, {8, 1}, {7, 4}},
      {{5, 2}, {5, 3}, {9, 1}, {6, 4}, {8, 0}, {7, 0}},
  }};
  return pairs;
}

void require_camera(int cam) {
  require(cam >= 0 && cam < kNumCameras, ErrorCode::kInvalidArgument,
          "camera index out of range: " + std::to_string(cam));
}

}  // namespace

const char* to_string(Vehicle v) { return v == Vehicle::kFront ? "front" : "rear"; }

Vehicle parse_vehicle(const std::string& s) {
  if (s == "front") return Vehicle::kFront;
  if (s == "rear") return Vehicle::kRear;
  throw Error(ErrorCode::kUnknownVehicle, "unknown vehicle '" + s + "'");
}

std::string camera_name(int cam) { return "C" + std::to_string(cam); }

int parse_camera(const std::string& s) {
  if (s.size() == 2 && (s[0] == 'C' || s[0] == 'c') && s[1] >= '0' && s[1] <= '9') return s[1] - '0';
  throw Error(ErrorCode::kParse, "bad camera id '" + s + "' (expected C0..C9)");
}

const std::vector<CameraPair>& cv_pairs(int type) {
  require(type >= 0 && type <= 2, ErrorCode::kInvalidArgument, "cv type must be 0, 1 or 2");
  return builtin_cv_pairs()[type];
}

Vehicle RigConfig::vehicle_of(int cam) const {
  require_camera(cam);
  return vehicles[cam];
}

std::vector<int> RigConfig::cameras_on(Vehicle v) const {
  std::vector<int> out;
  for (int c = 0; c < kNumCameras; ++c) {
    if (vehicles[c] == v) out.push_back(c);
  }
  return out;
}

void RigConfig::validate() const {
  for (int c = 0; c < kNumCameras; ++c) {
    require(cameras[c].is_valid(), ErrorCode::kInvalidArgument,
            "rig: camera " + camera_name(c) + " has invalid intrinsics or extrinsic");
    const Vehicle expected = c >= 5 ? Vehicle::kFront : Vehicle::kRear;
    require(vehicles[c] == expected, ErrorCode::kInvalidArgument,
            "rig: " + camera_name(c) + " must be on the " + to_string(expected) + " vehicle");
    require(std::isfinite(camera_heights_gt[c]), ErrorCode::kInvalidArgument,
            "rig: non-finite height_gt for " + camera_name(c));
  }
  for (int t = 0; t < 3; ++t) {
    for (const auto& [a, b] : cross_vehicle_pairs(t)) {
      require_camera(a);
      require_camera(b);
      require(vehicles[a] != vehicles[b], ErrorCode::kInvalidArgument,
              "rig: cross-vehicle pair " + camera_name(a) + "&" + camera_name(b) +
                  " lies on one vehicle");
    }
  }
  if (wv_pairs_override) {
    for (const auto& [a, b] : *wv_pairs_override) {
      require_camera(a);
      require_camera(b);
      require(a != b && vehicles[a] == vehicles[b], ErrorCode::kInvalidArgument,
              "rig: within-vehicle pair " + camera_name(a) + "&" + camera_name(b) +
                  " spans vehicles");
    }
  }
}

const std::vector<CameraPair>& RigConfig::cross_vehicle_pairs(int type) const {
  require(type >= 0 && type <= 2, ErrorCode::kInvalidArgument, "cv type must be 0, 1 or 2");
  if (cv_pairs_override[type]) return *cv_pairs_override[type];
  return cv_pairs(type);
}

Eigen::Vector3d optical_axis(const CameraModel& cam) {
  return cam.extrinsic_to_lidar.rotation().col(2);
}

double horizontal_fov(const CameraModel& cam) {
  return 2.0 * std::atan(0.5 * cam.width / cam.fx);
}

std::vector<CameraPair> RigConfig::within_vehicle_pairs() const {
  if (wv_pairs_override) return *wv_pairs_override;
  std::vector<CameraPair> out;
  for (int a = 0; a < kNumCameras; ++a) {
    for (int b = a + 1; b < kNumCameras; ++b) {
      if (vehicles[a] != vehicles[b]) continue;
      const double angle = std::acos(std::clamp(
          optical_axis(cameras[a]).dot(optical_axis(cameras[b])), -1.0, 1.0));
      const double fov = 0.5 * (horizontal_fov(cameras[a]) + horizontal_fov(cameras[b]));
      if (angle < fov - 1e-9) out.emplace_back(a, b);
    }
  }
  return out;
}

std::vector<std::string> RigConfig::overlap_warnings() const {
  std::vector<std::string> out;
  for (int t = 0; t < 3; ++t) {
    for (const auto& [a, b] : cross_vehicle_pairs(t)) {
      const double angle = std::acos(std::clamp(
          optical_axis(cameras[a]).dot(optical_axis(cameras[b])), -1.0, 1.0));
      const double fov = 0.5 * (horizontal_fov(cameras[a]) + horizontal_fov(cameras[b]));
      if (angle >= fov) {
        out.push_back("type-" + std::to_string(t) + " pair " + camera_name(a) + "&" +
                      camera_name(b) + ": optical axes " +
                      std::to_string(angle * 180.0 / M_PI) +
                      " deg apart, little overlap expected on a straight rig");
      }
    }
  }
  return out;
}

Eigen::Matrix3d camera_mount_rotation(double yaw, double pitch) {
  Eigen::Matrix3d base;
  // Columns: camera x (right), y (down), z (forward) in vehicle coordinates.
  base << 0, 0, 1,
         -1, 0, 0,
          0, -1, 0;
  return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()))
             .toRotationMatrix() *
         base;
}

RigConfig default_rig(const RigLayout& layout) {
  struct Mount {
    double x, y, yaw_deg;
  };
  // Indexed by camera id; positions in the owning vehicle's LiDAR frame.
  static constexpr std::array<Mount, kNumCameras> kMounts = {{
      {-2.0, 0.0, 180.0},   // C0 rear
      {-0.5, 1.0, 90.0},    // C1 rear vehicle, left
      {2.0, 0.9, 45.0},     // C2 rear vehicle, front-left
      {2.0, -0.9, -45.0},   // C3 rear vehicle, front-right
      {-0.5, -1.0, -90.0},  // C4 rear vehicle, right
      {2.0, 0.0, 0.0},      // C5 front
      {0.5, -1.0, -90.0},   // C6 front vehicle, right
      {-2.0, -0.9, -135.0}, // C7 front vehicle, rear-right
      {-2.0, 0.9, 135.0},   // C8 front vehicle, rear-left
      {0.5, 1.0, 90.0},     // C9 front vehicle, left
  }};
  RigConfig rig;
  const double fx = 0.5 * layout.width / std::tan(0.5 * layout.horizontal_fov_deg * M_PI / 180.0);
  for (int c = 0; c < kNumCameras; ++c) {
    CameraModel cam;
    cam.fx = fx;
    cam.fy = fx;
    cam.cx = 0.5 * (layout.width - 1);
    cam.cy = 0.5 * (layout.height - 1);
    cam.width = layout.width;
    cam.height = layout.height;
    const Mount& m = kMounts[c];
    cam.extrinsic_to_lidar = SE3Transform(camera_mount_rotation(m.yaw_deg * M_PI / 180.0),
                                          Eigen::Vector3d(m.x, m.y, -layout.camera_drop));
    rig.cameras[c] = cam;
    rig.vehicles[c] = c >= 5 ? Vehicle::kFront : Vehicle::kRear;
    rig.camera_heights_gt[c] = layout.lidar_height - layout.camera_drop;
  }
  return rig;
}

const char* to_string(ContextKind k) {
  switch (k) {
    case ContextKind::kTemporal: return "temporal";
    case ContextKind::kWvSpatial: return "wv-spatial";
    case ContextKind::kCvSpatial: return "cv-spatial";
    case ContextKind::kWvSpatioTemporal: return "wv-spatiotemporal";
    case ContextKind::kCvSpatioTemporal: return "cv-spatiotemporal";
  }
  return "unknown";
}

void ContextSpec::validate(const RigConfig& rig) const {
  require_camera(target_cam);
  require_camera(source_cam);
  const bool temporal_time = source_offset == -1 || source_offset == 1;
  const bool same_vehicle = rig.vehicle_of(target_cam) == rig.vehicle_of(source_cam);
  switch (kind) {
    case ContextKind::kTemporal:
      require(target_cam == source_cam && temporal_time, ErrorCode::kInvalidArgument,
              "temporal context needs one camera and tau = t +- 1");
      break;
    case ContextKind::kWvSpatial:
      require(source_offset == 0 && same_vehicle && target_cam != source_cam,
              ErrorCode::kInvalidArgument,
              "within-vehicle spatial context needs two cameras on one vehicle at time t");
      break;
    case ContextKind::kCvSpatial:
      require(source_offset == 0 && !same_vehicle, ErrorCode::kInvalidArgument,
              "cross-vehicle spatial context needs cameras on different vehicles at time t");
      break;
    case ContextKind::kWvSpatioTemporal:
      require(temporal_time && same_vehicle && target_cam != source_cam,
              ErrorCode::kInvalidArgument,
              "within-vehicle spatial-temporal context needs two cameras on one vehicle and tau = t +- 1");
      break;
    case ContextKind::kCvSpatioTemporal:
      require(temporal_time && !same_vehicle, ErrorCode::kInvalidArgument,
              "cross-vehicle spatial-temporal context needs cameras on different vehicles and tau = t +- 1");
      break;
  }
  if (kind == ContextKind::kCvSpatial || kind == ContextKind::kCvSpatioTemporal) {
    require(cv_type >= 0 && cv_type <= 2, ErrorCode::kInvalidArgument, "cv type must be 0, 1 or 2");
  }
}

SE3Transform camera_pose_from_joint(const CameraModel& cam, const SE3Transform& joint) {
  const SE3Transform& e = cam.extrinsic_to_lidar;
  return e.inverse() * joint * e;
}

SE3Transform lidar_to_lidar(Vehicle from, Vehicle to, const SE3Transform& cross_rear_to_front) {
  if (from == to) return SE3Transform::identity();
  return from == Vehicle::kRear ? cross_rear_to_front : cross_rear_to_front.inverse();
}

namespace {

SE3Transform temporal_transform(int cam, const RigConfig& rig, const RigState& state_tau) {
  const Vehicle v = rig.vehicle_of(cam);
  const auto& joint = state_tau.joint_motion(v);
  require(joint.has_value(), ErrorCode::kIncompleteState,
          std::string("context_transform: missing ") + to_string(v) + " joint motion");
  return camera_pose_from_joint(rig.cameras[cam], *joint);
}

SE3Transform spatial_transform(int target, int source, const RigConfig& rig,
                               const RigState& state_t, bool cross_vehicle) {
  const SE3Transform& ei = rig.cameras[target].extrinsic_to_lidar;
  const SE3Transform& ej = rig.cameras[source].extrinsic_to_lidar;
  if (!cross_vehicle) return ej.inverse() * ei;
  require(state_t.cross_vehicle.has_value(), ErrorCode::kIncompleteState,
          "context_transform: missing cross-vehicle transform");
  const SE3Transform lij =
      lidar_to_lidar(rig.vehicle_of(target), rig.vehicle_of(source), *state_t.cross_vehicle);
  return ej.inverse() * lij * ei;
}

}  // namespace

SE3Transform context_transform(const ContextSpec& ctx, const RigConfig& rig,
                               const RigState& state_t, const RigState& state_tau) {
  ctx.validate(rig);
  switch (ctx.kind) {
    case ContextKind::kTemporal:
      return temporal_transform(ctx.target_cam, rig, state_tau);
    case ContextKind::kWvSpatial:
      return spatial_transform(ctx.target_cam, ctx.source_cam, rig, state_t, false);
    case ContextKind::kCvSpatial:
      return spatial_transform(ctx.target_cam, ctx.source_cam, rig, state_t, true);
    case ContextKind::kWvSpatioTemporal:
      return temporal_transform(ctx.source_cam, rig, state_tau) *
             spatial_transform(ctx.target_cam, ctx.source_cam, rig, state_t, false);
    case ContextKind::kCvSpatioTemporal:
      return temporal_transform(ctx.source_cam, rig, state_tau) *
             spatial_transform(ctx.target_cam, ctx.source_cam, rig, state_t, true);
  }
  throw Error(ErrorCode::kInvalidArgument, "context_transform: unknown kind");
}

}  // namespace articugeo
