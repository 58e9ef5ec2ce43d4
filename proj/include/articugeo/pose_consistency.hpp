#pragma once

// Joint-motion bookkeeping, within-vehicle pose distribution and the
// cross-vehicle pose consistency loss.

#include <map>
#include <string>
#include <vector>

#include "articugeo/rig.hpp"

namespace articugeo {

/// A vehicle's joint motion T^{t tau} (LiDAR(t) -> LiDAR(tau) coordinates).
/// `camera_weights` carries the per-camera aggregation weights of the motion
/// estimator as metadata; they do not enter any computation here.
struct JointMotionEstimate {
  Vehicle vehicle = Vehicle::kFront;
  SE3Transform motion;
  std::map<int, double> camera_weights;
};

struct VpcWeights {
  double rotation = 1.0;
  double translation = 1.0;

  bool is_valid() const { return rotation >= 0.0 && translation >= 0.0; }
};

/// T_e = (T_f^{t tau} T_{rf}^t)^{-1} (T_{rf}^tau T_r^{t tau}). Identity when
/// both chains agree on the rear(t) -> front(tau) map.
SE3Transform cross_vehicle_pose_error(const SE3Transform& front_motion,
                                      const SE3Transform& rear_motion,
                                      const SE3Transform& cross_t, const SE3Transform& cross_tau);

/// lambda_R ||R_e - I||_F + lambda_t ||t_e||_2.
double loss_vpc(const SE3Transform& pose_error, const VpcWeights& w = {});

/// Per-camera motion E^{-1} J E for every camera on the estimate's vehicle.
std::map<int, SE3Transform> distribute_pose(const JointMotionEstimate& joint, const RigConfig& rig);

/// One line of a motion file: a vehicle's LiDAR pose in a shared odometry frame
/// at one frame index. Relative motions follow as W_tau^{-1} W_t.
struct MotionRecord {
  int frame = 0;
  Vehicle vehicle = Vehicle::kFront;
  SE3Transform pose;
};

/// `frame_index vehicle m00 m01 ... m33` per line, 16 row-major values.
std::vector<MotionRecord> read_motion_file(const std::string& path);
void write_motion_file(const std::string& path, const std::vector<MotionRecord>& records);
std::string format_motion_records(const std::vector<MotionRecord>& records);
std::vector<MotionRecord> parse_motion_records(const std::string& text, const std::string& origin);

/// W_tau^{-1} W_t: LiDAR(t) coordinates -> LiDAR(tau) coordinates.
SE3Transform relative_motion(const SE3Transform& pose_t, const SE3Transform& pose_tau);

}  // namespace articugeo
