#include "articugeo/pose_consistency.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace articugeo {

SE3Transform cross_vehicle_pose_error(const SE3Transform& front_motion,
                                      const SE3Transform& rear_motion,
                                      const SE3Transform& cross_t, const SE3Transform& cross_tau) {
  return (front_motion * cross_t).inverse() * (cross_tau * rear_motion);
}

double loss_vpc(const SE3Transform& pose_error, const VpcWeights& w) {
  require(w.is_valid(), ErrorCode::kInvalidArgument, "loss_vpc: negative weight");
  const double rot = (pose_error.rotation() - Eigen::Matrix3d::Identity()).norm();
  return w.rotation * rot + w.translation * pose_error.translation().norm();
}

std::map<int, SE3Transform> distribute_pose(const JointMotionEstimate& joint,
                                            const RigConfig& rig) {
  const auto cams = rig.cameras_on(joint.vehicle);
  require(!cams.empty(), ErrorCode::kUnknownVehicle,
          std::string("distribute_pose: no cameras on the ") + to_string(joint.vehicle) + " vehicle");
  std::map<int, SE3Transform> out;
  for (int c : cams) out.emplace(c, camera_pose_from_joint(rig.cameras[c], joint.motion));
  return out;
}

SE3Transform relative_motion(const SE3Transform& pose_t, const SE3Transform& pose_tau) {
  return pose_tau.inverse() * pose_t;
}

std::string format_motion_records(const std::vector<MotionRecord>& records) {
  std::string out;
  char buf[64];
  for (const auto& r : records) {
    out += std::to_string(r.frame);
    out += ' ';
    out += to_string(r.vehicle);
    for (double v : r.pose.to_row_major()) {
      std::snprintf(buf, sizeof(buf), " %.17g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<MotionRecord> parse_motion_records(const std::string& text, const std::string& origin) {
  std::vector<MotionRecord> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    MotionRecord r;
    std::string vehicle;
    std::array<double, 16> m{};
    if (!(ls >> r.frame >> vehicle)) {
      throw Error(ErrorCode::kParse, origin + ":" + std::to_string(lineno) + ": expected 'frame vehicle 16 values'");
    }
    for (double& v : m) {
      if (!(ls >> v)) {
        throw Error(ErrorCode::kParse, origin + ":" + std::to_string(lineno) + ": expected 16 transform values");
      }
    }
    try {
      r.vehicle = parse_vehicle(vehicle);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
    r.pose = SE3Transform::from_row_major(m);
    if (!r.pose.is_valid(1e-6)) {
      throw Error(ErrorCode::kParse, origin + ":" + std::to_string(lineno) + ": rotation is not orthonormal");
    }
    out.push_back(r);
  }
  return out;
}

std::vector<MotionRecord> read_motion_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open motion file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_motion_records(ss.str(), path);
}

void write_motion_file(const std::string& path, const std::vector<MotionRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write motion file " + path);
  out << format_motion_records(records);
}

}  // namespace articugeo
