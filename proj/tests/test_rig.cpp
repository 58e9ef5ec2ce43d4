#include <gtest/gtest.h>

#include "articugeo/rig.hpp"
#include "articugeo/synth_world.hpp"

using namespace articugeo;

namespace {

double max_diff(const SE3Transform& a, const SE3Transform& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

RigState full_state(int ts, const SE3Transform& cross, const SE3Transform& front, const SE3Transform& rear) {
  RigState s;
  s.timestamp = ts;
  s.cross_vehicle = cross;
  s.joint_motion_front = front;
  s.joint_motion_rear = rear;
  return s;
}

}  // namespace

TEST(Rig, CameraNames) {
  for (int c = 0; c < kNumCameras; ++c) EXPECT_EQ(parse_camera(camera_name(c)), c);
  EXPECT_EQ(camera_name(7), "C7");
  EXPECT_THROW(parse_camera("C10"), Error);
  EXPECT_EQ(parse_camera("c3"), 3);
  EXPECT_THROW(parse_camera("X3"), Error);
}

TEST(Rig, CrossVehiclePairTable) {
  const std::vector<CameraPair> t0{{8, 2}, {7, 3}};
  const std::vector<CameraPair> t1{{9, 2}, {6, 3}, {8, 1}, {7, 4}};
  const std::vector<CameraPair> t2{{5, 2}, {5, 3}, {9, 1}, {6, 4}, {8, 0}, {7, 0}};
  EXPECT_EQ(cv_pairs(0), t0);
  EXPECT_EQ(cv_pairs(1), t1);
  EXPECT_EQ(cv_pairs(2), t2);
  EXPECT_THROW(cv_pairs(3), Error);
}

TEST(Rig, DefaultLayout) {
  const RigConfig rig = default_rig();
  EXPECT_NO_THROW(rig.validate());
  for (int c = 0; c < 5; ++c) EXPECT_EQ(rig.vehicle_of(c), Vehicle::kRear);
  for (int c = 5; c < 10; ++c) EXPECT_EQ(rig.vehicle_of(c), Vehicle::kFront);
  EXPECT_EQ(rig.cameras[5].width, 320);
  EXPECT_EQ(rig.cameras[5].height, 192);
  // C5 looks forward, C0 backward.
  EXPECT_GT(optical_axis(rig.cameras[5]).x(), 0.99);
  EXPECT_LT(optical_axis(rig.cameras[0]).x(), -0.99);
  for (const auto& [a, b] : rig.within_vehicle_pairs()) EXPECT_EQ(rig.vehicle_of(a), rig.vehicle_of(b));
}

TEST(Rig, MountRotationAxes) {
  const Eigen::Matrix3d r = camera_mount_rotation(0.0);
  EXPECT_TRUE((r * Eigen::Vector3d::UnitZ()).isApprox(Eigen::Vector3d::UnitX()));
  EXPECT_TRUE((r * Eigen::Vector3d::UnitX()).isApprox(-Eigen::Vector3d::UnitY()));
  EXPECT_TRUE((r * Eigen::Vector3d::UnitY()).isApprox(-Eigen::Vector3d::UnitZ()));
  // Positive pitch tilts the optical axis toward the ground.
  EXPECT_LT((camera_mount_rotation(0.0, 0.2) * Eigen::Vector3d::UnitZ()).z(), 0.0);
  // Positive yaw turns it left.
  EXPECT_GT((camera_mount_rotation(0.3) * Eigen::Vector3d::UnitZ()).y(), 0.0);
}

TEST(Rig, SpatialTransforms) {
  const RigConfig rig = default_rig();
  const SE3Transform cross = HingeGeometry{}.rear_to_front(0.2);
  const RigState s = full_state(0, cross, SE3Transform(), SE3Transform());
  const SE3Transform& e5 = rig.cameras[5].extrinsic_to_lidar;
  const SE3Transform& e9 = rig.cameras[9].extrinsic_to_lidar;
  const SE3Transform& e2 = rig.cameras[2].extrinsic_to_lidar;

  ContextSpec wv{ContextKind::kWvSpatial, 0, 5, 9, 0};
  EXPECT_LT(max_diff(context_transform(wv, rig, s, s), e9.inverse() * e5), 1e-15);

  // C5 (front) to C2 (rear): front LiDAR coordinates to rear ones is cross^-1.
  ContextSpec cv{ContextKind::kCvSpatial, 2, 5, 2, 0};
  EXPECT_LT(max_diff(context_transform(cv, rig, s, s), e2.inverse() * cross.inverse() * e5), 1e-15);
  EXPECT_EQ(lidar_to_lidar(Vehicle::kRear, Vehicle::kFront, cross).to_row_major(), cross.to_row_major());
}

TEST(Rig, SpatioTemporalIsTemporalAfterSpatial) {
  const RigConfig rig = default_rig();
  TrajectorySpec spec;
  const Trajectory traj = make_trajectory(spec);
  const RigState st = rig_state(traj, 4, 4);
  const RigState stau = rig_state(traj, 4, 5);
  for (const auto& [kind, cv_type, target, source] :
       {std::tuple{ContextKind::kWvSpatioTemporal, 0, 5, 9}, std::tuple{ContextKind::kCvSpatioTemporal, 1, 9, 2}}) {
    const ContextSpec ctx{kind, cv_type, target, source, 1};
    const ContextKind spatial_kind =
        kind == ContextKind::kWvSpatioTemporal ? ContextKind::kWvSpatial : ContextKind::kCvSpatial;
    const SE3Transform spatial = context_transform({spatial_kind, cv_type, target, source, 0}, rig, st, st);
    const SE3Transform temporal = context_transform({ContextKind::kTemporal, 0, source, source, 1}, rig, st, stau);
    EXPECT_EQ((temporal * spatial).to_row_major(), context_transform(ctx, rig, st, stau).to_row_major());
  }
}

TEST(Rig, TemporalIsCameraMotion) {
  const RigConfig rig = default_rig();
  const SE3Transform j = SE3Transform::from_axis_angle({0.0, 0.0, 1.0}, 0.05, {0.5, 0.02, 0.0});
  const RigState s = full_state(0, SE3Transform(), SE3Transform(), SE3Transform());
  const RigState tau = full_state(1, SE3Transform(), j, SE3Transform());
  const ContextSpec ctx{ContextKind::kTemporal, 0, 6, 6, 1};
  EXPECT_LT(max_diff(context_transform(ctx, rig, s, tau), camera_pose_from_joint(rig.cameras[6], j)), 1e-15);
}

TEST(Rig, MissingStateIsReported) {
  const RigConfig rig = default_rig();
  RigState empty;
  const ContextSpec cv{ContextKind::kCvSpatial, 0, 8, 2, 0};
  try {
    context_transform(cv, rig, empty, empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteState);
  }
}

TEST(Rig, RejectsInvalidContexts) {
  const RigConfig rig = default_rig();
  // A within-vehicle spatial context across vehicles is malformed.
  EXPECT_THROW((ContextSpec{ContextKind::kWvSpatial, 0, 5, 2, 0}.validate(rig)), Error);
  // Temporal contexts need a nonzero offset.
  EXPECT_THROW((ContextSpec{ContextKind::kTemporal, 0, 5, 5, 0}.validate(rig)), Error);
}
