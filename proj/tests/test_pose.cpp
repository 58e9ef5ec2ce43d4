#include <cmath>

#include <gtest/gtest.h>

#include "articugeo/pose_consistency.hpp"
#include "articugeo/synth_world.hpp"

using namespace articugeo;

TEST(Vpc, ConsistentLoopIsIdentity) {
  const Trajectory traj = make_trajectory(TrajectorySpec{});
  for (int t = 0; t + 1 < traj.frames(); ++t) {
    const ArticulatedMotion m = articulated_motion(traj, t, t + 1);
    const SE3Transform e = cross_vehicle_pose_error(m.front, m.rear, m.cross_t, m.cross_tau);
    EXPECT_LT((e.matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(loss_vpc(e), 1e-12);
  }
}

TEST(Vpc, TranslationOracle) {
  VpcWeights w;
  w.translation = 2.0;
  EXPECT_DOUBLE_EQ(loss_vpc(SE3Transform::from_translation({0.3, 0.4, 0.0}), w), 1.0);
}

TEST(Vpc, RotationOracle) {
  VpcWeights w;
  w.rotation = 0.5;
  const double theta = 0.2;
  EXPECT_NEAR(loss_vpc(SE3Transform::from_axis_angle({0.0, 0.0, 1.0}, theta), w),
              0.5 * 2.0 * std::sqrt(2.0) * std::sin(theta / 2), 1e-14);
}

TEST(Vpc, RearPerturbationShowsUp) {
  const Trajectory traj = make_trajectory(TrajectorySpec{});
  const ArticulatedMotion m = articulated_motion(traj, 2, 3);
  const SE3Transform bumped = SE3Transform::from_translation({0.0, 0.1, 0.0}) * m.rear;
  const double l = loss_vpc(cross_vehicle_pose_error(m.front, bumped, m.cross_t, m.cross_tau));
  EXPECT_NEAR(l, 0.1, 1e-9);
}

TEST(Motion, RelativeMotionOracle) {
  const SE3Transform w_t = SE3Transform::from_translation({1.0, 0.0, 0.0});
  const SE3Transform w_tau = SE3Transform::from_translation({3.0, 0.0, 0.0});
  // A point at the origin of L(t) sits 2 m behind L(tau).
  EXPECT_TRUE((relative_motion(w_t, w_tau) * Point3::Zero()).isApprox(Point3(-2.0, 0.0, 0.0)));
}

TEST(Motion, DistributeMatchesCameraPoses) {
  const RigConfig rig = default_rig();
  JointMotionEstimate j;
  j.vehicle = Vehicle::kRear;
  j.motion = SE3Transform::from_axis_angle({0.0, 0.0, 1.0}, 0.03, {0.4, 0.01, 0.0});
  const auto poses = distribute_pose(j, rig);
  EXPECT_EQ(poses.size(), 5u);
  for (const auto& [cam, pose] : poses) {
    EXPECT_EQ(rig.vehicle_of(cam), Vehicle::kRear);
    EXPECT_EQ(pose.to_row_major(), camera_pose_from_joint(rig.cameras[cam], j.motion).to_row_major());
  }
}

TEST(MotionFile, RoundTrip) {
  std::vector<MotionRecord> recs{{0, Vehicle::kFront, SE3Transform::from_translation({0.1, 0.2, 0.3})},
                                 {0, Vehicle::kRear, SE3Transform::from_axis_angle({1, 0, 0}, 1.0 / 3.0)}};
  const auto back = parse_motion_records(format_motion_records(recs), "mem");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].vehicle, Vehicle::kRear);
  EXPECT_EQ(back[1].pose.to_row_major(), recs[1].pose.to_row_major());
}

TEST(MotionFile, ErrorsNameTheLine) {
  try {
    parse_motion_records("0 front 1 0 0 0 0 1 0 0 0 0 1 0 0 0 0 1\n1 middle 1 0 0 0 0 1 0 0 0 0 1 0 0 0 0 1\n", "m.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("m.txt:2"), std::string::npos) << e.what();
  }
}
