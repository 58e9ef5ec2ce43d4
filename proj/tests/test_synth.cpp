#include <cmath>

#include <gtest/gtest.h>

#include "articugeo/synth_world.hpp"
#include "articugeo/synthetic_dataset.hpp"

using namespace articugeo;

TEST(Intersect, GroundFromAbove) {
  const auto hit = intersect(ground_scene(), {0.0, 0.0, 2.0}, {0.0, 0.0, -1.0});
  ASSERT_TRUE(hit);
  EXPECT_DOUBLE_EQ(hit->t, 2.0);
  EXPECT_TRUE(hit->ground);
  EXPECT_NEAR(std::abs(hit->normal.z()), 1.0, 1e-15);
  EXPECT_FALSE(intersect(ground_scene(), {0.0, 0.0, 2.0}, {0.0, 0.0, 1.0}));
}

TEST(Intersect, BoxOccludesGround) {
  Scene s = ground_scene();
  s.boxes.push_back({{-1.0, -1.0, 0.0}, {1.0, 1.0, 0.5}, default_texture()});
  const auto hit = intersect(s, {0.0, 0.0, 2.0}, {0.0, 0.0, -1.0});
  ASSERT_TRUE(hit);
  EXPECT_DOUBLE_EQ(hit->t, 1.5);
  EXPECT_FALSE(hit->ground);
}

TEST(Intersect, RangeCap) {
  Scene s = ground_scene();
  s.max_range = 10.0;
  // Hits the ground 20 m away along the ray.
  const Eigen::Vector3d dir = Eigen::Vector3d(std::sqrt(399.0), 0.0, -1.0).normalized();
  EXPECT_FALSE(intersect(s, {0.0, 0.0, 1.0}, dir));
}

TEST(Scene, ValidationRejectsBadPrimitives) {
  Scene s = ground_scene();
  s.boxes.push_back({{0.0, 0.0, -1.0}, {1.0, 1.0, 1.0}, default_texture()});
  EXPECT_THROW(s.validate(), Error);
  Scene w;
  w.walls.push_back({{0.0, 0.0}, {2.0, 0.0}, 0.0, 1.0, default_texture()});
  EXPECT_THROW(w.validate(), Error);
  EXPECT_NO_THROW(smooth_room_scene().validate());
}

TEST(Texture, DefaultStaysInRange) {
  EXPECT_TRUE(default_texture().is_valid());
  Texture t;
  t.gratings.push_back({{1.0, 0.0, 0.0}, 0.0, {0.6, 0.0, 0.0}});
  EXPECT_FALSE(t.is_valid());
}

TEST(Hinge, StraightArticulation) {
  const SE3Transform t = HingeGeometry{}.rear_to_front(0.0);
  EXPECT_TRUE((t * Point3::Zero()).isApprox(Point3(-5.0, 0.0, 0.0)));
}

TEST(Trajectory, ArticulationRamp) {
  TrajectorySpec spec;
  spec.frames = 5;
  const Trajectory traj = make_trajectory(spec);
  EXPECT_EQ(traj.frames(), 5);
  EXPECT_NEAR(traj.articulation.front(), spec.articulation_start, 1e-15);
  EXPECT_NEAR(traj.articulation.back(), spec.articulation_start + spec.articulation_swing, 1e-12);
  EXPECT_THROW(articulated_motion(traj, 0, 5), Error);
}

TEST(Render, LevelCameraSeesAnalyticGround) {
  RigLayout layout;
  layout.width = 64;
  layout.height = 40;
  CameraModel cam = default_rig(layout).cameras[5];
  cam.extrinsic_to_lidar = SE3Transform();
  const CameraRender r = render_camera(ground_scene(), cam, {camera_mount_rotation(0.0), {0.0, 0.0, 1.2}});
  const int y = cam.height - 1;
  EXPECT_NEAR(r.depth(10, y), 1.2 * cam.fy / (y - cam.cy), 1e-9);
  EXPECT_EQ(r.depth(10, 0), 0.0);
  EXPECT_TRUE(r.ground(10, y));
  EXPECT_TRUE(r.normals.normals(10, y).isApprox(Eigen::Vector3d(0.0, -1.0, 0.0), 1e-12));
}

TEST(Lidar, DeterministicAndWindowed) {
  LidarPattern p;
  p.n_azimuth = 360;
  p.azimuth_min_deg = -45.0;
  p.azimuth_max_deg = 45.0;
  const SE3Transform pose = SE3Transform::from_translation({0.0, 0.0, 2.0});
  const Scene scene = room_scene();
  const PointCloud a = sample_lidar(scene, pose, p, 0.01, 9);
  const PointCloud b = sample_lidar(scene, pose, p, 0.01, 9);
  const PointCloud c = sample_lidar(scene, pose, p, 0.01, 10);
  EXPECT_EQ(a.points, b.points);
  EXPECT_NE(a.points, c.points);
  for (const auto& q : a.points) EXPECT_LE(std::abs(std::atan2(q.y(), q.x())), 45.0 * M_PI / 180.0 + 1e-9);
}

TEST(Priors, ScaleAndExactNoiseAngle) {
  RigLayout layout;
  layout.width = 48;
  layout.height = 32;
  CameraModel cam = default_rig(layout).cameras[5];
  cam.extrinsic_to_lidar = SE3Transform();
  const CameraRender r = render_camera(smooth_room_scene(), cam, {camera_mount_rotation(0.0), {0.0, 0.0, 1.5}});
  const Priors p = prior_provider(r, 2.5, 3.0, 1, 0);
  for (std::size_t i = 0; i < r.depth.size(); ++i) {
    EXPECT_EQ(p.depth[i], 2.5 * r.depth[i]);
    if (!r.normals.valid[i]) continue;
    const double c = std::clamp(p.normals.normals[i].dot(r.normals.normals[i]), -1.0, 1.0);
    EXPECT_NEAR(std::acos(c) * 180.0 / M_PI, 3.0, 1e-6);
  }
}

TEST(Dataset, GroundTruthFields) {
  RigLayout layout;
  layout.width = 32;
  layout.height = 24;
  TrajectorySpec spec;
  spec.frames = 2;
  const Trajectory traj = make_trajectory(spec);
  const Dataset d = make_synthetic_dataset(ground_scene(), default_rig(layout), traj);
  ASSERT_EQ(d.frames.size(), 2u);
  EXPECT_EQ(d.frames[1].cross_vehicle.to_row_major(), traj.cross_vehicle(1).to_row_major());
  for (const auto& v : d.frames[0].views) {
    ASSERT_TRUE(v.prior_depth && v.prior_normals);
    EXPECT_EQ(*v.prior_depth, v.depth);
  }
}
