#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "articugeo/geometry.hpp"

using namespace articugeo;

namespace {

CameraModel small_camera() {
  CameraModel cam;
  cam.fx = 100.0;
  cam.fy = 120.0;
  cam.cx = 50.0;
  cam.cy = 40.0;
  cam.width = 100;
  cam.height = 80;
  return cam;
}

SE3Transform random_pose(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const Eigen::Vector3d axis(n(rng), n(rng), n(rng));
  return SE3Transform::from_axis_angle(axis, std::uniform_real_distribution<double>(0.0, M_PI)(rng),
                                       {n(rng), n(rng), n(rng)});
}

}  // namespace

TEST(Projection, KnownPoint) {
  const auto p = project(Point3(1.0, 2.0, 4.0), small_camera());
  EXPECT_DOUBLE_EQ(p.pixel.u, 75.0);
  EXPECT_DOUBLE_EQ(p.pixel.v, 100.0);
  EXPECT_DOUBLE_EQ(p.depth, 4.0);
}

TEST(Projection, PrincipalPointUnprojectsOnAxis) {
  const Point3 p = unproject(Pixel{50.0, 40.0}, 7.5, small_camera());
  EXPECT_EQ(p, Point3(0.0, 0.0, 7.5));
}

TEST(Projection, RejectsBehindCameraAndBadDepth) {
  const CameraModel cam = small_camera();
  try {
    project(Point3(0.0, 0.0, -1.0), cam);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBehindCamera);
  }
  try {
    unproject(Pixel{1.0, 1.0}, 0.0, cam);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidDepth);
  }
}

TEST(Projection, RoundTripProperty) {
  const CameraModel cam = small_camera();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 99.0), v(0.0, 79.0), d(0.1, 80.0);
  for (int i = 0; i < 500; ++i) {
    const Pixel px{u(rng), v(rng)};
    const double depth = d(rng);
    const auto back = project(unproject(px, depth, cam), cam);
    EXPECT_NEAR(back.pixel.u, px.u, 1e-9);
    EXPECT_NEAR(back.pixel.v, px.v, 1e-9);
    EXPECT_DOUBLE_EQ(back.depth, depth);
  }
}

TEST(SE3, QuarterTurnAboutZ) {
  const SE3Transform t = SE3Transform::from_axis_angle({0.0, 0.0, 1.0}, M_PI / 2, {1.0, 0.0, 0.0});
  const Point3 p = t * Point3(1.0, 0.0, 0.0);
  EXPECT_NEAR(p.x(), 1.0, 1e-15);
  EXPECT_NEAR(p.y(), 1.0, 1e-15);
  EXPECT_NEAR(p.z(), 0.0, 1e-15);
}

TEST(SE3, ComposeAppliesRightFirst) {
  const SE3Transform a = SE3Transform::from_translation({1.0, 0.0, 0.0});
  const SE3Transform b = SE3Transform::from_axis_angle({0.0, 0.0, 1.0}, M_PI);
  // b first: (1,0,0) -> (-1,0,0), then shifted to (0,0,0).
  EXPECT_LT(((a * b) * Point3(1.0, 0.0, 0.0)).norm(), 1e-15);
  EXPECT_NEAR(((b * a) * Point3(1.0, 0.0, 0.0)).x(), -2.0, 1e-15);
}

TEST(SE3, RotationErrorOracles) {
  const double theta = 0.3;
  const SE3Transform r = SE3Transform::from_axis_angle({1.0, 1.0, 0.0}, theta);
  EXPECT_NEAR(rotation_angle_between(SE3Transform(), r), theta, 1e-12);
  EXPECT_NEAR(rotation_error_frobenius(SE3Transform(), r), 2.0 * std::sqrt(2.0) * std::sin(theta / 2), 1e-12);
}

TEST(SE3, RowMajorLayout) {
  const SE3Transform t = SE3Transform::from_translation({4.0, 5.0, 6.0});
  const auto m = t.to_row_major();
  EXPECT_EQ(m[3], 4.0);
  EXPECT_EQ(m[7], 5.0);
  EXPECT_EQ(m[11], 6.0);
  EXPECT_EQ(m[15], 1.0);
  EXPECT_EQ(SE3Transform::from_row_major(m).to_row_major(), m);
}

TEST(SE3, ValidityDetectsShear) {
  std::array<double, 16> m{1, 0.2, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  const SE3Transform t = SE3Transform::from_row_major(m);
  EXPECT_FALSE(t.is_valid());
  EXPECT_TRUE(t.orthonormalized().is_valid());
}

class GroupAxioms : public ::testing::TestWithParam<int> {};

TEST_P(GroupAxioms, HoldOnRandomTriples) {
  std::mt19937_64 rng(GetParam());
  const SE3Transform a = random_pose(rng), b = random_pose(rng), c = random_pose(rng);
  EXPECT_LT((((a * b) * c).matrix() - (a * (b * c)).matrix()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(((a * a.inverse()).matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(((a * b).inverse().matrix() - (b.inverse() * a.inverse()).matrix()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE((a * b).is_valid());
}

INSTANTIATE_TEST_SUITE_P(Seeds, GroupAxioms, ::testing::Range(0, 20));
