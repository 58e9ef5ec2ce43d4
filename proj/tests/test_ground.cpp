#include <cmath>

#include <gtest/gtest.h>

#include "articugeo/ground_height.hpp"
#include "articugeo/surface_normal.hpp"

using namespace articugeo;

namespace {

CameraModel camera() {
  CameraModel cam;
  cam.fx = cam.fy = 40.0;
  cam.cx = 31.5;
  cam.cy = 23.5;
  cam.width = 64;
  cam.height = 48;
  return cam;
}

DepthMap ground_depth(const CameraModel& cam, double height) {
  DepthMap d(cam.width, cam.height, 0.0);
  for (int y = 0; y < cam.height; ++y) {
    if (y <= cam.cy) continue;
    for (int x = 0; x < cam.width; ++x) d(x, y) = height * cam.fy / (y - cam.cy);
  }
  return d;
}

/// Unit normals toward the camera, tilted `deg` about the camera x axis.
NormalMap tilted_normals(const DepthMap& d, double deg) {
  NormalMap n(d.width(), d.height());
  const Eigen::Vector3d up = Eigen::AngleAxisd(deg * M_PI / 180.0, Eigen::Vector3d::UnitX()) *
                             Eigen::Vector3d(0.0, -1.0, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    n.normals[i] = up;
    n.valid[i] = d[i] > 0.0 ? 1 : 0;
  }
  return n;
}

}  // namespace

TEST(GroundMask, FlatGroundBelowCamera) {
  const CameraModel cam = camera();
  const DepthMap d = ground_depth(cam, 1.5);
  const PixelMask m = ground_mask(tilted_normals(d, 0.0), d, cam);
  EXPECT_EQ(m, valid_depth_mask(d));
  EXPECT_GT(count_true(m), 0u);
}

TEST(GroundMask, ThresholdOnAngle) {
  const CameraModel cam = camera();
  const DepthMap d = ground_depth(cam, 1.5);
  const NormalMap n = tilted_normals(d, 10.0);
  EXPECT_EQ(count_true(ground_mask(n, d, cam)), 0u);
  GroundParams wide;
  wide.s_thr = 15.0 * M_PI / 180.0;
  EXPECT_EQ(count_true(ground_mask(n, d, cam, wide)), count_true(valid_depth_mask(d)));
}

TEST(GroundMask, CeilingIsNotGround) {
  // A horizontal plane above the camera has a vertical normal but P_y < 0.
  const CameraModel cam = camera();
  DepthMap d(cam.width, cam.height, 0.0);
  for (int y = 0; y < cam.cy; ++y) {
    for (int x = 0; x < cam.width; ++x) d(x, y) = 2.0 * cam.fy / (cam.cy - y);
  }
  EXPECT_EQ(count_true(ground_mask(tilted_normals(d, 0.0), d, cam)), 0u);
}

TEST(GroundParams, Validity) {
  GroundParams p;
  EXPECT_TRUE(p.is_valid());
  EXPECT_NEAR(p.s_thr, 5.0 * M_PI / 180.0, 1e-15);
  p.s_thr = M_PI / 2;
  EXPECT_FALSE(p.is_valid());
}

TEST(CameraHeight, FlatGroundRecoversHeight) {
  const CameraModel cam = camera();
  const DepthMap d = ground_depth(cam, 1.7);
  const auto hm = height_map(d, normal_from_depth(d, cam), cam);
  const PixelMask ground = valid_depth_mask(d);
  const auto l = loss_ch(hm, ground, 1.7);
  EXPECT_GT(l.count, 0u);
  EXPECT_LT(l.value, 1e-12);
}

TEST(CameraHeight, LinearInDepthScale) {
  const CameraModel cam = camera();
  const DepthMap d = ground_depth(cam, 1.5);
  const PixelMask ground = valid_depth_mask(d);
  for (double s : {0.5, 2.0, 3.0}) {
    DepthMap scaled = d;
    for (auto& v : scaled.data()) v *= s;
    const auto hm = height_map(scaled, normal_from_depth(scaled, cam), cam);
    EXPECT_NEAR(loss_ch(hm, ground, 1.5).value, std::abs(s - 1.0) * 1.5, 1e-9);
  }
}

TEST(CameraHeight, EmptyMaskIsAbsent) {
  const CameraModel cam = camera();
  const DepthMap d = ground_depth(cam, 1.5);
  const auto hm = height_map(d, normal_from_depth(d, cam), cam);
  EXPECT_FALSE(loss_ch(hm, PixelMask(cam.width, cam.height, 0), 1.5).present());
}
