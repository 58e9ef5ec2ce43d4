#include <gtest/gtest.h>

#include "articugeo/warping.hpp"

using namespace articugeo;

namespace {

CameraModel camera(int w = 40, int h = 30) {
  CameraModel cam;
  cam.fx = cam.fy = 30.0;
  cam.cx = (w - 1) / 2.0;
  cam.cy = (h - 1) / 2.0;
  cam.width = w;
  cam.height = h;
  return cam;
}

ImageBuffer ramp(int w, int h) {
  ImageBuffer img(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img(x, y, 0) = 0.01 * x + 0.002 * y;
  }
  return img;
}

}  // namespace

TEST(Bilinear, CellCenterAverage) {
  ImageBuffer img(2, 2, 1);
  img(0, 0, 0) = 0.0;
  img(1, 0, 0) = 1.0;
  img(0, 1, 0) = 2.0;
  img(1, 1, 0) = 3.0;
  std::array<double, 3> out{};
  ASSERT_TRUE(bilinear_sample(img, Pixel{0.5, 0.5}, out));
  EXPECT_DOUBLE_EQ(out[0], 1.5);
  ASSERT_TRUE(bilinear_sample(img, Pixel{1.0, 0.25}, out));
  EXPECT_DOUBLE_EQ(out[0], 1.5);
}

TEST(Bilinear, NoClamping) {
  const ImageBuffer img = ramp(4, 3);
  std::array<double, 3> out{};
  EXPECT_TRUE(bilinear_sample(img, Pixel{3.0, 2.0}, out));
  EXPECT_FALSE(bilinear_sample(img, Pixel{3.0001, 1.0}, out));
  EXPECT_FALSE(bilinear_sample(img, Pixel{-1e-9, 1.0}, out));
}

TEST(Bilinear, ZeroWeightNeighborIgnored) {
  DepthMap d(3, 3, 2.0);
  d(2, 1) = 0.0;
  EXPECT_TRUE(bilinear_sample(d, Pixel{1.0, 1.0}).valid);
  EXPECT_FALSE(bilinear_sample(d, Pixel{1.5, 1.0}).valid);
  EXPECT_DOUBLE_EQ(bilinear_sample(d, Pixel{0.5, 0.5}).value, 2.0);
}

TEST(Warp, IdentityReproducesImage) {
  const CameraModel cam = camera();
  const ImageBuffer img = ramp(cam.width, cam.height);
  const DepthMap depth(cam.width, cam.height, 5.0);
  const auto w = warp_image(cam, cam, depth, SE3Transform(), img);
  EXPECT_EQ(count_true(w.mask), static_cast<std::size_t>(cam.width * cam.height));
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) EXPECT_NEAR(w.image(x, y, 0), img(x, y, 0), 1e-14);
  }
}

TEST(Warp, LateralShiftOfFrontoParallelPlane) {
  // Moving the source camera 0.5 m left shifts a plane at 5 m by fx * 0.5 / 5 = 3 px.
  const CameraModel cam = camera();
  const DepthMap depth(cam.width, cam.height, 5.0);
  const SE3Transform to_source = SE3Transform::from_translation({0.5, 0.0, 0.0});
  const auto c = compute_correspondences(cam, cam, depth, to_source);
  EXPECT_NEAR(c.pixels(10, 10).u, 13.0, 1e-12);
  EXPECT_NEAR(c.pixels(10, 10).v, 10.0, 1e-12);
  EXPECT_DOUBLE_EQ(c.source_z(10, 10), 5.0);
  // The last three columns land outside the source.
  EXPECT_FALSE(c.valid(cam.width - 3, 5));
  EXPECT_TRUE(c.valid(cam.width - 4, 5));

  const ImageBuffer img = ramp(cam.width, cam.height);
  const auto w = warp_image(cam, cam, depth, to_source, img);
  EXPECT_NEAR(w.image(10, 10, 0), img(13, 10, 0), 1e-14);
}

TEST(Warp, SourceMaskInvalidates) {
  const CameraModel cam = camera();
  const DepthMap depth(cam.width, cam.height, 5.0);
  PixelMask source_valid(cam.width, cam.height, 1);
  source_valid(7, 7) = 0;
  const auto w = warp_image(cam, cam, depth, SE3Transform(), ramp(cam.width, cam.height), &source_valid);
  EXPECT_FALSE(w.mask(7, 7));
  EXPECT_TRUE(w.mask(8, 7));
}

TEST(Warp, InvalidDepthNeverWarps) {
  const CameraModel cam = camera();
  DepthMap depth(cam.width, cam.height, 5.0);
  depth(3, 4) = 0.0;
  const auto c = compute_correspondences(cam, cam, depth, SE3Transform());
  EXPECT_FALSE(c.valid(3, 4));
}

TEST(ReprojectDepth, PlaneSeenFromBehind) {
  // Source 1 m behind the target: the plane is 1 m farther away for it.
  const CameraModel cam = camera();
  const DepthMap target(cam.width, cam.height, 4.0);
  const DepthMap source(cam.width, cam.height, 5.0);
  const SE3Transform source_to_target = SE3Transform::from_translation({0.0, 0.0, -1.0});
  const auto r = reproject_depth(cam, cam, source, source_to_target, target);
  EXPECT_TRUE(r.mask(cam.width / 2, cam.height / 2));
  EXPECT_NEAR(r.depth(cam.width / 2, cam.height / 2), 4.0, 1e-12);
}

TEST(Masks, CombineIsLogicalAnd) {
  PixelMask a(2, 1, 1), b(2, 1, 1);
  b(1, 0) = 0;
  const PixelMask m = combine_masks({a, b});
  EXPECT_EQ(m(0, 0), 1);
  EXPECT_EQ(m(1, 0), 0);
  EXPECT_THROW(combine_masks({a, PixelMask(3, 1, 1)}), Error);
}
