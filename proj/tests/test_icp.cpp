#include <random>

#include <gtest/gtest.h>

#include "articugeo/calib_icp.hpp"
#include "articugeo/kd_tree.hpp"

using namespace articugeo;

namespace {

/// Points on three mutually perpendicular patches, so every axis is pinned.
PointCloud corner_cloud(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 4.0);
  PointCloud c;
  for (int i = 0; i < n; ++i) {
    const double a = u(rng), b = u(rng);
    switch (i % 3) {
      case 0: c.points.emplace_back(a, b, 0.0); break;
      case 1: c.points.emplace_back(a, 0.0, b); break;
      default: c.points.emplace_back(0.0, a, b); break;
    }
  }
  return c;
}

}  // namespace

TEST(KdTree, MatchesBruteForce) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<Eigen::Vector3d> pts(500);
  for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
  const KdTree tree(pts);
  for (int q = 0; q < 200; ++q) {
    const Eigen::Vector3d query(u(rng), u(rng), u(rng));
    std::size_t best = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if ((pts[i] - query).squaredNorm() < (pts[best] - query).squaredNorm()) best = i;
    }
    const auto hit = tree.nearest(query);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->index, best);
  }
  EXPECT_FALSE(tree.nearest({100.0, 0.0, 0.0}, 1.0));
}

TEST(KdTree, TiesResolveToLowerIndex) {
  const KdTree tree({{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
  EXPECT_EQ(tree.nearest(Eigen::Vector3d(0.5, 0.0, 0.0))->index, 0u);
  EXPECT_EQ(tree.nearest(Eigen::Vector3d(0.0, 0.0, 0.0))->index, 0u);
}

TEST(Alignment, ExactForKnownTransform) {
  std::mt19937_64 rng(2);
  const PointCloud src = corner_cloud(rng, 60);
  const SE3Transform t = SE3Transform::from_axis_angle({1.0, 2.0, 0.5}, 0.7, {0.3, -1.0, 2.0});
  const PointCloud dst = transform_cloud(src, t);
  const SE3Transform est = align_point_pairs(src.points, dst.points);
  EXPECT_LT((est.matrix() - t.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Icp, RecoversSmallMotion) {
  std::mt19937_64 rng(3);
  const PointCloud target = corner_cloud(rng, 3000);
  const SE3Transform t = SE3Transform::from_axis_angle({0.2, 1.0, 0.1}, 0.08, {0.1, -0.05, 0.08});
  const PointCloud source = transform_cloud(target, t.inverse());
  const IcpResult r = icp_register(source, target);
  EXPECT_LT(rotation_angle_between(r.transform, t), 1e-6);
  EXPECT_LT((r.transform.translation() - t.translation()).norm(), 1e-6);
  EXPECT_TRUE(r.converged);
  for (std::size_t i = 1; i < r.residual_history.size(); ++i) {
    EXPECT_LE(r.residual_history[i], r.residual_history[i - 1]);
  }
}

TEST(Icp, ErrorCodes) {
  std::mt19937_64 rng(4);
  const PointCloud cloud = corner_cloud(rng, 300);
  try {
    icp_register(cloud, PointCloud{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyOverlap);
  }
  PointCloud line;
  for (int i = 0; i < 50; ++i) line.points.emplace_back(0.1 * i, 0.0, 0.0);
  try {
    icp_register(line, line);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateGeometry);
  }
  IcpConfig bad;
  bad.refine_dists = {2.0};
  EXPECT_FALSE(bad.is_valid());
}

TEST(Projection, ZBufferKeepsNearest) {
  CameraModel cam;
  cam.fx = cam.fy = 10.0;
  cam.cx = 4.5;
  cam.cy = 4.5;
  cam.width = cam.height = 10;
  PointCloud c;
  c.points = {{0.0, 0.0, 5.0}, {0.0, 0.0, 3.0}, {0.0, 0.0, -2.0}, {100.0, 0.0, 1.0}};
  const DepthMap d = project_cloud_to_image(c, SE3Transform(), cam);
  EXPECT_DOUBLE_EQ(d(5, 5), 3.0);
  std::size_t filled = 0;
  for (double v : d.data()) filled += v > 0.0 ? 1 : 0;
  EXPECT_EQ(filled, 1u);
}

TEST(Ply, RoundTripAndErrors) {
  PointCloud c;
  c.points = {{1.5, -2.25, 3.0}, {0.0, 0.0, 0.125}};
  EXPECT_EQ(parse_ply(format_ply(c), "mem").points, c.points);
  EXPECT_THROW(parse_ply("ply\nformat binary_little_endian 1.0\nend_header\n", "mem"), Error);
  EXPECT_THROW(parse_ply("ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nproperty float y\n"
                         "property float z\nend_header\n1 2 3\n", "mem"),
               Error);
}
