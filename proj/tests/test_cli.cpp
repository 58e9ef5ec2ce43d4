#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "articugeo/calib_icp.hpp"
#include "articugeo/config.hpp"
#include "articugeo/recon_losses.hpp"
#include "articugeo/rig.hpp"
#include "commands.hpp"

using namespace articugeo;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

/// One small render shared by the tests below.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "articugeo_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write_text_file((dir_ / "cfg.json").string(),
                    R"({"rig": {"layout": {"width": 96, "height": 64}}, "trajectory": {"frames": 2},
                        "scene": {"preset": "ground"}, "render": {"lidar": {"n_azimuth": 720}}})");
    const Invocation r = run({"render", "--config", (dir_ / "cfg.json").string(), "--out", (dir_ / "seq").string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static std::string path(const std::string& rel) { return (dir_ / rel).string(); }
  static fs::path dir_;
};

fs::path CliTest::dir_;

std::size_t count_views(const fs::path& dir, const std::string& suffix) {
  std::size_t n = 0;
  for (int c = 0; c < kNumCameras; ++c) n += fs::exists(dir / (camera_name(c) + suffix));
  return n;
}

}  // namespace

TEST_F(CliTest, RenderWritesEveryRaster) {
  const fs::path f0 = dir_ / "seq" / "frame_0000";
  EXPECT_EQ(count_views(f0, "_depth.dpt"), 10u);
  EXPECT_EQ(count_views(f0, "_prior_depth.dpt"), 10u);
  EXPECT_EQ(count_views(f0, "_ground.msk"), 10u);
  EXPECT_TRUE(fs::exists(dir_ / "seq" / "manifest.txt"));
  EXPECT_TRUE(fs::exists(f0 / "lidar_front.ply"));
  EXPECT_EQ(std::distance(fs::directory_iterator(f0), fs::directory_iterator{}), 8 * kNumCameras + 2);
}

TEST_F(CliTest, LossesToggleCrossVehicleTypes) {
  const Invocation none = run({"losses", "--manifest", path("seq/manifest.txt"), "--cv-types", ""});
  const Invocation some = run({"losses", "--manifest", path("seq/manifest.txt"), "--cv-types", "1,2"});
  ASSERT_EQ(none.code, 0) << none.err;
  ASSERT_EQ(some.code, 0) << some.err;
  EXPECT_EQ(none.out.find(".cv"), std::string::npos);
  EXPECT_NE(some.out.find("photo_S.cv1"), std::string::npos);
  EXPECT_NE(some.out.find("photo_S.cv2"), std::string::npos);
  EXPECT_EQ(some.out.find("photo_S.cv0"), std::string::npos);
}

TEST_F(CliTest, DepthScaleMovesCameraHeightOnly) {
  const Invocation r = run({"losses", "--manifest", path("seq/manifest.txt"), "--depth-scale", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const LossReport rep = LossReport::from_text(r.out);
  const RigConfig rig = default_rig();
  ASSERT_NE(rep.find("ch"), nullptr);
  // Every default camera sits at the same height above the ground.
  EXPECT_NEAR(rep.find("ch")->value, rig.camera_heights_gt[0], 0.01 * rig.camera_heights_gt[0]);
}

TEST_F(CliTest, CalibrationOverride) {
  write_text_file(path("cal.txt"), "transform 1 0 0 0 0 1 0 0 0 0 1 0 0 0 0 1\n");
  const Invocation base = run({"losses", "--manifest", path("seq/manifest.txt"), "--no-smooth"});
  const Invocation moved =
      run({"losses", "--manifest", path("seq/manifest.txt"), "--no-smooth", "--calibration", "0:" + path("cal.txt")});
  ASSERT_EQ(moved.code, 0) << moved.err;
  EXPECT_GT(LossReport::from_text(moved.out).find("photo_S.cv0")->value,
            LossReport::from_text(base.out).find("photo_S.cv0")->value);
  EXPECT_EQ(run({"losses", "--manifest", path("seq/manifest.txt"), "--calibration", "7:" + path("cal.txt")}).code, 1);
}

TEST_F(CliTest, CalibrateIdenticalCloudsGivesIdentity) {
  const std::string cloud = path("seq/frame_0000/lidar_front.ply");
  const Invocation r = run({"calibrate", "--front", cloud, "--rear", cloud, "--out", path("id.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const SE3Transform t = read_transform_file(path("id.txt"));
  EXPECT_LT((t.matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NE(r.out.find("rms_residual"), std::string::npos);
}

TEST_F(CliTest, CalibrateEmptyCloudIsNumericalFailure) {
  write_ply(path("empty.ply"), PointCloud{});
  const Invocation r = run({"calibrate", "--front", path("empty.ply"), "--rear", path("seq/frame_0000/lidar_rear.ply")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("empty"), std::string::npos);
}

TEST_F(CliTest, MetricsOfIdenticalManifests) {
  const Invocation r = run({"metrics", "--pred", path("seq/manifest.txt"), "--gt", path("seq/manifest.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("abs_rel 0\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("delta1 1\n"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const Invocation missing = run({"render", "--rig", "/nonexistent/rig.json", "--out", "/tmp/articugeo_unused"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("/nonexistent/rig.json"), std::string::npos);
  EXPECT_EQ(run({"verify", "bogus"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"losses"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"losses", "--manifest", "x", "--cv-types", "5"}).code, 1);
}

TEST(Cli, VerifySuite) {
  const Invocation r = run({"verify", "geometry"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS geometry.project_unproject"), std::string::npos);
  EXPECT_NE(r.out.find("result PASS"), std::string::npos);
}

TEST(Cli, CvTypeParsing) {
  EXPECT_EQ(cli::parse_cv_types(""), std::set<int>{});
  EXPECT_EQ(cli::parse_cv_types("0,2"), (std::set<int>{0, 2}));
  EXPECT_THROW(cli::parse_cv_types("0,,1"), Error);
}
