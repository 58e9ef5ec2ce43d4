#include <filesystem>

#include <gtest/gtest.h>

#include "articugeo/config.hpp"
#include "articugeo/manifest.hpp"
#include "articugeo/raster_io.hpp"

using namespace articugeo;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("articugeo_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string identity_line(const char* key) { return std::string(key) + " 1 0 0 0 0 1 0 0 0 0 1 0 0 0 0 1\n"; }

}  // namespace

TEST(Config, RigRoundTrip) {
  RigLayout layout;
  layout.width = 80;
  layout.height = 48;
  const RigConfig rig = default_rig(layout);
  const RigConfig back = rig_from_json(parse_json(rig_to_json(rig).dump(), "mem"), "mem");
  for (int c = 0; c < kNumCameras; ++c) {
    EXPECT_EQ(back.cameras[c].extrinsic_to_lidar.to_row_major(), rig.cameras[c].extrinsic_to_lidar.to_row_major());
    EXPECT_EQ(back.cameras[c].fx, rig.cameras[c].fx);
    EXPECT_EQ(back.vehicles[c], rig.vehicles[c]);
    EXPECT_EQ(back.camera_heights_gt[c], rig.camera_heights_gt[c]);
  }
}

TEST(Config, LayoutShortcut) {
  const RigConfig rig = rig_from_json(parse_json(R"({"layout": {"width": 64, "height": 40}})", "mem"), "mem");
  EXPECT_EQ(rig.cameras[3].width, 64);
  EXPECT_EQ(rig.cameras[3].height, 40);
}

TEST(Config, UnknownKeyNamesThePath) {
  const std::string msg =
      error_of([] { trajectory_from_json(parse_json(R"({"frames": 3, "sped": 1.0})", "traj.json"), "traj.json"); });
  EXPECT_NE(msg.find("traj.json"), std::string::npos) << msg;
  EXPECT_NE(msg.find("sped"), std::string::npos) << msg;
}

TEST(Config, SyntaxErrorHasLineAndColumn) {
  const std::string msg = error_of([] { parse_json("{\n  \"a\": 1,\n  oops\n}", "bad.json"); });
  EXPECT_NE(msg.find("bad.json:3:"), std::string::npos) << msg;
}

TEST(Config, SceneAndTrajectoryRoundTrip) {
  Scene s = ground_scene();
  s.boxes.push_back({{1.0, 1.0, 0.0}, {2.0, 2.0, 1.0}, default_texture()});
  const Scene back = scene_from_json(scene_to_json(s), "mem");
  ASSERT_EQ(back.boxes.size(), 1u);
  EXPECT_EQ(back.boxes[0].max, s.boxes[0].max);
  EXPECT_TRUE(back.ground.has_value());

  TrajectorySpec t;
  t.frames = 4;
  t.articulation_start = 0.1;
  const TrajectorySpec tb = trajectory_from_json(trajectory_to_json(t), "mem");
  EXPECT_EQ(tb.frames, 4);
  EXPECT_NEAR(tb.articulation_start, 0.1, 1e-15);
}

TEST(Config, LossOptions) {
  const LossOptions o = loss_options_from_json(
      parse_json(R"({"weights": {"sdc": 0.5}, "contexts": {"cv_types": [0, 2], "vpc": false}})", "mem"), "mem");
  EXPECT_EQ(o.weights.sdc, 0.5);
  EXPECT_EQ(o.contexts.cv_types, (std::set<int>{0, 2}));
  EXPECT_FALSE(o.contexts.vpc);
  EXPECT_TRUE(o.contexts.temporal);
}

TEST(Config, TransformText) {
  const SE3Transform t = parse_transform_text("# calib\ntransform 1 0 0 2 0 1 0 3 0 0 1 4 0 0 0 1\nrms 0.1\n", "m");
  EXPECT_EQ(t.translation(), Eigen::Vector3d(2.0, 3.0, 4.0));
  EXPECT_THROW(parse_transform_text("1 2 3", "m"), Error);
  EXPECT_THROW(parse_transform_text("transform 2 0 0 0 0 1 0 0 0 0 1 0 0 0 0 1\n", "m"), Error);
}

TEST(Manifest, ParseErrorsCarryLineNumbers) {
  const std::string head = "articugeo-manifest 1\nrig rig.json\nframe 0\n";
  EXPECT_NE(error_of([&] { parse_manifest(head + "front_pose 1 2 3\n", "m.txt", "."); }).find("m.txt:4"),
            std::string::npos);
  EXPECT_NE(error_of([&] { parse_manifest(head + "view C11 depth x.dpt\n", "m.txt", "."); }).find("m.txt:4"),
            std::string::npos);
  EXPECT_NE(error_of([&] { parse_manifest("manifest 2\n", "m.txt", "."); }).find("m.txt:1"), std::string::npos);
  // A frame without its transforms is incomplete.
  EXPECT_FALSE(error_of([&] { parse_manifest(head, "m.txt", "."); }).empty());
}

TEST(Manifest, FormatRoundTrip) {
  const std::string text = "articugeo-manifest 1\nrig rig.json\nframe 0\n" + identity_line("front_pose") +
                           identity_line("rear_pose") + identity_line("cross_vehicle") +
                           "cloud front f.ply\nview C5 depth d.dpt\nview C5 image i.img\n";
  const Manifest m = parse_manifest(text, "m", "/data");
  ASSERT_EQ(m.frames.size(), 1u);
  EXPECT_EQ(m.frames[0].views[5].at("depth"), "d.dpt");
  EXPECT_EQ(m.resolve("d.dpt"), "/data/d.dpt");
  EXPECT_EQ(format_manifest(parse_manifest(format_manifest(m), "m", "/data")), format_manifest(m));
}

TEST(Raster, RoundTripsAndErrors) {
  const fs::path dir = scratch_dir("raster");
  DepthMap d(3, 2, 0.0);
  d(1, 1) = 2.5;
  write_depth((dir / "d.dpt").string(), d);
  EXPECT_EQ(read_depth((dir / "d.dpt").string()), d);

  ImageBuffer img(2, 2, 3, 0.25);
  write_image((dir / "i.img").string(), img);
  EXPECT_EQ(read_image((dir / "i.img").string()), img);

  NormalMap n(2, 1);
  n.normals(0, 0) = {0.0, 0.0, -1.0};
  n.valid(0, 0) = 1;
  write_normals((dir / "n.nrm").string(), n);
  write_mask((dir / "n.msk").string(), n.valid);
  const NormalMap nb = read_normals((dir / "n.nrm").string(), read_mask((dir / "n.msk").string()));
  EXPECT_EQ(nb.normals(0, 0), n.normals(0, 0));
  EXPECT_EQ(nb.valid, n.valid);

  try {
    read_depth((dir / "i.img").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
  try {
    read_depth((dir / "missing.dpt").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("missing.dpt"), std::string::npos);
  }
}
