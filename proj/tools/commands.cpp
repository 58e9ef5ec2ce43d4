#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "articugeo/calib_icp.hpp"
#include "articugeo/config.hpp"
#include "articugeo/depth_metrics.hpp"
#include "articugeo/manifest.hpp"
#include "articugeo/raster_io.hpp"
#include "articugeo/verify.hpp"

namespace articugeo::cli {

namespace fs = std::filesystem;

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnknownSuite:
    case ErrorCode::kUnknownVehicle:
      return kUsage;
    case ErrorCode::kParse:
    case ErrorCode::kIo:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kIncompleteState:
    case ErrorCode::kMissingPriors:
    case ErrorCode::kEmptyContexts:
    case ErrorCode::kOutOfRange:
      return kData;
    default:
      return kNumerical;
  }
}

namespace {

/// A section comes from its own file when given, else from the combined
/// config, else nullopt.
std::optional<ConfigSource> section(const GlobalOptions& g, const std::string& file, const std::string& name) {
  if (!file.empty()) return load_config_source(file);
  if (g.config.empty()) return std::nullopt;
  return config_section(load_config_source(g.config), name);
}

void write_output(const GlobalOptions& g, const std::string& text, std::ostream& out) {
  out << text;
  if (!g.out.empty()) write_text_file(g.out, text);
}

std::string view_file(int frame, int cam, const char* kind, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "frame_%04d/%s_%s.%s", frame, camera_name(cam).c_str(), kind, ext);
  return buf;
}

std::string transform_text(const SE3Transform& t) {
  std::string s = "transform";
  char buf[32];
  for (double v : t.to_row_major()) {
    std::snprintf(buf, sizeof(buf), " %.17g", v);
    s += buf;
  }
  return s + "\n";
}

}  // namespace

const std::vector<std::string>& disable_flag_names() {
  static const std::vector<std::string> names{"temporal", "wv", "st",  "mvrc", "sdc", "smooth",
                                              "nc",       "snc", "pnc", "ch",   "vpc"};
  return names;
}

std::set<int> parse_cv_types(const std::string& text) {
  std::set<int> types;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    require(item == "0" || item == "1" || item == "2", ErrorCode::kInvalidArgument,
            "--cv-types: expected a comma list of 0, 1, 2, got '" + text + "'");
    types.insert(item[0] - '0');
  }
  return types;
}

int cmd_render(const GlobalOptions& g, const RenderArgs& a, std::ostream& out) {
  require(!g.out.empty(), ErrorCode::kInvalidArgument, "render needs --out DIR");
  Scene scene = smooth_room_scene();
  RigConfig rig = default_rig();
  TrajectorySpec spec;
  RenderSettings settings;
  if (auto s = section(g, a.scene, "scene")) scene = scene_from_json(s->value, s->origin);
  if (auto s = section(g, a.rig, "rig")) rig = rig_from_json(s->value, s->origin);
  if (auto s = section(g, a.trajectory, "trajectory")) spec = trajectory_from_json(s->value, s->origin);
  if (auto s = section(g, a.render, "render")) settings = render_settings_from_json(s->value, s->origin);
  if (g.seed) settings.priors.seed = *g.seed;
  scene.validate();
  rig.validate();
  const Trajectory traj = make_trajectory(spec);
  traj.validate();

  const fs::path dir(g.out);
  fs::create_directories(dir);
  write_text_file((dir / "rig.json").string(), rig_to_json(rig).dump(2) + "\n");

  RenderOptions ro;
  ro.lidar = settings.lidar;
  ro.pattern = settings.pattern;
  ro.lidar_noise = settings.lidar_noise;
  ro.seed = settings.priors.seed;

  Manifest m;
  m.directory = dir.string();
  m.rig_file = "rig.json";
  for (int k = 0; k < traj.frames(); ++k) {
    const FrameRender fr = render(scene, rig, traj, k, ro);
    ManifestFrame mf;
    mf.index = k;
    mf.front_pose = traj.front_pose(k);
    mf.rear_pose = traj.rear_pose(k);
    mf.cross_vehicle = traj.cross_vehicle(k);
    char frame_dir[32];
    std::snprintf(frame_dir, sizeof(frame_dir), "frame_%04d", k);
    fs::create_directories(dir / frame_dir);
    if (fr.lidar_front && fr.lidar_rear) {
      mf.cloud_front = std::string(frame_dir) + "/lidar_front.ply";
      mf.cloud_rear = std::string(frame_dir) + "/lidar_rear.ply";
      write_ply(m.resolve(*mf.cloud_front), *fr.lidar_front);
      write_ply(m.resolve(*mf.cloud_rear), *fr.lidar_rear);
    }
    for (int c = 0; c < kNumCameras; ++c) {
      const CameraRender& cr = fr.cameras[c];
      const Priors p = prior_provider(cr, settings.priors.depth_scale, settings.priors.normal_noise_deg,
                                      settings.priors.seed, prior_stream(k, c));
      auto& files = mf.views[c];
      auto put = [&](const char* kind, const char* ext) {
        return m.resolve(files[kind] = view_file(k, c, kind, ext));
      };
      write_image(put("image", "img"), cr.image);
      write_depth(put("depth", "dpt"), cr.depth);
      write_normals(put("normals", "nrm"), cr.normals);
      write_mask(put("normals_mask", "msk"), cr.normals.valid);
      write_mask(put("ground", "msk"), cr.ground);
      write_depth(put("prior_depth", "dpt"), p.depth);
      write_normals(put("prior_normals", "nrm"), p.normals);
      write_mask(put("prior_normals_mask", "msk"), p.normals.valid);
    }
    m.frames.push_back(std::move(mf));
  }
  const std::string manifest_path = (dir / "manifest.txt").string();
  write_manifest(manifest_path, m);
  out << "manifest " << manifest_path << "\nframes " << traj.frames() << "\n";
  return kOk;
}

int cmd_losses(const GlobalOptions& g, const LossArgs& a, std::ostream& out) {
  require(!a.manifest.empty(), ErrorCode::kInvalidArgument, "losses needs --manifest");
  require(a.depth_scale > 0.0 && std::isfinite(a.depth_scale), ErrorCode::kInvalidArgument,
          "--depth-scale must be positive");
  LossOptions opts;
  if (auto s = section(g, "", "losses")) opts = loss_options_from_json(s->value, s->origin);
  if (a.cv_types) opts.contexts.cv_types = *a.cv_types;
  ContextToggles& t = opts.contexts;
  const std::map<std::string, bool*> toggles{
      {"temporal", &t.temporal}, {"wv", &t.within_vehicle}, {"st", &t.spatiotemporal}, {"mvrc", &t.mvrc},
      {"sdc", &t.sdc},           {"smooth", &t.smoothness}, {"nc", &t.nc},             {"snc", &t.snc},
      {"pnc", &t.pnc},           {"ch", &t.camera_height},  {"vpc", &t.vpc}};
  for (const auto& name : a.disabled) {
    const auto it = toggles.find(name);
    require(it != toggles.end(), ErrorCode::kInvalidArgument, "unknown loss toggle '" + name + "'");
    *it->second = false;
  }

  Dataset data = load_dataset(read_manifest(a.manifest));
  for (const auto& spec : a.calibrations) {
    const auto colon = spec.find(':');
    require(colon != std::string::npos && colon > 0, ErrorCode::kInvalidArgument,
            "--calibration expects FRAME:FILE, got '" + spec + "'");
    int index = -1;
    try {
      std::size_t used = 0;
      index = std::stoi(spec.substr(0, colon), &used);
      require(used == colon, ErrorCode::kInvalidArgument, "");
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "--calibration: bad frame index in '" + spec + "'");
    }
    bool found = false;
    for (auto& f : data.frames) {
      if (f.index != index) continue;
      f.cross_vehicle = read_transform_file(spec.substr(colon + 1));
      found = true;
    }
    require(found, ErrorCode::kInvalidArgument, "--calibration: no frame " + std::to_string(index));
  }
  if (a.depth_scale != 1.0) {
    for (auto& f : data.frames) {
      for (auto& v : f.views) {
        for (auto& d : v.depth.data()) d *= a.depth_scale;
      }
    }
  }
  write_output(g, compute_losses(data, opts).to_text(), out);
  return kOk;
}

int cmd_calibrate(const GlobalOptions& g, const CalibrateArgs& a, std::ostream& out) {
  require(!a.front.empty() && !a.rear.empty(), ErrorCode::kInvalidArgument, "calibrate needs --front and --rear");
  IcpConfig cfg = default_calibration_icp();
  if (auto s = section(g, a.icp, "icp")) cfg = icp_config_from_json(s->value, s->origin);
  if (!a.init.empty()) cfg.initial_guess = read_transform_file(a.init);
  const PointCloud front = read_ply(a.front);
  const PointCloud rear = read_ply(a.rear);
  require(!front.empty() && !rear.empty(), ErrorCode::kEmptyOverlap, "calibrate: empty point cloud");
  // Rear sweep onto the front one: the result maps rear LiDAR coordinates to
  // front LiDAR coordinates.
  const IcpResult r = icp_register(rear, front, cfg);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "rms_residual %.17g\niterations %d\nconverged %d\ninliers %zu\n", r.rms_residual,
                r.iterations, r.converged ? 1 : 0, r.inliers);
  write_output(g, transform_text(r.transform) + buf, out);
  return kOk;
}

int cmd_verify(const GlobalOptions& g, const std::string& suite, std::ostream& out) {
  VerifyTolerances tol;
  if (auto s = section(g, "", "verify")) tol = verify_tolerances_from_json(s->value, s->origin);
  if (g.seed) tol.seed = *g.seed;
  std::string text;
  bool passed = true;
  for (const SuiteResult& r : run_suite(suite, tol)) {
    text += r.to_text();
    passed = passed && r.passed();
  }
  text += passed ? "result PASS\n" : "result FAIL\n";
  write_output(g, text, out);
  return passed ? kOk : kNumerical;
}

int cmd_metrics(const GlobalOptions& g, const MetricArgs& a, std::ostream& out) {
  require(!a.pred.empty() && !a.gt.empty(), ErrorCode::kInvalidArgument, "metrics needs --pred and --gt");
  require(a.max_depth > 0.0, ErrorCode::kInvalidArgument, "--max-depth must be positive");
  const Manifest pred = read_manifest(a.pred);
  const Manifest gt = read_manifest(a.gt);
  require(pred.frames.size() == gt.frames.size(), ErrorCode::kDimensionMismatch,
          "metrics: manifests list different frame counts");
  MetricOptions mo;
  mo.max_depth = a.max_depth;
  mo.median_scaling = a.median_scale;
  MetricAccumulator acc(mo);
  for (std::size_t i = 0; i < gt.frames.size(); ++i) {
    const ManifestFrame& gf = gt.frames[i];
    const ManifestFrame& pf = pred.frames[i];
    const std::string where = "frame " + std::to_string(gf.index);
    require(pf.index == gf.index, ErrorCode::kDimensionMismatch, where + ": prediction manifest is misaligned");
    for (int c = 0; c < kNumCameras; ++c) {
      const auto gi = gf.views[c].find("depth");
      if (gi == gf.views[c].end()) continue;
      const auto pi = pf.views[c].find("depth");
      require(pi != pf.views[c].end(), ErrorCode::kDimensionMismatch,
              where + " " + camera_name(c) + ": no predicted depth");
      const DepthMap gd = read_depth(gt.resolve(gi->second));
      const DepthMap pd = read_depth(pred.resolve(pi->second));
      require(gd.same_shape(pd), ErrorCode::kDimensionMismatch, where + " " + camera_name(c) + ": size differs");
      acc.add(pd, gd);
    }
  }
  write_output(g, acc.report().to_text(), out);
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometry, loss and calibration tools for articulated-vehicle camera rigs", "articugeo"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed for renders, priors and verify suites");
  app.add_option("--out", g.out, "Output directory (render) or file");
  app.add_option("--config", g.config, "Combined JSON config")->check(CLI::ExistingFile);

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Render a synthetic sequence and write its manifest");
  render->add_option("--scene", ra.scene, "Scene JSON");
  render->add_option("--rig", ra.rig, "Rig JSON");
  render->add_option("--trajectory", ra.trajectory, "Trajectory JSON");
  render->add_option("--render", ra.render, "Render settings JSON");

  LossArgs la;
  std::string cv_types;
  auto* losses = app.add_subcommand("losses", "Evaluate every enabled loss term over a manifest");
  losses->add_option("--manifest", la.manifest, "Sequence manifest")->required();
  auto* cv_opt = losses->add_option("--cv-types", cv_types, "Cross-vehicle types, e.g. 0,1,2 or \"\"");
  for (const auto& name : disable_flag_names()) {
    losses->add_flag_callback("--no-" + name, [&la, name] { la.disabled.push_back(name); },
                              "Disable the " + name + " term");
  }
  losses->add_option("--depth-scale", la.depth_scale, "Multiply every evaluated depth map");
  losses->add_option("--calibration", la.calibrations, "FRAME:FILE cross-vehicle transform override");

  CalibrateArgs ca;
  auto* calibrate = app.add_subcommand("calibrate", "Register the rear LiDAR sweep onto the front one");
  calibrate->add_option("--front", ca.front, "Front LiDAR PLY")->required();
  calibrate->add_option("--rear", ca.rear, "Rear LiDAR PLY")->required();
  calibrate->add_option("--icp", ca.icp, "ICP JSON");
  calibrate->add_option("--init", ca.init, "Initial rear-to-front transform file");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("suite", suite, "Suite name or 'all'")->required();

  MetricArgs ma;
  auto* metrics = app.add_subcommand("metrics", "Depth metrics of predicted against ground truth manifests");
  metrics->add_option("--pred", ma.pred, "Prediction manifest")->required();
  metrics->add_option("--gt", ma.gt, "Ground truth manifest")->required();
  metrics->add_option("--max-depth", ma.max_depth, "Evaluation cap in meters");
  metrics->add_flag("--median-scale", ma.median_scale, "Median-scale each prediction");

  for (auto* sub : {render, losses, calibrate, verify, metrics}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (seed_opt->count()) g.seed = seed;

  try {
    if (*render) return cmd_render(g, ra, out);
    if (*losses) {
      if (cv_opt->count()) la.cv_types = parse_cv_types(cv_types);
      return cmd_losses(g, la, out);
    }
    if (*calibrate) return cmd_calibrate(g, ca, out);
    if (*verify) return cmd_verify(g, suite, out);
    if (*metrics) return cmd_metrics(g, ma, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

}  // namespace articugeo::cli
