#include "articugeo/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace articugeo {

namespace fs = std::filesystem;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path);
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw Error(ErrorCode::kParse, origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

Json load_json(const std::string& path) { return parse_json(read_text_file(path), path); }

ConfigSource load_config_source(const std::string& path) { return {load_json(path), path}; }

std::optional<ConfigSource> config_section(const ConfigSource& combined, const std::string& name) {
  require(combined.value.is_object(), ErrorCode::kParse, combined.origin + ": expected a JSON object");
  const auto it = combined.value.find(name);
  if (it == combined.value.end()) return std::nullopt;
  if (it->is_string()) {
    fs::path p = it->get<std::string>();
    if (p.is_relative()) p = fs::path(combined.origin).parent_path() / p;
    return load_config_source(p.string());
  }
  return ConfigSource{*it, combined.origin + ": /" + name};
}

namespace {

// Typed access to one JSON object with pointer-style error locations and
// unknown-key detection.
class Obj {
 public:
  Obj(const Json& j, std::string origin, std::string path = "")
      : j_(j), origin_(std::move(origin)), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    const std::string where = path_ + (key.empty() ? "" : "/" + key);
    throw Error(ErrorCode::kParse, origin_ + ": " + (where.empty() ? "/" : where) + ": " + msg);
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }

  const Json& at(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double def) {
    if (!has(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
  }

  int integer(const std::string& key, int def) {
    if (!has(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::size_t expected = 0) {
    const Json& v = at(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(key, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    if (expected > 0 && out.size() != expected) {
      fail(key, "expected " + std::to_string(expected) + " numbers, got " + std::to_string(out.size()));
    }
    return out;
  }

  Eigen::Vector3d vec3(const std::string& key, const Eigen::Vector3d& def) {
    if (!has(key)) return def;
    const auto v = numbers(key, 3);
    return {v[0], v[1], v[2]};
  }

  Eigen::Vector2d vec2(const std::string& key, const Eigen::Vector2d& def) {
    if (!has(key)) return def;
    const auto v = numbers(key, 2);
    return {v[0], v[1]};
  }

  SE3Transform transform(const std::string& key) {
    const auto v = numbers(key, 16);
    const SE3Transform t = SE3Transform::from_row_major(std::span<const double, 16>(v.data(), 16));
    if (!t.is_valid(1e-6)) fail(key, "not a rigid transform");
    return t;
  }

  Obj object(const std::string& key) { return Obj(at(key), origin_, path_ + "/" + key); }

  std::string child_path(const std::string& key) const { return path_ + "/" + key; }
  const std::string& origin() const { return origin_; }

  /// Rejects keys that no accessor asked for.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) fail(it.key(), "unknown key");
    }
  }

 private:
  const Json& j_;
  std::string origin_;
  std::string path_;
  std::set<std::string> used_;
};

Json transform_json(const SE3Transform& t) {
  const auto m = t.to_row_major();
  return Json(std::vector<double>(m.begin(), m.end()));
}

Json vec_json(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

std::vector<CameraPair> pairs_from_json(Obj& parent, const std::string& key) {
  const Json& v = parent.at(key);
  std::vector<CameraPair> out;
  if (!v.is_array()) parent.fail(key, "expected an array of camera pairs");
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
      parent.fail(key, "expected pairs like [\"C8\", \"C2\"]");
    }
    try {
      out.emplace_back(parse_camera(e[0].get<std::string>()), parse_camera(e[1].get<std::string>()));
    } catch (const Error& err) {
      parent.fail(key, err.what());
    }
  }
  return out;
}

Json pairs_json(const std::vector<CameraPair>& pairs) {
  Json a = Json::array();
  for (const auto& [i, j] : pairs) a.push_back(Json::array({camera_name(i), camera_name(j)}));
  return a;
}

Texture texture_from_json(Obj& parent, const std::string& key) {
  if (!parent.has(key)) return default_texture();
  const Json& v = parent.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() != "default") parent.fail(key, "the only named texture is \"default\"");
    return default_texture();
  }
  Obj o = parent.object(key);
  Texture t;
  t.base = o.vec3("base", t.base);
  if (o.has("gratings")) {
    const Json& g = o.at("gratings");
    if (!g.is_array()) o.fail("gratings", "expected an array");
    for (std::size_t i = 0; i < g.size(); ++i) {
      Obj go(g[i], o.origin(), o.child_path("gratings") + "/" + std::to_string(i));
      Grating gr;
      gr.wavevector = go.vec3("wavevector", gr.wavevector);
      gr.phase = go.number("phase", 0.0);
      gr.amplitude = go.vec3("amplitude", gr.amplitude);
      go.finish();
      t.gratings.push_back(gr);
    }
  }
  o.finish();
  if (!t.is_valid()) parent.fail(key, "texture leaves [0, 1]");
  return t;
}

Json texture_json(const Texture& t) {
  Json g = Json::array();
  for (const auto& gr : t.gratings) {
    g.push_back({{"wavevector", vec_json(gr.wavevector)}, {"phase", gr.phase}, {"amplitude", vec_json(gr.amplitude)}});
  }
  return {{"base", vec_json(t.base)}, {"gratings", g}};
}

constexpr double kDeg = M_PI / 180.0;

}  // namespace

RigConfig rig_from_json(const Json& j, const std::string& origin) {
  Obj o(j, origin);
  RigLayout layout;
  if (o.has("layout")) {
    Obj l = o.object("layout");
    layout.width = l.integer("width", layout.width);
    layout.height = l.integer("height", layout.height);
    layout.horizontal_fov_deg = l.number("horizontal_fov_deg", layout.horizontal_fov_deg);
    layout.camera_drop = l.number("camera_drop", layout.camera_drop);
    layout.lidar_height = l.number("lidar_height", layout.lidar_height);
    l.finish();
    if (layout.width < 2 || layout.height < 2) o.fail("layout", "raster must be at least 2x2");
    if (!(layout.horizontal_fov_deg > 0.0 && layout.horizontal_fov_deg < 180.0)) {
      o.fail("layout", "horizontal_fov_deg must lie in (0, 180)");
    }
  }
  RigConfig rig = default_rig(layout);
  if (o.has("cameras")) {
    const Json& cams = o.at("cameras");
    if (!cams.is_array() || cams.size() != kNumCameras) o.fail("cameras", "expected 10 cameras");
    std::array<bool, kNumCameras> seen{};
    for (std::size_t i = 0; i < cams.size(); ++i) {
      Obj c(cams[i], origin, "/cameras/" + std::to_string(i));
      int id = -1;
      try {
        id = parse_camera(c.string("name", ""));
      } catch (const Error& e) {
        c.fail("name", e.what());
      }
      if (seen[id]) c.fail("name", "duplicate camera " + camera_name(id));
      seen[id] = true;
      CameraModel cam;
      cam.fx = c.number("fx", 0.0);
      cam.fy = c.number("fy", 0.0);
      cam.cx = c.number("cx", -1.0);
      cam.cy = c.number("cy", -1.0);
      cam.width = c.integer("width", 0);
      cam.height = c.integer("height", 0);
      if (!c.has("extrinsic_to_lidar")) c.fail("extrinsic_to_lidar", "missing");
      cam.extrinsic_to_lidar = c.transform("extrinsic_to_lidar");
      if (!cam.is_valid()) c.fail("", "invalid intrinsics (need fx, fy > 0 and the principal point inside the raster)");
      try {
        rig.vehicles[id] = parse_vehicle(c.string("vehicle", ""));
      } catch (const Error& e) {
        c.fail("vehicle", e.what());
      }
      rig.camera_heights_gt[id] = c.number("height_gt", 0.0);
      if (!(rig.camera_heights_gt[id] > 0.0)) c.fail("height_gt", "must be positive");
      rig.cameras[id] = cam;
      c.finish();
    }
  }
  if (o.has("cross_vehicle_pairs")) {
    Obj p = o.object("cross_vehicle_pairs");
    for (int type = 0; type < 3; ++type) {
      const std::string key = std::to_string(type);
      if (p.has(key)) rig.cv_pairs_override[type] = pairs_from_json(p, key);
    }
    p.finish();
  }
  if (o.has("within_vehicle_pairs")) rig.wv_pairs_override = pairs_from_json(o, "within_vehicle_pairs");
  o.finish();
  try {
    rig.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, origin + ": " + e.what());
  }
  return rig;
}

Json rig_to_json(const RigConfig& rig) {
  Json cams = Json::array();
  for (int c = 0; c < kNumCameras; ++c) {
    const CameraModel& cam = rig.cameras[c];
    cams.push_back({{"name", camera_name(c)},
                    {"fx", cam.fx},
                    {"fy", cam.fy},
                    {"cx", cam.cx},
                    {"cy", cam.cy},
                    {"width", cam.width},
                    {"height", cam.height},
                    {"extrinsic_to_lidar", transform_json(cam.extrinsic_to_lidar)},
                    {"vehicle", to_string(rig.vehicles[c])},
                    {"height_gt", rig.camera_heights_gt[c]}});
  }
  Json j = {{"cameras", cams}};
  Json cv = Json::object();
  for (int t = 0; t < 3; ++t) {
    if (rig.cv_pairs_override[t]) cv[std::to_string(t)] = pairs_json(*rig.cv_pairs_override[t]);
  }
  if (!cv.empty()) j["cross_vehicle_pairs"] = cv;
  if (rig.wv_pairs_override) j["within_vehicle_pairs"] = pairs_json(*rig.wv_pairs_override);
  return j;
}

Scene scene_from_json(const Json& j, const std::string& origin) {
  Obj o(j, origin);
  const std::string preset = o.string("preset", "smooth_room");
  Scene s;
  if (preset == "smooth_room") {
    s = smooth_room_scene();
  } else if (preset == "room") {
    s = room_scene();
  } else if (preset == "ground") {
    s = ground_scene();
  } else if (preset != "empty") {
    o.fail("preset", "unknown preset '" + preset + "' (smooth_room, room, ground, empty)");
  }
  s.max_range = o.number("max_range", s.max_range);
  if (o.has("ground")) {
    const Json& g = o.at("ground");
    if (g.is_null()) {
      s.ground.reset();
    } else {
      Obj go = o.object("ground");
      GroundPlane gp;
      gp.height = go.number("height", 0.0);
      gp.texture = texture_from_json(go, "texture");
      go.finish();
      s.ground = gp;
    }
  }
  if (o.has("room")) {
    const Json& r = o.at("room");
    if (r.is_null()) {
      s.room.reset();
    } else {
      Obj ro = o.object("room");
      RoundedRoom room;
      room.min = ro.vec3("min", room.min);
      room.max = ro.vec3("max", room.max);
      room.radius = ro.number("radius", room.radius);
      room.texture = texture_from_json(ro, "texture");
      ro.finish();
      s.room = room;
    }
  }
  if (o.has("walls")) {
    const Json& w = o.at("walls");
    if (!w.is_array()) o.fail("walls", "expected an array");
    s.walls.clear();
    for (std::size_t i = 0; i < w.size(); ++i) {
      Obj wo(w[i], origin, "/walls/" + std::to_string(i));
      Wall wall;
      wall.point = wo.vec2("point", wall.point);
      wall.normal = wo.vec2("normal", wall.normal);
      wall.z_min = wo.number("z_min", wall.z_min);
      wall.z_max = wo.number("z_max", wall.z_max);
      wall.texture = texture_from_json(wo, "texture");
      wo.finish();
      s.walls.push_back(wall);
    }
  }
  if (o.has("boxes")) {
    const Json& b = o.at("boxes");
    if (!b.is_array()) o.fail("boxes", "expected an array");
    s.boxes.clear();
    for (std::size_t i = 0; i < b.size(); ++i) {
      Obj bo(b[i], origin, "/boxes/" + std::to_string(i));
      Box box;
      box.min = bo.vec3("min", box.min);
      box.max = bo.vec3("max", box.max);
      box.texture = texture_from_json(bo, "texture");
      bo.finish();
      s.boxes.push_back(box);
    }
  }
  o.finish();
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, origin + ": " + e.what());
  }
  return s;
}

Json scene_to_json(const Scene& s) {
  Json j = {{"preset", "empty"}, {"max_range", s.max_range}};
  if (s.ground) j["ground"] = {{"height", s.ground->height}, {"texture", texture_json(s.ground->texture)}};
  if (s.room) {
    j["room"] = {{"min", vec_json(s.room->min)},
                 {"max", vec_json(s.room->max)},
                 {"radius", s.room->radius},
                 {"texture", texture_json(s.room->texture)}};
  }
  Json walls = Json::array();
  for (const auto& w : s.walls) {
    walls.push_back({{"point", Json::array({w.point.x(), w.point.y()})},
                     {"normal", Json::array({w.normal.x(), w.normal.y()})},
                     {"z_min", w.z_min},
                     {"z_max", w.z_max},
                     {"texture", texture_json(w.texture)}});
  }
  j["walls"] = walls;
  Json boxes = Json::array();
  for (const auto& b : s.boxes) {
    boxes.push_back({{"min", vec_json(b.min)}, {"max", vec_json(b.max)}, {"texture", texture_json(b.texture)}});
  }
  j["boxes"] = boxes;
  return j;
}

TrajectorySpec trajectory_from_json(const Json& j, const std::string& origin) {
  Obj o(j, origin);
  TrajectorySpec t;
  t.frames = o.integer("frames", t.frames);
  t.speed = o.number("speed", t.speed);
  t.yaw_rate = o.number("yaw_rate_deg", t.yaw_rate / kDeg) * kDeg;
  t.start_x = o.number("start_x", t.start_x);
  t.start_y = o.number("start_y", t.start_y);
  t.start_yaw = o.number("start_yaw_deg", t.start_yaw / kDeg) * kDeg;
  t.lidar_height = o.number("lidar_height", t.lidar_height);
  t.articulation_start = o.number("articulation_start_deg", t.articulation_start / kDeg) * kDeg;
  t.articulation_swing = o.number("articulation_swing_deg", t.articulation_swing / kDeg) * kDeg;
  if (o.has("hinge")) {
    Obj h = o.object("hinge");
    t.hinge.front_arm = h.number("front_arm", t.hinge.front_arm);
    t.hinge.rear_arm = h.number("rear_arm", t.hinge.rear_arm);
    h.finish();
  }
  o.finish();
  if (t.frames <= 0) o.fail("frames", "must be positive");
  return t;
}

Json trajectory_to_json(const TrajectorySpec& t) {
  return {{"frames", t.frames},
          {"speed", t.speed},
          {"yaw_rate_deg", t.yaw_rate / kDeg},
          {"start_x", t.start_x},
          {"start_y", t.start_y},
          {"start_yaw_deg", t.start_yaw / kDeg},
          {"lidar_height", t.lidar_height},
          {"articulation_start_deg", t.articulation_start / kDeg},
          {"articulation_swing_deg", t.articulation_swing / kDeg},
          {"hinge", {{"front_arm", t.hinge.front_arm}, {"rear_arm", t.hinge.rear_arm}}}};
}

RenderSettings render_settings_from_json(const Json& j, const std::string& origin) {
  Obj o(j, origin);
  RenderSettings r;
  if (o.has("priors")) {
    Obj p = o.object("priors");
    r.priors.depth_scale = p.number("depth_scale", r.priors.depth_scale);
    r.priors.normal_noise_deg = p.number("normal_noise_deg", r.priors.normal_noise_deg);
    p.finish();
    if (!(r.priors.depth_scale > 0.0)) o.fail("priors", "depth_scale must be positive");
    if (!(r.priors.normal_noise_deg >= 0.0)) o.fail("priors", "normal_noise_deg must be non-negative");
  }
  if (o.has("lidar")) {
    Obj l = o.object("lidar");
    r.lidar = l.boolean("enabled", r.lidar);
    r.lidar_noise = l.number("noise_sigma", r.lidar_noise);
    r.pattern.n_azimuth = l.integer("n_azimuth", r.pattern.n_azimuth);
    if (l.has("elevations_deg")) r.pattern.elevations_deg = l.numbers("elevations_deg");
    r.pattern.azimuth_min_deg = l.number("azimuth_min_deg", r.pattern.azimuth_min_deg);
    r.pattern.azimuth_max_deg = l.number("azimuth_max_deg", r.pattern.azimuth_max_deg);
    r.pattern.jitter = l.boolean("jitter", r.pattern.jitter);
    l.finish();
    if (!r.pattern.is_valid()) o.fail("lidar", "invalid scan pattern");
    if (!(r.lidar_noise >= 0.0)) o.fail("lidar", "noise_sigma must be non-negative");
  }
  o.finish();
  return r;
}

LossOptions loss_options_from_json(const Json& j, const std::string& origin) {
  Obj o(j, origin);
  LossOptions opts;
  if (o.has("weights")) {
    Obj w = o.object("weights");
    LossWeights& lw = opts.weights;
    lw.temporal = w.number("temporal", lw.temporal);
    lw.spatial = w.number("spatial", lw.spatial);
    lw.spatiotemporal = w.number("spatiotemporal", lw.spatiotemporal);
    lw.mvrc = w.number("mvrc", lw.mvrc);
    lw.sdc = w.number("sdc", lw.sdc);
    lw.smoothness = w.number("smoothness", lw.smoothness);
    lw.nc = w.number("nc", lw.nc);
    lw.snc = w.number("snc", lw.snc);
    lw.pnc = w.number("pnc", lw.pnc);
    lw.camera_height = w.number("camera_height", lw.camera_height);
    lw.vpc = w.number("vpc", lw.vpc);
    lw.alpha = w.number("alpha", lw.alpha);
    w.finish();
    if (!lw.is_valid()) o.fail("weights", "weights must be non-negative and alpha in [0, 1]");
  }
  if (o.has("vpc_weights")) {
    Obj w = o.object("vpc_weights");
    opts.vpc_weights.rotation = w.number("rotation", opts.vpc_weights.rotation);
    opts.vpc_weights.translation = w.number("translation", opts.vpc_weights.translation);
    w.finish();
    if (!opts.vpc_weights.is_valid()) o.fail("vpc_weights", "weights must be non-negative");
  }
  if (o.has("ground")) {
    Obj g = o.object("ground");
    opts.ground.s_thr = g.number("s_thr_deg", opts.ground.s_thr / kDeg) * kDeg;
    g.finish();
    if (!opts.ground.is_valid()) o.fail("ground", "s_thr_deg must lie in (0, 90)");
  }
  if (o.has("contexts")) {
    Obj c = o.object("contexts");
    ContextToggles& t = opts.contexts;
    t.temporal = c.boolean("temporal", t.temporal);
    t.within_vehicle = c.boolean("within_vehicle", t.within_vehicle);
    if (c.has("cv_types")) {
      t.cv_types.clear();
      for (double v : c.numbers("cv_types")) {
        if (v != 0.0 && v != 1.0 && v != 2.0) c.fail("cv_types", "types are 0, 1 and 2");
        t.cv_types.insert(static_cast<int>(v));
      }
    }
    t.spatiotemporal = c.boolean("spatiotemporal", t.spatiotemporal);
    t.mvrc = c.boolean("mvrc", t.mvrc);
    t.sdc = c.boolean("sdc", t.sdc);
    t.smoothness = c.boolean("smoothness", t.smoothness);
    t.nc = c.boolean("nc", t.nc);
    t.snc = c.boolean("snc", t.snc);
    t.pnc = c.boolean("pnc", t.pnc);
    t.camera_height = c.boolean("camera_height", t.camera_height);
    t.vpc = c.boolean("vpc", t.vpc);
    c.finish();
  }
  if (o.has("temporal_offsets")) {
    opts.temporal_offsets.clear();
    for (double v : o.numbers("temporal_offsets")) {
      if (v == 0.0 || v != std::round(v)) o.fail("temporal_offsets", "offsets are nonzero integers");
      opts.temporal_offsets.push_back(static_cast<int>(v));
    }
  }
  o.finish();
  return opts;
}

IcpConfig default_calibration_icp() {
  IcpConfig cfg;
  cfg.refine_dists = {0.5, 0.25, 0.125, 0.0625};
  return cfg;
}

IcpConfig icp_config_from_json(const Json& j, const std::string& origin) {
  Obj o(j, origin);
  IcpConfig cfg = default_calibration_icp();
  cfg.max_iterations = o.integer("max_iterations", cfg.max_iterations);
  cfg.convergence_eps = o.number("convergence_eps", cfg.convergence_eps);
  cfg.max_correspondence_dist = o.number("max_correspondence_dist", cfg.max_correspondence_dist);
  if (o.has("refine_dists")) cfg.refine_dists = o.numbers("refine_dists");
  if (o.has("initial_guess")) cfg.initial_guess = o.transform("initial_guess");
  o.finish();
  if (!cfg.is_valid()) {
    o.fail("", "invalid ICP settings (positive limits, refine_dists strictly decreasing below max_correspondence_dist)");
  }
  return cfg;
}

VerifyTolerances verify_tolerances_from_json(const Json& j, const std::string& origin) {
  Obj o(j, origin);
  VerifyTolerances t;
  t.geometry_rel = o.number("geometry_rel", t.geometry_rel);
  t.group_abs = o.number("group_abs", t.group_abs);
  t.warp_identity = o.number("warp_identity", t.warp_identity);
  t.loss_exact = o.number("loss_exact", t.loss_exact);
  t.closure_frames = o.integer("closure_frames", t.closure_frames);
  t.closure_loss = o.number("closure_loss", t.closure_loss);
  t.closure_runtime_s = o.number("closure_runtime_s", t.closure_runtime_s);
  t.equivariance_deg = o.number("equivariance_deg", t.equivariance_deg);
  t.c1_agreement_deg = o.number("c1_agreement_deg", t.c1_agreement_deg);
  t.step_band_px = o.integer("step_band_px", t.step_band_px);
  t.gt_normal_deg = o.number("gt_normal_deg", t.gt_normal_deg);
  t.unit_norm = o.number("unit_norm", t.unit_norm);
  t.ch_scale_rel = o.number("ch_scale_rel", t.ch_scale_rel);
  t.normal_scale_change = o.number("normal_scale_change", t.normal_scale_change);
  t.ch_flat_ground_rel = o.number("ch_flat_ground_rel", t.ch_flat_ground_rel);
  t.ground_mask_coverage = o.number("ground_mask_coverage", t.ground_mask_coverage);
  t.ground_mask_false_positive = o.number("ground_mask_false_positive", t.ground_mask_false_positive);
  t.vpc_identity = o.number("vpc_identity", t.vpc_identity);
  t.vpc_loss = o.number("vpc_loss", t.vpc_loss);
  t.vpc_linear = o.number("vpc_linear", t.vpc_linear);
  t.icp_trials = o.integer("icp_trials", t.icp_trials);
  t.icp_noise_m = o.number("icp_noise_m", t.icp_noise_m);
  t.icp_overlap = o.number("icp_overlap", t.icp_overlap);
  t.icp_overlap_slack = o.number("icp_overlap_slack", t.icp_overlap_slack);
  t.icp_init_rot_deg = o.number("icp_init_rot_deg", t.icp_init_rot_deg);
  t.icp_init_trans_m = o.number("icp_init_trans_m", t.icp_init_trans_m);
  t.icp_rot_deg = o.number("icp_rot_deg", t.icp_rot_deg);
  t.icp_trans_m = o.number("icp_trans_m", t.icp_trans_m);
  t.icp_exact = o.number("icp_exact", t.icp_exact);
  t.grad_samples = o.integer("grad_samples", t.grad_samples);
  t.grad_rel = o.number("grad_rel", t.grad_rel);
  t.grad_step_rel = o.number("grad_step_rel", t.grad_step_rel);
  t.grad_boundary_px = o.number("grad_boundary_px", t.grad_boundary_px);
  t.metrics_exact = o.number("metrics_exact", t.metrics_exact);
  t.closure_states = o.integer("closure_states", t.closure_states);
  t.render_plane_depth = o.number("render_plane_depth", t.render_plane_depth);
  t.render_reprojection_m = o.number("render_reprojection_m", t.render_reprojection_m);
  t.prior_noise_deg = o.number("prior_noise_deg", t.prior_noise_deg);
  if (o.has("seed")) {
    const Json& s = o.at("seed");
    if (!s.is_number_unsigned()) o.fail("seed", "expected a non-negative integer");
    t.seed = s.get<std::uint64_t>();
  }
  o.finish();
  if (t.closure_frames < 3) o.fail("closure_frames", "need at least 3 frames");
  if (t.icp_trials < 1 || t.grad_samples < 1 || t.closure_states < 1) {
    o.fail("", "trial and sample counts must be positive");
  }
  return t;
}

SE3Transform parse_transform_text(const std::string& text, const std::string& origin) {
  auto make = [&](const std::vector<double>& vals, const std::string& where) {
    const SE3Transform t = SE3Transform::from_row_major(std::span<const double, 16>(vals.data(), 16));
    require(t.is_valid(1e-6), ErrorCode::kParse, where + ": not a rigid transform");
    return t;
  };
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<double> bare;
  bool bare_ok = true;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (first == "transform") {
      std::vector<double> vals;
      double v;
      while (ls >> v) vals.push_back(v);
      require(vals.size() == 16 && ls.eof(), ErrorCode::kParse, where + ": 'transform' needs 16 numbers");
      return make(vals, where);
    }
    // Otherwise the whole file may be 16 bare numbers.
    std::istringstream all(line);
    double v;
    while (all >> v) bare.push_back(v);
    if (!all.eof()) bare_ok = false;
  }
  require(bare_ok && bare.size() == 16, ErrorCode::kParse,
          origin + ": expected a 'transform' line or 16 numbers");
  return make(bare, origin);
}

SE3Transform read_transform_file(const std::string& path) {
  return parse_transform_text(read_text_file(path), path);
}

}  // namespace articugeo
