#include "articugeo/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "articugeo/config.hpp"
#include "articugeo/raster_io.hpp"

namespace articugeo {

namespace fs = std::filesystem;

namespace {

constexpr const char* kHeader = "articugeo-manifest";

std::string transform_line(const char* key, const SE3Transform& t) {
  std::string out = key;
  char buf[64];
  for (double v : t.to_row_major()) {
    std::snprintf(buf, sizeof(buf), " %.17g", v);
    out += buf;
  }
  return out + "\n";
}

}  // namespace

const std::vector<std::string>& view_file_kinds() {
  static const std::vector<std::string> kinds{"image",  "depth",       "normals",       "normals_mask",
                                              "ground", "prior_depth", "prior_normals", "prior_normals_mask"};
  return kinds;
}

std::string Manifest::resolve(const std::string& relative) const {
  const fs::path p(relative);
  if (p.is_absolute() || directory.empty()) return p.string();
  return (fs::path(directory) / p).string();
}

const ManifestFrame* Manifest::frame(int index) const {
  for (const auto& f : frames) {
    if (f.index == index) return &f;
  }
  return nullptr;
}

Manifest parse_manifest(const std::string& text, const std::string& origin, const std::string& directory) {
  Manifest m;
  m.directory = directory;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = false;
  // Which transforms the current frame has seen.
  std::array<bool, 3> have{};
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorCode::kParse, origin + ":" + std::to_string(lineno) + ": " + msg);
  };
  auto close_frame = [&]() {
    if (m.frames.empty()) return;
    if (!have[0] || !have[1] || !have[2]) {
      fail("frame " + std::to_string(m.frames.back().index) + " lacks front_pose, rear_pose or cross_vehicle");
    }
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    if (!header) {
      int version = 0;
      if (key != kHeader || !(ls >> version) || version != 1) fail("expected 'articugeo-manifest 1'");
      header = true;
      continue;
    }
    if (key == "rig") {
      if (!(ls >> m.rig_file)) fail("rig needs a path");
    } else if (key == "frame") {
      close_frame();
      ManifestFrame f;
      if (!(ls >> f.index) || f.index < 0) fail("frame needs a non-negative index");
      if (m.frame(f.index)) fail("duplicate frame " + std::to_string(f.index));
      if (!m.frames.empty() && f.index != m.frames.back().index + 1) fail("frames must be consecutive");
      m.frames.push_back(f);
      have = {};
    } else if (key == "front_pose" || key == "rear_pose" || key == "cross_vehicle") {
      if (m.frames.empty()) fail(key + " before any frame");
      std::vector<double> v;
      double x;
      while (ls >> x) v.push_back(x);
      if (v.size() != 16 || !ls.eof()) fail(key + " needs 16 numbers");
      const SE3Transform t = SE3Transform::from_row_major(std::span<const double, 16>(v.data(), 16));
      if (!t.is_valid(1e-6)) fail(key + " is not a rigid transform");
      ManifestFrame& f = m.frames.back();
      const int slot = key == "front_pose" ? 0 : key == "rear_pose" ? 1 : 2;
      if (have[slot]) fail("duplicate " + key);
      have[slot] = true;
      (slot == 0 ? f.front_pose : slot == 1 ? f.rear_pose : f.cross_vehicle) = t;
    } else if (key == "cloud") {
      if (m.frames.empty()) fail("cloud before any frame");
      std::string which, path;
      if (!(ls >> which >> path)) fail("cloud needs 'front|rear path'");
      if (which == "front") {
        m.frames.back().cloud_front = path;
      } else if (which == "rear") {
        m.frames.back().cloud_rear = path;
      } else {
        fail("cloud vehicle must be front or rear");
      }
    } else if (key == "view") {
      if (m.frames.empty()) fail("view before any frame");
      std::string cam, kind, path;
      if (!(ls >> cam >> kind >> path)) fail("view needs 'Ck kind path'");
      int c = 0;
      try {
        c = parse_camera(cam);
      } catch (const Error& e) {
        fail(e.what());
      }
      const auto& kinds = view_file_kinds();
      if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) fail("unknown view file kind '" + kind + "'");
      auto& files = m.frames.back().views[c];
      if (files.count(kind)) fail("duplicate " + cam + " " + kind);
      files[kind] = path;
    } else {
      fail("unknown key '" + key + "'");
    }
    std::string extra;
    if (key != "front_pose" && key != "rear_pose" && key != "cross_vehicle" && (ls >> extra)) {
      fail("trailing text '" + extra + "'");
    }
  }
  if (!header) throw Error(ErrorCode::kParse, origin + ": empty manifest");
  close_frame();
  if (m.rig_file.empty()) throw Error(ErrorCode::kParse, origin + ": missing 'rig' line");
  if (m.frames.empty()) throw Error(ErrorCode::kParse, origin + ": no frames");
  return m;
}

Manifest read_manifest(const std::string& path) {
  return parse_manifest(read_text_file(path), path, fs::path(path).parent_path().string());
}

std::string format_manifest(const Manifest& m) {
  std::string out = std::string(kHeader) + " 1\nrig " + m.rig_file + "\n";
  for (const auto& f : m.frames) {
    out += "frame " + std::to_string(f.index) + "\n";
    out += transform_line("front_pose", f.front_pose);
    out += transform_line("rear_pose", f.rear_pose);
    out += transform_line("cross_vehicle", f.cross_vehicle);
    if (f.cloud_front) out += "cloud front " + *f.cloud_front + "\n";
    if (f.cloud_rear) out += "cloud rear " + *f.cloud_rear + "\n";
    for (int c = 0; c < kNumCameras; ++c) {
      for (const auto& kind : view_file_kinds()) {
        const auto it = f.views[c].find(kind);
        if (it != f.views[c].end()) out += "view " + camera_name(c) + " " + kind + " " + it->second + "\n";
      }
    }
  }
  return out;
}

void write_manifest(const std::string& path, const Manifest& m) { write_text_file(path, format_manifest(m)); }

Dataset load_dataset(const Manifest& m, bool with_priors) {
  Dataset data;
  const std::string rig_path = m.resolve(m.rig_file);
  data.rig = rig_from_json(load_json(rig_path), rig_path);
  for (const auto& mf : m.frames) {
    FrameData f;
    f.index = mf.index;
    f.front_pose = mf.front_pose;
    f.rear_pose = mf.rear_pose;
    f.cross_vehicle = mf.cross_vehicle;
    for (int c = 0; c < kNumCameras; ++c) {
      const auto& files = mf.views[c];
      const std::string where = "frame " + std::to_string(mf.index) + " " + camera_name(c);
      auto path_of = [&](const std::string& kind) -> std::optional<std::string> {
        const auto it = files.find(kind);
        if (it == files.end()) return std::nullopt;
        return m.resolve(it->second);
      };
      const auto image = path_of("image");
      const auto depth = path_of("depth");
      require(image && depth, ErrorCode::kParse, where + ": view needs image and depth");
      ViewData& v = f.views[c];
      v.image = read_image(*image);
      v.depth = read_depth(*depth);
      const CameraModel& cam = data.rig.cameras[c];
      require(v.depth.width() == cam.width && v.depth.height() == cam.height && v.image.same_extent(v.depth),
              ErrorCode::kDimensionMismatch, where + ": raster size differs from the rig");
      if (!with_priors) continue;
      if (const auto pd = path_of("prior_depth")) {
        v.prior_depth = read_depth(*pd);
        require(v.prior_depth->same_shape(v.depth), ErrorCode::kDimensionMismatch, where + ": prior depth size");
      }
      if (const auto pn = path_of("prior_normals")) {
        PixelMask valid;
        if (const auto pm = path_of("prior_normals_mask")) valid = read_mask(*pm);
        v.prior_normals = read_normals(*pn, valid);
        require(v.prior_normals->normals.same_shape(v.depth), ErrorCode::kDimensionMismatch,
                where + ": prior normals size");
      }
    }
    data.frames.push_back(std::move(f));
  }
  return data;
}

}  // namespace articugeo
