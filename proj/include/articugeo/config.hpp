#pragma once

// JSON configuration for rigs, scenes, trajectories, rendering, losses, ICP
// and verification tolerances.
//
// Every loader rejects unknown keys and reports problems as kParse errors of
// the form "<origin>: <json pointer>: <message>"; syntax errors carry
// "<origin>:<line>:<column>". A combined config file holds any of the
// sections rig, scene, trajectory, render, losses, icp and verify, each either
// inline or as a path relative to the combined file.

#include <optional>
#include <string>

#include <json.hpp>

#include "articugeo/calib_icp.hpp"
#include "articugeo/pipeline.hpp"
#include "articugeo/synth_world.hpp"
#include "articugeo/synthetic_dataset.hpp"
#include "articugeo/verify.hpp"

namespace articugeo {

using Json = nlohmann::json;

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json parse_json(const std::string& text, const std::string& origin);
Json load_json(const std::string& path);

/// A JSON value with the name it came from, for error messages.
struct ConfigSource {
  Json value;
  std::string origin;
};

ConfigSource load_config_source(const std::string& path);

/// Section of a combined config. A string value is loaded as a path relative
/// to the combined file. Returns nullopt when the section is absent.
std::optional<ConfigSource> config_section(const ConfigSource& combined, const std::string& name);

/// Without "cameras" the built-in rig is generated from the optional "layout".
RigConfig rig_from_json(const Json& j, const std::string& origin);
/// Explicit form with all ten cameras.
Json rig_to_json(const RigConfig& rig);

/// "preset" (smooth_room, room, ground, empty) seeds the scene; explicit
/// ground/room/walls/boxes entries replace the preset's.
Scene scene_from_json(const Json& j, const std::string& origin);
Json scene_to_json(const Scene& scene);

TrajectorySpec trajectory_from_json(const Json& j, const std::string& origin);
Json trajectory_to_json(const TrajectorySpec& spec);

struct RenderSettings {
  SyntheticPriors priors;
  bool lidar = true;
  LidarPattern pattern;
  double lidar_noise = 0.01;
};

RenderSettings render_settings_from_json(const Json& j, const std::string& origin);

LossOptions loss_options_from_json(const Json& j, const std::string& origin);

IcpConfig icp_config_from_json(const Json& j, const std::string& origin);
/// Gate schedule used by the calibrate command when the config names none.
IcpConfig default_calibration_icp();

VerifyTolerances verify_tolerances_from_json(const Json& j, const std::string& origin);

/// Transform file: a line `transform m00 ... m33` (other lines ignored), or
/// just 16 numbers.
SE3Transform parse_transform_text(const std::string& text, const std::string& origin);
SE3Transform read_transform_file(const std::string& path);

}  // namespace articugeo
