#pragma once

// Text manifest tying a rendered or recorded sequence to its files.
//
//   articugeo-manifest 1
//   rig rig.json
//   frame 0
//   front_pose m00 ... m33
//   rear_pose m00 ... m33
//   cross_vehicle m00 ... m33
//   cloud front|rear path
//   view C5 image|depth|normals|normals_mask|ground|prior_depth|prior_normals|prior_normals_mask path
//
// Paths are relative to the manifest's directory. '#' starts a comment line.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "articugeo/pipeline.hpp"

namespace articugeo {

/// File kinds a view may list.
const std::vector<std::string>& view_file_kinds();

struct ManifestFrame {
  int index = 0;
  SE3Transform front_pose;
  SE3Transform rear_pose;
  SE3Transform cross_vehicle;
  std::optional<std::string> cloud_front;
  std::optional<std::string> cloud_rear;
  /// Per camera: kind -> relative path.
  std::array<std::map<std::string, std::string>, kNumCameras> views;
};

struct Manifest {
  /// Directory the relative paths resolve against.
  std::string directory;
  std::string rig_file;
  std::vector<ManifestFrame> frames;

  std::string resolve(const std::string& relative) const;
  const ManifestFrame* frame(int index) const;
};

/// Throws kParse with "<origin>:<line>: message".
Manifest parse_manifest(const std::string& text, const std::string& origin, const std::string& directory);
Manifest read_manifest(const std::string& path);
std::string format_manifest(const Manifest& m);
void write_manifest(const std::string& path, const Manifest& m);

/// Reads the rig and every view's image and depth; priors too when
/// `with_priors` and listed. Throws kIo, kParse or kDimensionMismatch.
Dataset load_dataset(const Manifest& m, bool with_priors = true);

}  // namespace articugeo
