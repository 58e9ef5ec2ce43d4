#pragma once

// Loss evaluation over a multi-frame, ten-camera dataset: enumerates the
// temporal, spatial, spatial-temporal and MVRC contexts of every target view
// and reduces each enabled term into one LossReport.

#include <array>
#include <optional>
#include <set>
#include <vector>

#include "articugeo/ground_height.hpp"
#include "articugeo/pose_consistency.hpp"
#include "articugeo/recon_losses.hpp"
#include "articugeo/rig.hpp"

namespace articugeo {

struct ViewData {
  ImageBuffer image;
  /// Depth under evaluation (estimate or ground truth).
  DepthMap depth;
  /// Pseudo priors; required by PNC, NC and camera height.
  std::optional<DepthMap> prior_depth;
  std::optional<NormalMap> prior_normals;
};

struct FrameData {
  int index = 0;
  /// World <- LiDAR odometry poses of both vehicles.
  SE3Transform front_pose;
  SE3Transform rear_pose;
  /// T_{L_r L_f} for this frame (ICP output or ground truth).
  SE3Transform cross_vehicle;
  std::array<ViewData, kNumCameras> views;
};

struct Dataset {
  RigConfig rig;
  /// Consecutive frames; neighbors are looked up by index.
  std::vector<FrameData> frames;

  const FrameData* frame(int index) const;
};

/// Which contexts and terms to evaluate.
struct ContextToggles {
  bool temporal = true;
  bool within_vehicle = true;
  std::set<int> cv_types{0, 1, 2};
  bool spatiotemporal = true;
  bool mvrc = true;
  bool sdc = true;
  bool smoothness = true;
  bool nc = true;
  bool snc = true;
  bool pnc = true;
  bool camera_height = true;
  bool vpc = true;
};

struct LossOptions {
  ContextToggles contexts;
  LossWeights weights;
  VpcWeights vpc_weights;
  GroundParams ground;
  /// Temporal neighbors tau - t.
  std::vector<int> temporal_offsets{-1, 1};
};

/// One directed spatial context of a target camera.
struct SpatialSource {
  int source_cam = 0;
  bool cross_vehicle = false;
  int cv_type = 0;

  /// "wv", "cv0", "cv1" or "cv2".
  std::string group() const;
};

/// Spatial sources of `target` under the toggles, WV partners first, then CV
/// partners by type, each in table order.
std::vector<SpatialSource> spatial_sources(const RigConfig& rig, int target, const ContextToggles& toggles);

/// RigState of frame tau relative to target frame t: joint motions from the
/// odometry poses, cross-vehicle transform of tau.
RigState frame_state(const FrameData& t, const FrameData& tau);

/// Evaluates every enabled term. Terms without any valid pixel are reported
/// with count 0. Throws kMissingPriors when a prior-based term is enabled and
/// a view lacks priors.
LossReport compute_losses(const Dataset& data, const LossOptions& opts);

}  // namespace articugeo
