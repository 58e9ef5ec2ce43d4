#pragma once

// Builds an in-memory Dataset straight from the synthetic world, with ground
// truth depth, odometry and cross-vehicle transforms.

#include "articugeo/pipeline.hpp"
#include "articugeo/synth_world.hpp"

namespace articugeo {

struct SyntheticPriors {
  double depth_scale = 1.0;
  double normal_noise_deg = 0.0;
  std::uint64_t seed = 0;
};

/// Per-raster prior stream id, shared with the render command.
inline std::uint64_t prior_stream(int frame, int cam) {
  return static_cast<std::uint64_t>(frame) * kNumCameras + static_cast<std::uint64_t>(cam);
}

Dataset make_synthetic_dataset(const Scene& scene, const RigConfig& rig, const Trajectory& traj,
                               const SyntheticPriors& priors = {});

}  // namespace articugeo
