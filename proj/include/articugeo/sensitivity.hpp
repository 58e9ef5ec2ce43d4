#pragma once

// Depth sensitivity of single-pair losses. The loss kernels are evaluated on
// forward-mode dual numbers to get exact directional derivatives; central
// differences on plain doubles serve as the independent cross-check.

#include <string>
#include <vector>

#include <ceres/jet.h>

#include "articugeo/surface_normal.hpp"

namespace articugeo {

using Dual = ceres::Jet<double, 1>;

enum class SensitivityLoss { kPhotometric, kNc, kSnc, kPncSpatial };

const char* to_string(SensitivityLoss loss);
/// "pe", "nc", "snc", "pnc_s". Throws kInvalidArgument.
SensitivityLoss parse_sensitivity_loss(const std::string& name);
std::vector<SensitivityLoss> all_sensitivity_losses();

/// One target/source pair. Only the target depth is the free variable.
struct SensitivityProblem {
  CameraModel target_cam;
  CameraModel source_cam;
  SE3Transform target_to_source;
  ImageBuffer target_image;
  ImageBuffer source_image;
  /// Estimated normals of the source view (SNC).
  NormalMap source_normals;
  /// Pseudo normals of both views (NC, PNC).
  NormalMap target_prior;
  NormalMap source_prior;
  double alpha = 0.85;
};

/// The loss as a function of target depth.
template <class S>
TermValue<S> sensitivity_loss(const SensitivityProblem& p, SensitivityLoss loss, const DepthMapT<S>& depth) {
  switch (loss) {
    case SensitivityLoss::kPhotometric: {
      const auto warped = warp_image(p.target_cam, p.source_cam, depth, p.target_to_source, p.source_image);
      return loss_spatial(p.target_image, warped, p.alpha);
    }
    case SensitivityLoss::kNc: {
      const auto est = normal_from_depth(depth, p.target_cam);
      return nc(est, p.target_prior, PixelMask(depth.width(), depth.height(), 1));
    }
    case SensitivityLoss::kSnc: {
      const auto est = normal_from_depth(depth, p.target_cam);
      return loss_snc(est, p.source_normals, depth, p.target_to_source, p.target_cam, p.source_cam);
    }
    case SensitivityLoss::kPncSpatial: {
      const auto r = reconstruct_normals(p.source_prior, depth, p.target_to_source, p.target_cam, p.source_cam);
      return loss_pnc_spatial(r, p.target_prior);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "sensitivity_loss: unknown loss");
}

double loss_value(const SensitivityProblem& p, SensitivityLoss loss, const DepthMap& depth);

/// d/de L(depth + e * direction) at e = 0, exact up to rounding.
double directional_derivative(const SensitivityProblem& p, SensitivityLoss loss, const DepthMap& depth,
                              const DepthMap& direction);

/// (L(depth + h * direction) - L(depth - h * direction)) / 2h.
double central_difference(const SensitivityProblem& p, SensitivityLoss loss, const DepthMap& depth,
                           const DepthMap& direction, double step);

/// Distance, in pixels, from the correspondence of target pixel (x, y) to the
/// nearest bilinear cell boundary in the source view. Negative when the pixel
/// has no valid correspondence.
double cell_boundary_distance(const SensitivityProblem& p, const DepthMap& depth, int x, int y);

}  // namespace articugeo
