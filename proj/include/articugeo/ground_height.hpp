#pragma once

// Ground detection from prior normals and camera-height regularization.

#include <cmath>

#include "articugeo/recon_losses.hpp"
#include "articugeo/surface_normal.hpp"

namespace articugeo {

struct GroundParams {
  /// Angular threshold on angle(n_y, N), radians. Default 5 degrees.
  double s_thr = 5.0 * M_PI / 180.0;
  Eigen::Vector3d n_y{0.0, 1.0, 0.0};

  bool is_valid() const { return s_thr > 0.0 && s_thr < M_PI / 2; }
};

/// Pixels whose prior normal (away-from-camera orientation) lies within s_thr
/// of n_y and whose lifted prior point is below the camera (P_y > 0).
PixelMask ground_mask(const NormalMap& prior_normals, const DepthMap& prior_depth,
                      const CameraModel& cam, const GroundParams& params = {});

/// Height of the camera over the local surface: |N . P| per pixel, meters.
template <class S>
struct HeightMap {
  Grid<S> height;
  PixelMask valid;
};

template <class S>
HeightMap<S> height_map(const DepthMapT<S>& est_depth, const NormalMapT<S>& est_normals,
                        const CameraModel& cam) {
  using std::abs;
  require_same_shape(est_depth, est_normals.normals, "height_map");
  require_camera_shape(cam, est_depth.width(), est_depth.height(), "height_map");
  const auto normals = with_orientation(est_normals, NormalOrientation::kAwayFromCamera);
  HeightMap<S> out{Grid<S>(est_depth.width(), est_depth.height(), S(0.0)),
                   PixelMask(est_depth.width(), est_depth.height(), 0)};
  for (int y = 0; y < est_depth.height(); ++y) {
    for (int x = 0; x < est_depth.width(); ++x) {
      const S& d = est_depth(x, y);
      if (!(value_of(d) > 0.0) || !normals.valid(x, y)) continue;
      const Vec3<S> p = cam.ray(S(static_cast<double>(x)), S(static_cast<double>(y))) * d;
      out.height(x, y) = abs(normals.normals(x, y).dot(p));
      out.valid(x, y) = 1;
    }
  }
  return out;
}

/// L_CH: masked mean |h - h_gt| over ground pixels with a valid height.
template <class S>
TermValue<S> loss_ch(const HeightMap<S>& height, const PixelMask& ground, double h_gt) {
  using std::abs;
  require_same_shape(height.height, ground, "loss_ch");
  TermAccumulator<S> acc;
  for (std::size_t i = 0; i < ground.size(); ++i) {
    if (ground[i] && height.valid[i]) acc.add(abs(height.height[i] - h_gt), 1);
  }
  return acc.result();
}

}  // namespace articugeo
