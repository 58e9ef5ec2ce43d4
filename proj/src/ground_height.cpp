#include "articugeo/ground_height.hpp"

namespace articugeo {

PixelMask ground_mask(const NormalMap& prior_normals, const DepthMap& prior_depth,
                      const CameraModel& cam, const GroundParams& params) {
  require(params.is_valid(), ErrorCode::kInvalidArgument, "ground_mask: s_thr outside (0, pi/2)");
  require_same_shape(prior_normals.normals, prior_depth, "ground_mask");
  require_camera_shape(cam, prior_depth.width(), prior_depth.height(), "ground_mask");
  const NormalMap raw = with_orientation(prior_normals, NormalOrientation::kAwayFromCamera);
  const Eigen::Vector3d ny = params.n_y.normalized();
  const double cos_thr = std::cos(params.s_thr);
  PixelMask mask(prior_depth.width(), prior_depth.height(), 0);
  for (int y = 0; y < prior_depth.height(); ++y) {
    for (int x = 0; x < prior_depth.width(); ++x) {
      const double d = prior_depth(x, y);
      if (!(d > 0.0) || !raw.valid(x, y)) continue;
      const Eigen::Vector3d& n = raw.normals(x, y);
      const double len = n.norm();
      if (!(len > 0.0)) continue;
      // angle < s_thr  <=>  cos(angle) > cos(s_thr) on [0, pi].
      if (!(ny.dot(n) / len > cos_thr)) continue;
      const Point3 p = cam.ray(static_cast<double>(x), static_cast<double>(y)) * d;
      if (p.y() > 0.0) mask(x, y) = 1;
    }
  }
  return mask;
}

}  // namespace articugeo
