#pragma once

// Surface normals from depth, normal consistency (NC), cross-view normal
// reprojection and the SNC / PNC losses built on it.

#include <cmath>
#include <vector>

#include "articugeo/recon_losses.hpp"
#include "articugeo/warping.hpp"

namespace articugeo {

/// N(p) = (PP^x x PP^y) / ||.|| from the right and down neighbors. The last
/// row and column are invalid, as is any pixel whose stencil touches an invalid
/// depth or whose cross product is shorter than 1e-12.
template <class S>
NormalMapT<S> normal_from_depth(const DepthMapT<S>& depth, const CameraModel& cam,
                                NormalOrientation orientation = NormalOrientation::kTowardCamera) {
  using std::sqrt;
  require_camera_shape(cam, depth.width(), depth.height(), "normal_from_depth");
  const int w = depth.width();
  const int h = depth.height();
  NormalMapT<S> out(w, h, orientation);
  parallel_rows(h - 1, [&](int y) {
    for (int x = 0; x + 1 < w; ++x) {
      const S& d = depth(x, y);
      const S& dx = depth(x + 1, y);
      const S& dy = depth(x, y + 1);
      if (!(value_of(d) > 0.0 && value_of(dx) > 0.0 && value_of(dy) > 0.0)) continue;
      const double fx = x, fy = y;
      const Vec3<S> p = cam.ray(S(fx), S(fy)) * d;
      const Vec3<S> vx = cam.ray(S(fx + 1.0), S(fy)) * dx - p;
      const Vec3<S> vy = cam.ray(S(fx), S(fy + 1.0)) * dy - p;
      Vec3<S> n = vx.cross(vy);
      const S len = sqrt(n.squaredNorm());
      if (!(value_of(len) > 1e-12)) continue;
      n = n / len;
      if (orientation == NormalOrientation::kTowardCamera && value_of(n.dot(p)) > 0.0) n = -n;
      out.normals(x, y) = n;
      out.valid(x, y) = 1;
    }
  });
  return out;
}

/// Per-pixel 1 - |a . b| on mask & a.valid & b.valid.
template <class SA, class SB>
auto nc_map(const NormalMapT<SA>& a, const NormalMapT<SB>& b, const PixelMask& mask) {
  using std::abs;
  using S = decltype(SA(0.0) * SB(0.0));
  require_same_shape(a.normals, b.normals, "nc");
  require_same_shape(a.normals, mask, "nc");
  MaskedMap<S> out{Grid<S>(a.width(), a.height(), S(0.0)), PixelMask(a.width(), a.height(), 0)};
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!(mask[i] && a.valid[i] && b.valid[i])) continue;
    const Vec3<S> na = a.normals[i].template cast<S>();
    const Vec3<S> nb = b.normals[i].template cast<S>();
    out.values[i] = S(1.0) - abs(na.dot(nb));
    out.mask[i] = 1;
  }
  return out;
}

/// NC(a, b) = masked mean of 1 - |a . b|, in [0, 1] for unit normals.
template <class SA, class SB>
auto nc(const NormalMapT<SA>& a, const NormalMapT<SB>& b, const PixelMask& mask) {
  const auto m = nc_map(a, b, mask);
  return masked_mean(m.values, m.mask);
}

template <class S>
struct ReprojectedNormals {
  NormalMapT<S> normals;
  PixelMask mask;
};

/// Bilinearly samples the source normal map at each target pixel's
/// correspondence and renormalizes. Output stays in the source frame; apply
/// compensate_rotation to bring it into the target frame.
template <class S>
ReprojectedNormals<S> reproject_normals_direct(const NormalMap& normals_source,
                                               const DepthMapT<S>& depth_target,
                                               const SE3Transform& target_to_source,
                                               const CameraModel& target_cam,
                                               const CameraModel& source_cam) {
  using std::sqrt;
  require_camera_shape(source_cam, normals_source.width(), normals_source.height(),
                       "reproject_normals_direct");
  const auto corr = compute_correspondences(target_cam, source_cam, depth_target, target_to_source);
  const int w = depth_target.width();
  const int h = depth_target.height();
  ReprojectedNormals<S> out{NormalMapT<S>(w, h, normals_source.orientation), corr.valid};
  parallel_rows(h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      if (!corr.valid(x, y)) continue;
      const auto s = bilinear_sample(normals_source, corr.pixels(x, y));
      const S len = s.valid ? S(sqrt(s.value.squaredNorm())) : S(0.0);
      if (!s.valid || !(value_of(len) > 1e-9)) {
        out.mask(x, y) = 0;
        continue;
      }
      out.normals.normals(x, y) = s.value / len;
      out.normals.valid(x, y) = 1;
    }
  });
  return out;
}

/// R^T N per valid pixel.
template <class S>
NormalMapT<S> compensate_rotation(NormalMapT<S> normals, const Eigen::Matrix3d& rotation) {
  const Eigen::Matrix<S, 3, 3> rt = rotation.transpose().cast<S>();
  for (std::size_t i = 0; i < normals.normals.size(); ++i) {
    if (normals.valid[i]) normals.normals[i] = rt * normals.normals[i];
  }
  return normals;
}

/// Normals rebuilt from source depth reprojected into the target view. Used to
/// compare against direct reprojection, not as a supervisory signal.
template <class S>
ReprojectedNormals<S> reproject_normals_via_depth(const DepthMap& depth_source,
                                                  const DepthMapT<S>& depth_target,
                                                  const SE3Transform& target_to_source,
                                                  const CameraModel& target_cam,
                                                  const CameraModel& source_cam,
                                                  NormalOrientation orientation = NormalOrientation::kTowardCamera) {
  auto rd = reproject_depth(source_cam, target_cam, depth_source, target_to_source.inverse(),
                            depth_target);
  auto normals = normal_from_depth(rd.depth, target_cam, orientation);
  PixelMask mask = combine_masks({rd.mask, normals.valid});
  return {std::move(normals), std::move(mask)};
}

/// Direct reprojection followed by rotation compensation: R^T <N_src>(p_src),
/// expressed in the target frame.
template <class S>
ReprojectedNormals<S> reconstruct_normals(const NormalMap& normals_source,
                                          const DepthMapT<S>& depth_target,
                                          const SE3Transform& target_to_source,
                                          const CameraModel& target_cam,
                                          const CameraModel& source_cam) {
  auto r = reproject_normals_direct(normals_source, depth_target, target_to_source, target_cam,
                                    source_cam);
  r.normals = compensate_rotation(std::move(r.normals), target_to_source.rotation());
  return r;
}

/// L_SNC = NC(R^T <N_src>, N_target) with both normal maps derived from
/// estimated depth.
template <class S>
TermValue<S> loss_snc(const NormalMapT<S>& normals_target_est, const NormalMap& normals_source_est,
                      const DepthMapT<S>& depth_target, const SE3Transform& target_to_source,
                      const CameraModel& target_cam, const CameraModel& source_cam) {
  const auto r = reconstruct_normals(normals_source_est, depth_target, target_to_source,
                                     target_cam, source_cam);
  return nc(r.normals, normals_target_est, r.mask);
}

inline void require_prior(const NormalMap& prior, const char* who) {
  require(prior.width() > 0 && prior.height() > 0, ErrorCode::kMissingPriors,
          std::string(who) + ": prior normals missing");
}

template <class S>
MaskedMap<S> pnc_map(const ReprojectedNormals<S>& reconstruction, const NormalMap& prior_target) {
  return nc_map(reconstruction.normals, prior_target, reconstruction.mask);
}

/// Temporal / spatial-temporal PNC: min over tau of NC(Ň_tau, N^DA_target).
template <class S>
TermValue<S> loss_pnc_min(const std::vector<ReprojectedNormals<S>>& reconstructions,
                          const NormalMap& prior_target) {
  require_prior(prior_target, "loss_pnc");
  require(!reconstructions.empty(), ErrorCode::kEmptyContexts, "loss_pnc: no contexts");
  std::vector<MaskedMap<S>> maps;
  for (const auto& r : reconstructions) maps.push_back(pnc_map(r, prior_target));
  return min_reduce(maps);
}

/// Spatial PNC: NC(Ň_S, N^DA_target).
template <class S>
TermValue<S> loss_pnc_spatial(const ReprojectedNormals<S>& reconstruction,
                              const NormalMap& prior_target) {
  require_prior(prior_target, "loss_pnc");
  const auto m = pnc_map(reconstruction, prior_target);
  return masked_mean(m.values, m.mask);
}

/// MVRC PNC: min over tau of NC(Ň_S, Ň_ST,tau).
template <class S>
TermValue<S> loss_pnc_mvrc(const ReprojectedNormals<S>& spatial,
                           const std::vector<ReprojectedNormals<S>>& spatiotemporal) {
  require(!spatiotemporal.empty(), ErrorCode::kEmptyContexts, "loss_pnc_mvrc: no contexts");
  std::vector<MaskedMap<S>> maps;
  for (const auto& st : spatiotemporal) {
    maps.push_back(nc_map(spatial.normals, st.normals, combine_masks({spatial.mask, st.mask})));
  }
  return min_reduce(maps);
}

/// Ablation comparator: NC between normals of reprojected estimated depth and
/// normals of reprojected pseudo depth, both rebuilt in the target view.
template <class S>
TermValue<S> loss_nc_depth_interpolated(const DepthMap& est_depth_source,
                                        const DepthMap& prior_depth_source,
                                        const DepthMapT<S>& depth_target,
                                        const DepthMapT<S>& prior_depth_target,
                                        const SE3Transform& target_to_source,
                                        const CameraModel& target_cam,
                                        const CameraModel& source_cam) {
  const auto est = reproject_normals_via_depth(est_depth_source, depth_target, target_to_source,
                                               target_cam, source_cam);
  const auto pri = reproject_normals_via_depth(prior_depth_source, prior_depth_target,
                                               target_to_source, target_cam, source_cam);
  return nc(est.normals, pri.normals, combine_masks({est.mask, pri.mask}));
}

/// Angle between unit vectors, degrees.
inline double angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

}  // namespace articugeo
