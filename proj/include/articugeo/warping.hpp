#pragma once

// Pixel correspondences between views, bilinear sampling, image warping and
// backward depth reprojection.
//
// Sampling never clamps: a sample whose footprint leaves the image, or touches
// an invalid depth/normal with nonzero weight, is reported invalid.

#include <cmath>
#include <initializer_list>
#include <vector>

#include "articugeo/geometry.hpp"
#include "articugeo/grid.hpp"
#include "articugeo/parallel.hpp"

namespace articugeo {

template <class T>
struct Sampled {
  T value{};
  bool valid = false;
};

/// Bilinear footprint of a continuous location: top-left neighbor and the
/// fractional offsets toward the right/down neighbors.
template <class S>
struct Footprint {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  S fx{0};
  S fy{0};

  std::array<S, 4> weights() const {
    const S one(1.0);
    return {(one - fx) * (one - fy), fx * (one - fy), (one - fx) * fy, fx * fy};
  }
  std::array<int, 4> xs() const { return {x0, x1, x0, x1}; }
  std::array<int, 4> ys() const { return {y0, y0, y1, y1}; }
};

template <class S>
Sampled<Footprint<S>> make_footprint(const S& u, const S& v, int width, int height) {
  Sampled<Footprint<S>> out;
  const double uu = value_of(u);
  const double vv = value_of(v);
  if (!(uu >= 0.0 && vv >= 0.0 && uu <= width - 1 && vv <= height - 1)) return out;
  Footprint<S>& f = out.value;
  f.x0 = std::min(static_cast<int>(std::floor(uu)), std::max(width - 2, 0));
  f.y0 = std::min(static_cast<int>(std::floor(vv)), std::max(height - 2, 0));
  f.x1 = std::min(f.x0 + 1, width - 1);
  f.y1 = std::min(f.y0 + 1, height - 1);
  f.fx = f.x1 == f.x0 ? S(0.0) : u - S(static_cast<double>(f.x0));
  f.fy = f.y1 == f.y0 ? S(0.0) : v - S(static_cast<double>(f.y0));
  out.valid = true;
  return out;
}

/// Per-channel bilinear sample. `out` must hold img.channels() entries. With
/// `valid`, a contributing neighbor outside the mask makes the sample invalid.
template <class S, class Out>
bool bilinear_sample(const ImageBuffer& img, const PixelT<S>& p, Out& out,
                     const PixelMask* valid = nullptr) {
  const auto fp = make_footprint(p.u, p.v, img.width(), img.height());
  if (!fp.valid) return false;
  const auto w = fp.value.weights();
  const auto xs = fp.value.xs();
  const auto ys = fp.value.ys();
  if (valid != nullptr) {
    for (int k = 0; k < 4; ++k) {
      if (value_of(w[k]) != 0.0 && !(*valid)(xs[k], ys[k])) return false;
    }
  }
  for (int c = 0; c < img.channels(); ++c) {
    S acc(0.0);
    for (int k = 0; k < 4; ++k) acc += w[k] * img(xs[k], ys[k], c);
    out[c] = acc;
  }
  return true;
}

/// Bilinear depth sample; invalid when any contributing neighbor is <= 0.
template <class S>
Sampled<S> bilinear_sample(const DepthMap& depth, const PixelT<S>& p) {
  Sampled<S> out;
  const auto fp = make_footprint(p.u, p.v, depth.width(), depth.height());
  if (!fp.valid) return out;
  const auto w = fp.value.weights();
  const auto xs = fp.value.xs();
  const auto ys = fp.value.ys();
  S acc(0.0);
  for (int k = 0; k < 4; ++k) {
    if (value_of(w[k]) == 0.0) continue;
    const double d = depth(xs[k], ys[k]);
    if (!(d > 0.0)) return out;
    acc += w[k] * d;
  }
  out.value = acc;
  out.valid = true;
  return out;
}

/// Weighted sum of the four neighboring normals (not renormalized); invalid
/// when any contributing neighbor is invalid.
template <class S>
Sampled<Vec3<S>> bilinear_sample(const NormalMap& normals, const PixelT<S>& p) {
  Sampled<Vec3<S>> out;
  const auto fp = make_footprint(p.u, p.v, normals.width(), normals.height());
  if (!fp.valid) return out;
  const auto w = fp.value.weights();
  const auto xs = fp.value.xs();
  const auto ys = fp.value.ys();
  Vec3<S> acc = Vec3<S>::Zero();
  for (int k = 0; k < 4; ++k) {
    if (value_of(w[k]) == 0.0) continue;
    if (!normals.valid(xs[k], ys[k])) return out;
    acc += normals.normals(xs[k], ys[k]).template cast<S>() * w[k];
  }
  out.value = acc;
  out.valid = true;
  return out;
}

/// Where each target pixel lands in the source view: p_src = K_s X D_t K_t^{-1} p.
template <class S>
struct CorrespondenceField {
  Grid<PixelT<S>> pixels;
  Grid<S> source_z;
  PixelMask valid;
};

inline void require_camera_shape(const CameraModel& cam, int width, int height, const char* who) {
  require(cam.width == width && cam.height == height, ErrorCode::kDimensionMismatch,
          std::string(who) + ": raster does not match camera dimensions");
}

template <class S>
CorrespondenceField<S> compute_correspondences(const CameraModel& target_cam,
                                               const CameraModel& source_cam,
                                               const DepthMapT<S>& depth_target,
                                               const SE3Transform& target_to_source) {
  require_camera_shape(target_cam, depth_target.width(), depth_target.height(), "correspondences");
  const int w = depth_target.width();
  const int h = depth_target.height();
  CorrespondenceField<S> f{Grid<PixelT<S>>(w, h), Grid<S>(w, h, S(0.0)), PixelMask(w, h, 0)};
  const Eigen::Matrix3d rot = target_to_source.rotation();
  const Eigen::Vector3d trans = target_to_source.translation();
  parallel_rows(h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      const S& d = depth_target(x, y);
      if (!(value_of(d) > 0.0)) continue;
      const Vec3<S> p = target_cam.ray(S(static_cast<double>(x)), S(static_cast<double>(y))) * d;
      const Vec3<S> q = rot.cast<S>() * p + trans.cast<S>();
      if (!(value_of(q.z()) > 0.0)) continue;
      const S inv_z = S(1.0) / q.z();
      const PixelT<S> px{q.x() * inv_z * source_cam.fx + source_cam.cx,
                         q.y() * inv_z * source_cam.fy + source_cam.cy};
      f.pixels(x, y) = px;
      f.source_z(x, y) = q.z();
      f.valid(x, y) = source_cam.in_bounds(value_of(px.u), value_of(px.v)) ? 1 : 0;
    }
  });
  return f;
}

template <class S>
struct WarpedImage {
  ImageT<S> image;
  PixelMask mask;
};

/// Reconstructs the target view from `source_img`: Ĩ(p) = <I_src>(p_src).
/// `source_valid` optionally marks source pixels that hold scene content.
template <class S>
WarpedImage<S> warp_image(const CameraModel& target_cam, const CameraModel& source_cam,
                          const DepthMapT<S>& depth_target, const SE3Transform& target_to_source,
                          const ImageBuffer& source_img, const PixelMask* source_valid = nullptr) {
  require_camera_shape(source_cam, source_img.width(), source_img.height(), "warp_image");
  if (source_valid != nullptr) {
    require(source_img.same_extent(*source_valid), ErrorCode::kDimensionMismatch,
            "warp_image: source mask size differs");
  }
  const auto corr = compute_correspondences(target_cam, source_cam, depth_target, target_to_source);
  const int w = depth_target.width();
  const int h = depth_target.height();
  WarpedImage<S> out{ImageT<S>(w, h, source_img.channels(), S(0.0)), corr.valid};
  parallel_rows(h, [&](int y) {
    std::array<S, 3> px{};
    for (int x = 0; x < w; ++x) {
      if (!corr.valid(x, y)) continue;
      if (!bilinear_sample(source_img, corr.pixels(x, y), px, source_valid)) {
        out.mask(x, y) = 0;
        continue;
      }
      for (int c = 0; c < source_img.channels(); ++c) out.image(x, y, c) = px[c];
    }
  });
  return out;
}

template <class S>
struct ReprojectedDepth {
  DepthMapT<S> depth;
  PixelMask mask;
};

/// Source depth as seen from the target view. Every source pixel is lifted,
/// moved into the target frame and keeps its z; that raster is then sampled at
/// the target-depth-driven correspondence of each target pixel.
template <class S>
ReprojectedDepth<S> reproject_depth(const CameraModel& source_cam, const CameraModel& target_cam,
                                    const DepthMap& depth_source,
                                    const SE3Transform& source_to_target,
                                    const DepthMapT<S>& depth_target) {
  require_camera_shape(source_cam, depth_source.width(), depth_source.height(), "reproject_depth");
  const int sw = depth_source.width();
  const int sh = depth_source.height();
  DepthMap z_in_target(sw, sh, 0.0);
  parallel_rows(sh, [&](int y) {
    for (int x = 0; x < sw; ++x) {
      const double d = depth_source(x, y);
      if (!(d > 0.0)) continue;
      const Point3 p = source_cam.ray(static_cast<double>(x), static_cast<double>(y)) * d;
      const double z = (source_to_target * p).z();
      z_in_target(x, y) = z > 0.0 ? z : 0.0;
    }
  });
  const auto corr =
      compute_correspondences(target_cam, source_cam, depth_target, source_to_target.inverse());
  const int w = depth_target.width();
  const int h = depth_target.height();
  ReprojectedDepth<S> out{DepthMapT<S>(w, h, S(0.0)), corr.valid};
  parallel_rows(h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      if (!corr.valid(x, y)) continue;
      const auto s = bilinear_sample(z_in_target, corr.pixels(x, y));
      if (!s.valid) {
        out.mask(x, y) = 0;
        continue;
      }
      out.depth(x, y) = s.value;
    }
  });
  return out;
}

/// Logical AND of equally sized masks.
PixelMask combine_masks(const std::vector<PixelMask>& masks);
inline PixelMask combine_masks(std::initializer_list<PixelMask> masks) {
  return combine_masks(std::vector<PixelMask>(masks));
}

}  // namespace articugeo
