#pragma once

// Row-major rasters shared by every per-pixel module.

#include <cstdint>
#include <string>
#include <vector>

#include "articugeo/error.hpp"
#include "articugeo/geometry.hpp"

namespace articugeo {

template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, const T& fill = T{})
      : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height, fill) {
    require(width >= 0 && height >= 0, ErrorCode::kInvalidArgument, "grid: negative size");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  template <class U>
  bool same_shape(const Grid<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Metric depth in meters; 0 marks an invalid pixel.
template <class S>
using DepthMapT = Grid<S>;
using DepthMap = DepthMapT<double>;

/// 1 = valid, 0 = excluded.
using PixelMask = Grid<std::uint8_t>;

/// Interleaved intensities in [0, 1], 1 or 3 channels.
template <class S>
class ImageT {
 public:
  ImageT() = default;
  ImageT(int width, int height, int channels, const S& fill = S(0.0))
      : width_(width), height_(height), channels_(channels),
        data_(static_cast<std::size_t>(width) * height * channels, fill) {
    require(channels == 1 || channels == 3, ErrorCode::kInvalidArgument,
            "image: channels must be 1 or 3");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }

  S& operator()(int x, int y, int c) { return data_[index(x, y, c)]; }
  const S& operator()(int x, int y, int c) const { return data_[index(x, y, c)]; }

  std::vector<S>& data() { return data_; }
  const std::vector<S>& data() const { return data_; }

  template <class U>
  bool same_shape(const ImageT<U>& o) const {
    return width_ == o.width() && height_ == o.height() && channels_ == o.channels();
  }
  template <class U>
  bool same_extent(const Grid<U>& g) const {
    return width_ == g.width() && height_ == g.height();
  }

  friend bool operator==(const ImageT& a, const ImageT& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.channels_ == b.channels_ &&
           a.data_ == b.data_;
  }

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<S> data_;
};
using ImageBuffer = ImageT<double>;

/// Which way valid normals point. kTowardCamera satisfies N . (-P) > 0;
/// kAwayFromCamera is the unflipped cross-product orientation, where a ground
/// plane below the camera reads (0, 1, 0).
enum class NormalOrientation { kTowardCamera, kAwayFromCamera };

template <class S>
struct NormalMapT {
  Grid<Vec3<S>> normals;
  PixelMask valid;
  NormalOrientation orientation = NormalOrientation::kTowardCamera;

  NormalMapT() = default;
  NormalMapT(int width, int height, NormalOrientation o = NormalOrientation::kTowardCamera)
      : normals(width, height, Vec3<S>::Zero()), valid(width, height, 0), orientation(o) {}

  int width() const { return normals.width(); }
  int height() const { return normals.height(); }
};
using NormalMap = NormalMapT<double>;

template <class S>
NormalMapT<S> cast_normals(const NormalMap& in) {
  NormalMapT<S> out(in.width(), in.height(), in.orientation);
  out.valid = in.valid;
  for (std::size_t i = 0; i < in.normals.size(); ++i) out.normals[i] = in.normals[i].cast<S>();
  return out;
}

template <class S>
DepthMapT<S> cast_depth(const DepthMap& in) {
  DepthMapT<S> out(in.width(), in.height());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = S(in[i]);
  return out;
}

/// Returns the normal map re-expressed in `target` orientation.
template <class S>
NormalMapT<S> with_orientation(NormalMapT<S> in, NormalOrientation target) {
  if (in.orientation != target) {
    for (auto& n : in.normals.data()) n = -n;
    in.orientation = target;
  }
  return in;
}

inline PixelMask valid_depth_mask(const DepthMap& depth) {
  PixelMask m(depth.width(), depth.height(), 0);
  for (std::size_t i = 0; i < depth.size(); ++i) m[i] = depth[i] > 0.0 ? 1 : 0;
  return m;
}

inline std::size_t count_true(const PixelMask& m) {
  std::size_t n = 0;
  for (auto v : m.data()) n += v ? 1 : 0;
  return n;
}

template <class A, class B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* who) {
  require(a.same_shape(b), ErrorCode::kDimensionMismatch, std::string(who) + ": dimension mismatch");
}

}  // namespace articugeo
