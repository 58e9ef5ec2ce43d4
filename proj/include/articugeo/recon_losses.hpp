#pragma once

// Photometric reconstruction losses, spatial depth consistency, edge-aware
// smoothness and weighted aggregation.

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "articugeo/grid.hpp"
#include "articugeo/warping.hpp"

namespace articugeo {

/// A reduced loss term. count == 0 means no valid pixel contributed; value is
/// then 0 and the term is reported absent.
template <class S>
struct TermValue {
  S value{0.0};
  std::size_t count = 0;

  bool present() const { return count > 0; }
};

/// Running sum over pixels from many views/contexts; reduces in call order.
template <class S>
struct TermAccumulator {
  S sum{0.0};
  std::size_t count = 0;

  void add(const S& s, std::size_t n) {
    sum += s;
    count += n;
  }
  void add(const TermValue<S>& t) { add(t.value * static_cast<double>(t.count), t.count); }
  TermValue<S> result() const {
    if (count == 0) return {};
    return {sum / static_cast<double>(count), count};
  }
};

template <class S>
TermValue<S> masked_mean(const Grid<S>& map, const PixelMask& mask) {
  require_same_shape(map, mask, "masked_mean");
  TermAccumulator<S> acc;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (mask[i]) acc.add(map[i], 1);
  }
  return acc.result();
}

template <class S>
struct MaskedMap {
  Grid<S> values;
  PixelMask mask;
};

/// Per-pixel minimum over the candidates valid at that pixel, averaged over
/// pixels valid in at least one candidate.
template <class S>
TermValue<S> min_reduce(const std::vector<MaskedMap<S>>& candidates) {
  require(!candidates.empty(), ErrorCode::kEmptyContexts, "min_reduce: no candidates");
  const auto& first = candidates.front().values;
  for (const auto& c : candidates) {
    require_same_shape(first, c.values, "min_reduce");
    require_same_shape(first, c.mask, "min_reduce");
  }
  TermAccumulator<S> acc;
  for (std::size_t i = 0; i < first.size(); ++i) {
    const S* best = nullptr;
    for (const auto& c : candidates) {
      if (!c.mask[i]) continue;
      if (best == nullptr || value_of(c.values[i]) < value_of(*best)) best = &c.values[i];
    }
    if (best != nullptr) acc.add(*best, 1);
  }
  return acc.result();
}

struct SsimParams {
  double c1 = 0.01 * 0.01;
  double c2 = 0.03 * 0.03;
};

namespace detail {
inline int reflect(int i, int n) {
  if (n == 1) return 0;
  if (i < 0) return -i;
  if (i >= n) return 2 * (n - 1) - i;
  return i;
}
}  // namespace detail

/// Per-pixel SSIM over a 3x3 reflection-padded window, averaged over channels.
/// Window members outside `mask` are left out of the statistics; pixels
/// outside `mask` read 0.
template <class SX, class SY>
auto ssim(const ImageT<SX>& x, const ImageT<SY>& y, const PixelMask& mask,
          const SsimParams& params = {}) {
  using S = decltype(SX(0.0) * SY(0.0));
  require(x.same_shape(y) && x.same_extent(mask), ErrorCode::kDimensionMismatch,
          "ssim: dimension mismatch");
  const int w = x.width();
  const int h = x.height();
  const int nc = x.channels();
  Grid<S> out(w, h, S(0.0));
  parallel_rows(h, [&](int py) {
    for (int px = 0; px < w; ++px) {
      if (!mask(px, py)) continue;
      S total(0.0);
      for (int c = 0; c < nc; ++c) {
        S sx(0.0), sy(0.0), sxx(0.0), syy(0.0), sxy(0.0);
        int n = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          const int yy = detail::reflect(py + dy, h);
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = detail::reflect(px + dx, w);
            if (!mask(xx, yy)) continue;
            const S a = S(x(xx, yy, c));
            const S b = S(y(xx, yy, c));
            sx += a;
            sy += b;
            sxx += a * a;
            syy += b * b;
            sxy += a * b;
            ++n;
          }
        }
        const double inv = 1.0 / n;
        const S mx = sx * inv;
        const S my = sy * inv;
        const S vx = sxx * inv - mx * mx;
        const S vy = syy * inv - my * my;
        const S cxy = sxy * inv - mx * my;
        const S num = (2.0 * mx * my + params.c1) * (2.0 * cxy + params.c2);
        const S den = (mx * mx + my * my + params.c1) * (vx + vy + params.c2);
        total += num / den;
      }
      out(px, py) = total / static_cast<double>(nc);
    }
  });
  return out;
}

/// pe = (1 - alpha) mean_c |x - y| + alpha (1 - SSIM) / 2, per pixel.
template <class SX, class SY>
auto photometric_error(const ImageT<SX>& x, const ImageT<SY>& y, const PixelMask& mask,
                       double alpha = 0.85) {
  using std::abs;
  using S = decltype(SX(0.0) * SY(0.0));
  auto out = ssim(x, y, mask);
  const int nc = x.channels();
  for (int py = 0; py < x.height(); ++py) {
    for (int px = 0; px < x.width(); ++px) {
      if (!mask(px, py)) continue;
      S l1(0.0);
      for (int c = 0; c < nc; ++c) l1 += abs(S(x(px, py, c)) - S(y(px, py, c)));
      l1 = l1 / static_cast<double>(nc);
      out(px, py) = (1.0 - alpha) * l1 + alpha * (S(1.0) - out(px, py)) * 0.5;
    }
  }
  return out;
}

template <class S>
MaskedMap<S> photometric_map(const ImageBuffer& target, const WarpedImage<S>& warped,
                             double alpha) {
  return {photometric_error(target, warped.image, warped.mask, alpha), warped.mask};
}

/// min over tau of pe(target, reconstruction_tau).
template <class S>
TermValue<S> loss_temporal(const ImageBuffer& target, const std::vector<WarpedImage<S>>& warped,
                           double alpha = 0.85) {
  require(!warped.empty(), ErrorCode::kEmptyContexts, "loss_temporal: no temporal sources");
  std::vector<MaskedMap<S>> maps;
  maps.reserve(warped.size());
  for (const auto& w : warped) maps.push_back(photometric_map(target, w, alpha));
  return min_reduce(maps);
}

/// pe(target, spatial reconstruction), masked mean.
template <class S>
TermValue<S> loss_spatial(const ImageBuffer& target, const WarpedImage<S>& warped,
                          double alpha = 0.85) {
  const auto m = photometric_map(target, warped, alpha);
  return masked_mean(m.values, m.mask);
}

/// min over tau of pe(target, spatial-temporal reconstruction_tau).
template <class S>
TermValue<S> loss_spatiotemporal(const ImageBuffer& target,
                                 const std::vector<WarpedImage<S>>& warped, double alpha = 0.85) {
  require(!warped.empty(), ErrorCode::kEmptyContexts, "loss_spatiotemporal: no sources");
  return loss_temporal(target, warped, alpha);
}

/// min over tau of pe(spatial reconstruction, spatial-temporal reconstruction_tau)
/// on the intersection of their masks.
template <class S>
TermValue<S> loss_mvrc(const WarpedImage<S>& spatial, const std::vector<WarpedImage<S>>& st,
                       double alpha = 0.85) {
  require(!st.empty(), ErrorCode::kEmptyContexts, "loss_mvrc: no spatial-temporal sources");
  std::vector<MaskedMap<S>> maps;
  for (const auto& w : st) {
    PixelMask m = combine_masks({spatial.mask, w.mask});
    maps.push_back({photometric_error(spatial.image, w.image, m, alpha), m});
  }
  return min_reduce(maps);
}

/// Masked mean |D_target - D_reprojected|, meters.
template <class SA, class SB>
auto loss_sdc(const DepthMapT<SA>& depth_target, const DepthMapT<SB>& reprojected,
              const PixelMask& mask) {
  using std::abs;
  using S = decltype(SA(0.0) * SB(0.0));
  require_same_shape(depth_target, reprojected, "loss_sdc");
  require_same_shape(depth_target, mask, "loss_sdc");
  TermAccumulator<S> acc;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    if (!(value_of(depth_target[i]) > 0.0) || !(value_of(reprojected[i]) > 0.0)) continue;
    acc.add(abs(S(depth_target[i]) - S(reprojected[i])), 1);
  }
  return acc.result();
}

/// Edge-aware smoothness of mean-normalized disparity:
/// mean |dx d*| exp(-|dx I|) + mean |dy d*| exp(-|dy I|), d* = (1/D) / mean(1/D).
template <class S>
TermValue<S> loss_smoothness(const DepthMapT<S>& depth, const ImageBuffer& img) {
  using std::abs;
  using std::exp;
  require(img.same_extent(depth), ErrorCode::kDimensionMismatch, "loss_smoothness: dimension mismatch");
  const int w = depth.width();
  const int h = depth.height();
  TermAccumulator<S> mean_disp;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (value_of(depth[i]) > 0.0) mean_disp.add(S(1.0) / depth[i], 1);
  }
  if (mean_disp.count == 0) return {};
  const S norm = mean_disp.result().value;
  auto disp = [&](int x, int y) { return (S(1.0) / depth(x, y)) / norm; };
  auto img_grad = [&](int x0, int y0, int x1, int y1) {
    double g = 0.0;
    for (int c = 0; c < img.channels(); ++c) g += std::abs(img(x1, y1, c) - img(x0, y0, c));
    return g / img.channels();
  };
  TermAccumulator<S> gx, gy;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!(value_of(depth(x, y)) > 0.0)) continue;
      if (x + 1 < w && value_of(depth(x + 1, y)) > 0.0) {
        gx.add(abs(disp(x + 1, y) - disp(x, y)) * std::exp(-img_grad(x, y, x + 1, y)), 1);
      }
      if (y + 1 < h && value_of(depth(x, y + 1)) > 0.0) {
        gy.add(abs(disp(x, y + 1) - disp(x, y)) * std::exp(-img_grad(x, y, x, y + 1)), 1);
      }
    }
  }
  TermValue<S> out;
  out.count = gx.count + gy.count;
  if (out.count == 0) return {};
  out.value = gx.result().value + gy.result().value;
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

/// Weighting coefficients. Defaults other than alpha are engineering choices,
/// overridable through the weights config.
struct LossWeights {
  double temporal = 1.0;
  double spatial = 0.1;
  double spatiotemporal = 0.1;
  double mvrc = 0.1;
  double sdc = 0.1;
  double smoothness = 1e-3;
  double nc = 1.0;
  double snc = 1.0;
  double pnc = 1.0;
  double camera_height = 1.0;
  double vpc = 1.0;
  double alpha = 0.85;

  bool is_valid() const;
};

enum class LossTerm {
  kPhotoTemporal,
  kPhotoSpatial,
  kPhotoSpatioTemporal,
  kPhotoMvrc,
  kSdc,
  kSmoothness,
  kNc,
  kSnc,
  kPncTemporal,
  kPncSpatial,
  kPncSpatioTemporal,
  kPncMvrc,
  kCameraHeight,
  kVpc,
};

const char* term_name(LossTerm term);
double term_weight(LossTerm term, const LossWeights& w);

struct LossEntry {
  std::string name;
  double value = 0.0;
  std::size_t count = 0;
  double weight = 0.0;
  /// Weighted terms enter the total; breakdown entries are diagnostics only.
  bool weighted = true;

  bool present() const { return count > 0; }
};

struct LossReport {
  std::vector<LossEntry> entries;
  double total = 0.0;

  const LossEntry* find(const std::string& name) const;
  /// One `name value count` line per entry, then `total value count`.
  std::string to_text() const;
  static LossReport from_text(const std::string& text);
};

struct TermResult {
  LossTerm term;
  TermValue<double> value;
};

struct BreakdownResult {
  std::string name;
  TermValue<double> value;
};

/// total = sum of weight * value over weighted terms with at least one valid
/// pixel; absent terms contribute 0 and stay in the report with count 0.
LossReport aggregate(const std::vector<TermResult>& terms, const LossWeights& weights,
                     const std::vector<BreakdownResult>& breakdown = {});

}  // namespace articugeo
