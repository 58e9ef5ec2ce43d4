#pragma once

// Depth evaluation against ground truth: abs_rel, sq_rel, rmse, rmse_log and
// the 1.25^k threshold accuracies.

#include <cstddef>
#include <string>

#include "articugeo/grid.hpp"

namespace articugeo {

struct MetricReport {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double rmse = 0.0;
  double rmse_log = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  std::size_t pixel_count = 0;

  /// `key value` lines in a fixed order.
  std::string to_text() const;
};

struct MetricOptions {
  double max_depth = 100.0;
  double min_clamp = 1e-3;
  /// Scale each prediction by median(gt) / median(pred) over its valid pixels.
  bool median_scaling = false;
};

/// Pixel-weighted accumulation across images; sums are kept in a fixed order
/// so results do not depend on how images are batched.
class MetricAccumulator {
 public:
  explicit MetricAccumulator(MetricOptions opts = {});

  /// Adds one image. Returns the number of pixels it contributed.
  std::size_t add(const DepthMap& pred, const DepthMap& gt);
  /// Throws kEmptyEvaluation when no pixel was ever valid.
  MetricReport report() const;

 private:
  MetricOptions opts_;
  std::size_t n_ = 0;
  double abs_rel_ = 0.0;
  double sq_rel_ = 0.0;
  double sq_ = 0.0;
  double sq_log_ = 0.0;
  std::size_t d1_ = 0;
  std::size_t d2_ = 0;
  std::size_t d3_ = 0;
};

/// Valid pixels: 0 < gt <= max_depth and pred > 0; predictions are clamped
/// to [min_clamp, max_depth].
MetricReport evaluate(const DepthMap& pred, const DepthMap& gt, const MetricOptions& opts = {});

}  // namespace articugeo
