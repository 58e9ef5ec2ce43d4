#include "articugeo/depth_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace articugeo {
namespace {

bool valid_pair(double p, double g, double max_depth) {
  return g > 0.0 && g <= max_depth && p > 0.0 && std::isfinite(p);
}

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

}  // namespace

std::string MetricReport::to_text() const {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "abs_rel %.17g\nsq_rel %.17g\nrmse %.17g\nrmse_log %.17g\n"
                "delta1 %.17g\ndelta2 %.17g\ndelta3 %.17g\npixel_count %zu\n",
                abs_rel, sq_rel, rmse, rmse_log, delta1, delta2, delta3, pixel_count);
  return buf;
}

MetricAccumulator::MetricAccumulator(MetricOptions opts) : opts_(opts) {
  require(opts_.max_depth > 0.0, ErrorCode::kInvalidArgument, "metrics: max_depth must be positive");
  require(opts_.min_clamp > 0.0 && opts_.min_clamp < opts_.max_depth, ErrorCode::kInvalidArgument,
          "metrics: min_clamp must lie in (0, max_depth)");
}

std::size_t MetricAccumulator::add(const DepthMap& pred, const DepthMap& gt) {
  require_same_shape(pred, gt, "evaluate");
  double scale = 1.0;
  if (opts_.median_scaling) {
    std::vector<double> ps, gs;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if (!valid_pair(pred[i], gt[i], opts_.max_depth)) continue;
      ps.push_back(pred[i]);
      gs.push_back(gt[i]);
    }
    if (ps.empty()) return 0;
    scale = median(gs) / median(ps);
  }
  std::size_t added = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!valid_pair(pred[i], gt[i], opts_.max_depth)) continue;
    const double g = gt[i];
    const double p = std::clamp(pred[i] * scale, opts_.min_clamp, opts_.max_depth);
    const double diff = p - g;
    abs_rel_ += std::abs(diff) / g;
    sq_rel_ += diff * diff / g;
    sq_ += diff * diff;
    const double dl = std::log(p) - std::log(g);
    sq_log_ += dl * dl;
    const double ratio = std::max(p / g, g / p);
    if (ratio < 1.25) ++d1_;
    if (ratio < 1.25 * 1.25) ++d2_;
    if (ratio < 1.25 * 1.25 * 1.25) ++d3_;
    ++added;
  }
  n_ += added;
  return added;
}

MetricReport MetricAccumulator::report() const {
  require(n_ > 0, ErrorCode::kEmptyEvaluation, "evaluate: no valid pixels");
  const double n = static_cast<double>(n_);
  MetricReport r;
  r.abs_rel = abs_rel_ / n;
  r.sq_rel = sq_rel_ / n;
  r.rmse = std::sqrt(sq_ / n);
  r.rmse_log = std::sqrt(sq_log_ / n);
  r.delta1 = static_cast<double>(d1_) / n;
  r.delta2 = static_cast<double>(d2_) / n;
  r.delta3 = static_cast<double>(d3_) / n;
  r.pixel_count = n_;
  return r;
}

MetricReport evaluate(const DepthMap& pred, const DepthMap& gt, const MetricOptions& opts) {
  MetricAccumulator acc(opts);
  acc.add(pred, gt);
  return acc.report();
}

}  // namespace articugeo
