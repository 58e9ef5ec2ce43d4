#include "articugeo/sensitivity.hpp"

#include <cmath>

namespace articugeo {

const char* to_string(SensitivityLoss loss) {
  switch (loss) {
    case SensitivityLoss::kPhotometric: return "pe";
    case SensitivityLoss::kNc: return "nc";
    case SensitivityLoss::kSnc: return "snc";
    case SensitivityLoss::kPncSpatial: return "pnc_s";
  }
  return "unknown";
}

SensitivityLoss parse_sensitivity_loss(const std::string& name) {
  for (SensitivityLoss l : all_sensitivity_losses()) {
    if (name == to_string(l)) return l;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown sensitivity loss '" + name + "'");
}

std::vector<SensitivityLoss> all_sensitivity_losses() {
  return {SensitivityLoss::kPhotometric, SensitivityLoss::kNc, SensitivityLoss::kSnc,
          SensitivityLoss::kPncSpatial};
}

double loss_value(const SensitivityProblem& p, SensitivityLoss loss, const DepthMap& depth) {
  return sensitivity_loss(p, loss, depth).value;
}

double directional_derivative(const SensitivityProblem& p, SensitivityLoss loss, const DepthMap& depth,
                              const DepthMap& direction) {
  require_same_shape(depth, direction, "directional_derivative");
  DepthMapT<Dual> d(depth.width(), depth.height());
  for (std::size_t i = 0; i < depth.size(); ++i) {
    d[i] = Dual(depth[i]);
    d[i].v[0] = direction[i];
  }
  return sensitivity_loss(p, loss, d).value.v[0];
}

double central_difference(const SensitivityProblem& p, SensitivityLoss loss, const DepthMap& depth,
                          const DepthMap& direction, double step) {
  require_same_shape(depth, direction, "central_difference");
  require(step > 0.0, ErrorCode::kInvalidArgument, "central_difference: step must be positive");
  DepthMap plus = depth;
  DepthMap minus = depth;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    plus[i] += step * direction[i];
    minus[i] -= step * direction[i];
  }
  return (loss_value(p, loss, plus) - loss_value(p, loss, minus)) / (2.0 * step);
}

double cell_boundary_distance(const SensitivityProblem& p, const DepthMap& depth, int x, int y) {
  const double d = depth(x, y);
  if (!(d > 0.0)) return -1.0;
  const Point3 q = p.target_to_source * (p.target_cam.ray(static_cast<double>(x), static_cast<double>(y)) * d);
  if (!(q.z() > 0.0)) return -1.0;
  const double u = p.source_cam.fx * q.x() / q.z() + p.source_cam.cx;
  const double v = p.source_cam.fy * q.y() / q.z() + p.source_cam.cy;
  if (!p.source_cam.in_bounds(u, v)) return -1.0;
  auto edge = [](double s) {
    const double f = s - std::floor(s);
    return std::min(f, 1.0 - f);
  };
  return std::min(edge(u), edge(v));
}

}  // namespace articugeo
