#include "articugeo/kd_tree.hpp"

#include <algorithm>
#include <numeric>

namespace articugeo {

KdTree::KdTree(std::vector<Eigen::Vector3d> points) : points_(std::move(points)) {
  std::vector<std::uint32_t> idx(points_.size());
  std::iota(idx.begin(), idx.end(), 0u);
  nodes_.reserve(points_.size());
  root_ = build(idx, 0, idx.size(), 0);
}

std::int32_t KdTree::build(std::vector<std::uint32_t>& idx, std::size_t lo, std::size_t hi, int depth) {
  if (lo >= hi) return -1;
  // Split on the axis of largest extent.
  Eigen::Vector3d mn = points_[idx[lo]];
  Eigen::Vector3d mx = mn;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    mn = mn.cwiseMin(points_[idx[i]]);
    mx = mx.cwiseMax(points_[idx[i]]);
  }
  int axis = 0;
  (mx - mn).maxCoeff(&axis);
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double pa = points_[a][axis];
                     const double pb = points_[b][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({idx[mid], -1, -1, static_cast<std::uint8_t>(axis)});
  const std::int32_t left = build(idx, lo, mid, depth + 1);
  const std::int32_t right = build(idx, mid + 1, hi, depth + 1);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

void KdTree::search(std::int32_t node, const Eigen::Vector3d& q, Neighbor& best) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Eigen::Vector3d& p = points_[n.point];
  const double d2 = (p - q).squaredNorm();
  if (d2 < best.squared_distance || (d2 == best.squared_distance && n.point < best.index)) {
    best.squared_distance = d2;
    best.index = n.point;
  }
  const double diff = q[n.axis] - p[n.axis];
  search(diff < 0 ? n.left : n.right, q, best);
  // <= keeps equidistant candidates reachable for the index tie-break.
  if (diff * diff <= best.squared_distance) search(diff < 0 ? n.right : n.left, q, best);
}

std::optional<KdTree::Neighbor> KdTree::nearest(const Eigen::Vector3d& query,
                                                double max_squared_distance) const {
  Neighbor best;
  best.squared_distance = max_squared_distance;
  best.index = std::numeric_limits<std::size_t>::max();
  search(root_, query, best);
  if (best.index == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return best;
}

}  // namespace articugeo
