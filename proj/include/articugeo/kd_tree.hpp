#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace articugeo {

/// Exact nearest-neighbor search over a fixed 3-D point set. Ties resolve to
/// the lower point index, so queries are deterministic.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::vector<Eigen::Vector3d> points);

  struct Neighbor {
    std::size_t index = 0;
    double squared_distance = std::numeric_limits<double>::infinity();
  };

  /// Nearest point with squared distance <= max_squared_distance.
  std::optional<Neighbor> nearest(const Eigen::Vector3d& query,
                                  double max_squared_distance = std::numeric_limits<double>::infinity()) const;

  const std::vector<Eigen::Vector3d>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::uint32_t point = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint8_t axis = 0;
  };

  std::int32_t build(std::vector<std::uint32_t>& idx, std::size_t lo, std::size_t hi, int depth);
  void search(std::int32_t node, const Eigen::Vector3d& q, Neighbor& best) const;

  std::vector<Eigen::Vector3d> points_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace articugeo
