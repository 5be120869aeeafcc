#pragma once

#include "mlsm/common.hpp"

#include <span>
#include <vector>

namespace mlsm {

/// n nearest nodes of a point, ordered by distance (ties by smaller index).
struct Support {
  std::vector<std::size_t> indices;
  std::vector<double> distances;

  std::size_t size() const { return indices.size(); }
  std::size_t center() const { return indices.front(); }
  /// Distance to the nearest non-center support node.
  double p_min() const;
};

/// Balanced 2-d tree over a fixed point set.
class KdTree {
 public:
  explicit KdTree(std::span<const Vec2> points);

  std::size_t size() const { return points_.size(); }
  const Vec2& point(std::size_t i) const { return points_[i]; }

  /// Exact n nearest neighbours of p.
  Support knn(const Vec2& p, std::size_t n) const;

 private:
  void build(std::size_t lo, std::size_t hi, int depth);

  std::vector<Vec2> points_;
  // Implicit tree: order_[lo..hi) is a subtree with its splitting point at the median.
  std::vector<std::size_t> order_;
  std::vector<int> axis_;
};

/// n nearest points to points[i], with i itself first.
Support centered_support(const KdTree& tree, std::span<const Vec2> points, std::size_t i,
                         std::size_t n);
/// Supports of size n for every point, each centered on its own point.
std::vector<Support> find_supports(std::span<const Vec2> points, std::size_t n);

}  // namespace mlsm
