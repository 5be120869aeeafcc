#include "mlsm/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace mlsm {

double Support::p_min() const {
  if (distances.size() < 2) {
    throw InvalidArgument("support of size " + std::to_string(distances.size()) +
                          " has no nearest non-center node");
  }
  return distances[1];
}

KdTree::KdTree(std::span<const Vec2> points) : points_(points.begin(), points.end()) {
  if (points_.empty()) throw InvalidArgument("cannot build a kd-tree over an empty point set");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  axis_.assign(points_.size(), 0);
  build(0, points_.size(), 0);
}

void KdTree::build(std::size_t lo, std::size_t hi, int depth) {
  if (hi - lo <= 1) return;
  // Split along the wider extent of the current cell.
  Vec2 lower = points_[order_[lo]], upper = lower;
  for (std::size_t i = lo; i < hi; ++i) {
    lower = lower.cwiseMin(points_[order_[i]]);
    upper = upper.cwiseMax(points_[order_[i]]);
  }
  const int axis = (upper - lower).x() >= (upper - lower).y() ? 0 : 1;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                   [&](std::size_t a, std::size_t b) {
                     const double ca = points_[a][axis], cb = points_[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  axis_[mid] = axis;
  build(lo, mid, depth + 1);
  build(mid + 1, hi, depth + 1);
}

namespace {

struct Candidate {
  double dist2;
  std::size_t index;
  bool operator<(const Candidate& o) const {
    return dist2 < o.dist2 || (dist2 == o.dist2 && index < o.index);
  }
};

}  // namespace

Support KdTree::knn(const Vec2& p, std::size_t n) const {
  if (n == 0 || n > points_.size()) {
    throw InvalidArgument("requested " + std::to_string(n) + " neighbours from " +
                          std::to_string(points_.size()) + " points");
  }
  // Max-heap of the best n candidates seen so far.
  std::priority_queue<Candidate> best;

  auto visit = [&](auto&& self, std::size_t lo, std::size_t hi) -> void {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const std::size_t idx = order_[mid];
    const Candidate c{(points_[idx] - p).squaredNorm(), idx};
    if (best.size() < n) {
      best.push(c);
    } else if (c < best.top()) {
      best.pop();
      best.push(c);
    }
    if (hi - lo == 1) return;
    const int axis = axis_[mid];
    const double diff = p[axis] - points_[idx][axis];
    const bool left_first = diff <= 0.0;
    if (left_first) {
      self(self, lo, mid);
    } else {
      self(self, mid + 1, hi);
    }
    // Equal distance to the plane may still hide a tie with a smaller index.
    if (best.size() < n || diff * diff <= best.top().dist2) {
      if (left_first) {
        self(self, mid + 1, hi);
      } else {
        self(self, lo, mid);
      }
    }
  };
  visit(visit, 0, points_.size());

  Support s;
  s.indices.resize(best.size());
  s.distances.resize(best.size());
  for (std::size_t k = best.size(); k-- > 0;) {
    s.indices[k] = best.top().index;
    s.distances[k] = std::sqrt(best.top().dist2);
    best.pop();
  }
  return s;
}

Support centered_support(const KdTree& tree, std::span<const Vec2> points, std::size_t i,
                         std::size_t n) {
  Support s = tree.knn(points[i], n);
  // A point coincides with itself at distance zero; ensure it leads.
  if (s.indices.front() != i) {
    auto it = std::find(s.indices.begin(), s.indices.end(), i);
    if (it == s.indices.end() || s.distances[it - s.indices.begin()] != 0.0) {
      throw InvalidArgument("point " + std::to_string(i) + " is not the center of its support");
    }
    const auto k = static_cast<std::size_t>(it - s.indices.begin());
    std::rotate(s.indices.begin(), s.indices.begin() + k, s.indices.begin() + k + 1);
  }
  return s;
}

std::vector<Support> find_supports(std::span<const Vec2> points, std::size_t n) {
  const KdTree tree(points);
  std::vector<Support> supports;
  supports.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) supports.push_back(centered_support(tree, points, i, n));
  return supports;
}

}  // namespace mlsm
