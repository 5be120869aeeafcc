#include "mlsm/refine.hpp"

#include "mlsm/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

namespace mlsm {

void RefineConfig::validate() const {
  if (!(proximity > 0.0 && proximity < 1.0)) throw InvalidArgument("refinement proximity must lie in (0, 1)");
  if (support_size < 2) throw InvalidArgument("refinement support must contain at least one neighbour");
}

namespace {

// Hash grid over the nodes accepted during the current pass.
class AcceptedPoints {
 public:
  explicit AcceptedPoints(double cell) : cell_(cell) {}

  void insert(const Vec2& p) {
    cells_[key(cell_of(p.x()), cell_of(p.y()))].push_back(p);
  }

  bool any_within(const Vec2& p, double radius) const {
    const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell_));
    const std::int64_t cx = cell_of(p.x()), cy = cell_of(p.y());
    for (std::int64_t i = cx - reach; i <= cx + reach; ++i) {
      for (std::int64_t j = cy - reach; j <= cy + reach; ++j) {
        const auto it = cells_.find(key(i, j));
        if (it == cells_.end()) continue;
        for (const Vec2& q : it->second) {
          if ((q - p).norm() < radius) return true;
        }
      }
    }
    return false;
  }

 private:
  std::int64_t cell_of(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  static std::uint64_t key(std::int64_t i, std::int64_t j) {
    return (static_cast<std::uint64_t>(i) << 32) ^ (static_cast<std::uint64_t>(j) & 0xffffffffULL);
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<Vec2>> cells_;
};

bool inside_any(const Vec2& p, std::span<const Rect> areas) {
  return std::any_of(areas.begin(), areas.end(), [&](const Rect& r) { return r.covers(p); });
}

}  // namespace

NodeSet refine_once(const NodeSet& nodes, std::span<const Rect> areas, const RefineConfig& config) {
  config.validate();
  const std::size_t count = nodes.size();
  if (count < 2) return nodes;
  const DomainShape& domain = nodes.domain();
  const double tol = nodes.boundary_tolerance();
  const std::vector<Vec2> positions = nodes.positions();
  const KdTree tree(positions);
  const std::size_t n = std::min(config.support_size, count);

  std::vector<std::size_t> selected;
  double min_threshold = std::numeric_limits<double>::infinity();
  std::vector<Support> supports;
  for (std::size_t i = 0; i < count; ++i) {
    if (!inside_any(positions[i], areas)) continue;
    selected.push_back(i);
    supports.push_back(tree.knn(positions[i], n));
    min_threshold = std::min(min_threshold, config.proximity * supports.back().p_min() / 2);
  }
  if (selected.empty()) return nodes;

  std::vector<Node> out = nodes.nodes();
  AcceptedPoints accepted(min_threshold);

  for (std::size_t s = 0; s < selected.size(); ++s) {
    const std::size_t i = selected[s];
    const Node& node = nodes[i];
    const Support& support = supports[s];
    const double threshold = config.proximity * support.p_min() / 2;
    const auto node_pieces = node.is_boundary() ? domain.pieces_near(node.position, tol)
                                                : std::vector<BoundaryPiece>{};

    for (std::size_t k = 0; k < support.size(); ++k) {
      const std::size_t j = support.indices[k];
      if (j == i) continue;
      const Node& other = nodes[j];
      Node candidate;
      candidate.position = 0.5 * (node.position + other.position);

      bool on_boundary = false;
      if (node.is_boundary() && other.is_boundary()) {
        // Both ends must lie on a common piece and the chord must hug it.
        for (BoundaryPiece b : domain.pieces_near(other.position, tol)) {
          if (std::find(node_pieces.begin(), node_pieces.end(), b) == node_pieces.end()) continue;
          if (domain.distance_to_piece(candidate.position, b) > config.proximity * support.p_min()) continue;
          candidate.position = domain.project(candidate.position, b);
          candidate.kind = NodeKind::kBoundary;
          candidate.normal = domain.outward_normal(candidate.position, tol);
          on_boundary = true;
          break;
        }
      }
      if (!on_boundary && !domain.contains(candidate.position)) continue;

      if (tree.knn(candidate.position, 1).distances[0] < threshold) continue;
      if (accepted.any_within(candidate.position, threshold)) continue;
      accepted.insert(candidate.position);
      out.push_back(candidate);
    }
  }
  update_spacing(out);
  return NodeSet(domain, std::move(out));
}

NodeSet refine_once(const NodeSet& nodes, const Rect& area, const RefineConfig& config) {
  return refine_once(nodes, std::span<const Rect>(&area, 1), config);
}

NodeSet refine_levels(const NodeSet& nodes, std::span<const RefineRegion> regions,
                      const RefineConfig& config) {
  std::size_t passes = 0;
  for (const RefineRegion& r : regions) {
    if (!(r.area.width() > 0.0) || !(r.area.height() > 0.0)) {
      throw InvalidArgument("refinement region is degenerate");
    }
    passes = std::max(passes, r.level);
  }
  NodeSet current = nodes;
  for (std::size_t pass = 1; pass <= passes; ++pass) {
    std::vector<Rect> areas;
    for (const RefineRegion& r : regions) {
      if (r.level >= pass) areas.push_back(r.area);
    }
    current = refine_once(current, areas, config);
  }
  return current;
}

}  // namespace mlsm
