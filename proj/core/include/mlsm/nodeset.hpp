#pragma once

#include "mlsm/common.hpp"
#include "mlsm/domain.hpp"

#include <iosfwd>
#include <vector>

namespace mlsm {

enum class NodeKind { kInterior, kBoundary };

struct Node {
  Vec2 position = Vec2::Zero();
  NodeKind kind = NodeKind::kInterior;
  /// Outward unit normal; zero for interior nodes.
  Vec2 normal = Vec2::Zero();
  /// Distance to the nearest other node.
  double spacing = 0.0;

  bool is_boundary() const { return kind == NodeKind::kBoundary; }
};

/// Point-cloud discretization of a DomainShape.
class NodeSet {
 public:
  NodeSet(DomainShape domain, std::vector<Node> nodes);

  const DomainShape& domain() const { return domain_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& operator[](std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t boundary_count() const;
  std::vector<Vec2> positions() const;

  /// Positional tolerance used for boundary checks: 1e-9 of the domain diagonal.
  double boundary_tolerance() const { return 1e-9 * domain_.diagonal(); }

 private:
  DomainShape domain_;
  std::vector<Node> nodes_;
};

/// Recomputes Node::spacing as the nearest-neighbour distance of every node.
void update_spacing(std::vector<Node>& nodes);

/// Throws InvalidArgument if any NodeSet invariant is violated.
void check_invariants(const NodeSet& nodes);

/// Uniform nx-by-ny lattice over rect; perimeter nodes are boundary nodes.
NodeSet build_rectangle_grid(const Rect& rect, std::size_t nx, std::size_t ny);
/// Lattice whose spacing is as close to h as divides rect evenly.
NodeSet build_rectangle_grid(const Rect& rect, double h);

/// Rectangle grid with circular holes; hole circles are sampled at spacing h.
NodeSet build_drilled_domain(const Rect& rect, const std::vector<Circle>& holes, double h);

/// Writes `x,y,kind,nx,ny` rows with a header.
void write_nodes_csv(std::ostream& out, const NodeSet& nodes);

}  // namespace mlsm
