#include "mlsm/nodeset.hpp"

#include "mlsm/kdtree.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace mlsm {

NodeSet::NodeSet(DomainShape domain, std::vector<Node> nodes)
    : domain_(std::move(domain)), nodes_(std::move(nodes)) {}

std::size_t NodeSet::boundary_count() const {
  std::size_t count = 0;
  for (const Node& n : nodes_) count += n.is_boundary() ? 1 : 0;
  return count;
}

std::vector<Vec2> NodeSet::positions() const {
  std::vector<Vec2> out;
  out.reserve(nodes_.size());
  for (const Node& n : nodes_) out.push_back(n.position);
  return out;
}

void update_spacing(std::vector<Node>& nodes) {
  if (nodes.size() < 2) {
    for (Node& n : nodes) n.spacing = 0.0;
    return;
  }
  std::vector<Vec2> pts;
  pts.reserve(nodes.size());
  for (const Node& n : nodes) pts.push_back(n.position);
  const KdTree tree(pts);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].spacing = tree.knn(pts[i], 2).distances[1];
  }
}

void check_invariants(const NodeSet& set) {
  const double tol = set.boundary_tolerance();
  const double min_gap = 1e-12 * set.domain().diagonal();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Node& n = set[i];
    const std::string where = "node " + std::to_string(i) + ": ";
    const double sd = set.domain().signed_distance(n.position);
    if (n.is_boundary()) {
      if (std::abs(sd) > tol) throw InvalidArgument(where + "boundary node off the boundary");
      if (std::abs(n.normal.norm() - 1.0) > 1e-12) throw InvalidArgument(where + "normal not unit");
    } else if (!(sd < 0.0)) {
      throw InvalidArgument(where + "interior node outside the domain");
    }
    if (set.size() > 1 && !(n.spacing > min_gap)) {
      throw InvalidArgument(where + "coincides with another node");
    }
  }
}

NodeSet build_rectangle_grid(const Rect& rect, std::size_t nx, std::size_t ny) {
  DomainShape domain(rect);
  if (nx < 2 || ny < 2) throw InvalidArgument("grid needs at least 2 nodes per direction");
  const double dx = rect.width() / static_cast<double>(nx - 1);
  const double dy = rect.height() / static_cast<double>(ny - 1);
  std::vector<Node> nodes;
  nodes.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      Node n;
      // Hit the far edges exactly.
      const double x = i + 1 == nx ? rect.x_hi : rect.x_lo + static_cast<double>(i) * dx;
      const double y = j + 1 == ny ? rect.y_hi : rect.y_lo + static_cast<double>(j) * dy;
      n.position = {x, y};
      if (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny) {
        n.kind = NodeKind::kBoundary;
        n.normal = domain.outward_normal(n.position, 0.0);
      }
      nodes.push_back(n);
    }
  }
  update_spacing(nodes);
  return NodeSet(std::move(domain), std::move(nodes));
}

namespace {

std::size_t count_for(double length, double h) {
  if (!(h > 0.0)) throw InvalidArgument("grid spacing must be positive");
  if (h > length) throw InvalidArgument("grid spacing exceeds the rectangle side");
  return static_cast<std::size_t>(std::llround(length / h)) + 1;
}

}  // namespace

NodeSet build_rectangle_grid(const Rect& rect, double h) {
  if (!(rect.width() > 0.0) || !(rect.height() > 0.0)) {
    throw InvalidArgument("degenerate rectangle");
  }
  return build_rectangle_grid(rect, count_for(rect.width(), h), count_for(rect.height(), h));
}

NodeSet build_drilled_domain(const Rect& rect, const std::vector<Circle>& holes, double h) {
  DomainShape domain(rect, holes);
  NodeSet grid = build_rectangle_grid(rect, h);
  if (holes.empty()) return grid;

  std::vector<Node> nodes;
  nodes.reserve(grid.size());
  for (const Node& n : grid.nodes()) {
    bool keep = true;
    for (const Circle& c : holes) {
      if ((n.position - c.center).norm() < c.radius + h / 2) keep = false;
    }
    if (keep) nodes.push_back(n);
  }
  for (std::size_t k = 0; k < holes.size(); ++k) {
    const Circle& c = holes[k];
    const auto count = static_cast<std::size_t>(std::ceil(2 * std::numbers::pi * c.radius / h - 1e-9));
    for (std::size_t i = 0; i < count; ++i) {
      const double phi = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
      Node n;
      n.position = c.center + c.radius * Vec2(std::cos(phi), std::sin(phi));
      n.kind = NodeKind::kBoundary;
      n.normal = domain.piece_normal(n.position, piece::hole(static_cast<int>(k)));
      nodes.push_back(n);
    }
  }
  update_spacing(nodes);
  NodeSet result(std::move(domain), std::move(nodes));
  check_invariants(result);
  return result;
}

void write_nodes_csv(std::ostream& out, const NodeSet& nodes) {
  const auto old = out.precision(17);
  out << "x,y,kind,nx,ny\n";
  for (const Node& n : nodes.nodes()) {
    out << n.position.x() << ',' << n.position.y() << ',';
    if (n.is_boundary()) {
      out << "boundary," << n.normal.x() << ',' << n.normal.y() << '\n';
    } else {
      out << "interior,,\n";
    }
  }
  out.precision(old);
}

}  // namespace mlsm
