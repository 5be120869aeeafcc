#include "mlsm/perturb.hpp"

#include <random>

namespace mlsm {

NodeSet perturb_nodes(const NodeSet& nodes, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidArgument("perturbation magnitude must be non-negative");
  if (sigma == 0.0) return nodes;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Node> out = nodes.nodes();
  for (Node& n : out) {
    if (n.is_boundary()) continue;
    const double delta = n.spacing;
    // Draw both components even if the move is rejected so the stream stays aligned.
    const Vec2 offset(sigma * delta * unit(rng), sigma * delta * unit(rng));
    const Vec2 moved = n.position + offset;
    if (nodes.domain().contains(moved)) n.position = moved;
  }
  update_spacing(out);
  return NodeSet(nodes.domain(), std::move(out));
}

}  // namespace mlsm
