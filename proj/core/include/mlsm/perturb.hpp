#pragma once

#include "mlsm/nodeset.hpp"

#include <cstdint>

namespace mlsm {

/// Moves every interior node by sigma * U with U ~ Uniform([0, delta]^2), delta
/// the distance to its closest node. Boundary nodes stay put; a move that would
/// leave the domain is skipped. Deterministic for a given seed.
NodeSet perturb_nodes(const NodeSet& nodes, double sigma, std::uint64_t seed);

}  // namespace mlsm
