#pragma once

#include "mlsm/common.hpp"
#include "mlsm/nodeset.hpp"

#include <span>

namespace mlsm {

/// Repulsive-potential relaxation of interior nodes.
struct RelaxConfig {
  std::size_t iterations = 20;
  /// Dimensionless step; the offset is step * p_min^2 * sum of potential gradients.
  double step = 0.05;
  /// Support size, the node itself included; the other support nodes push on it.
  std::size_t support_size = 9;
  /// Shape parameter of the Gaussian potential, in units of p_min.
  double sigma = 1.0;

  void validate() const;
};

/// Offset -step * p_min^2 * sum_i grad w(p - p_i), with w the Gaussian weight
/// centred at p and p_min the distance to the closest of `neighbours`.
Vec2 relax_offset(const Vec2& p, std::span<const Vec2> neighbours, const RelaxConfig& config);

/// Jacobi-style sweeps: offsets of all interior nodes come from the pre-sweep
/// positions. Boundary nodes never move; a step that would leave the domain is
/// cut back to just inside the boundary.
NodeSet relax(const NodeSet& nodes, const RelaxConfig& config, unsigned threads = 1);

}  // namespace mlsm
