#pragma once

#include "mlsm/domain.hpp"
#include "mlsm/nodeset.hpp"

#include <span>
#include <vector>

namespace mlsm {

/// Rectangle whose nodes are refined in the first `level` passes.
struct RefineRegion {
  Rect area;
  std::size_t level = 1;
};

struct RefineConfig {
  /// A candidate closer than proximity * p_min / 2 to any node is dropped.
  double proximity = 0.75;
  /// Support size used to pick midpoint partners.
  std::size_t support_size = 9;

  void validate() const;
};

/// One refinement pass: every node inside any of `areas` spawns midpoints towards
/// its support nodes. Existing nodes are kept unchanged and new nodes are appended.
NodeSet refine_once(const NodeSet& nodes, std::span<const Rect> areas, const RefineConfig& config);
NodeSet refine_once(const NodeSet& nodes, const Rect& area, const RefineConfig& config);

/// Pass k refines the union of the regions with level >= k; the support index is
/// rebuilt between passes.
NodeSet refine_levels(const NodeSet& nodes, std::span<const RefineRegion> regions,
                      const RefineConfig& config);

}  // namespace mlsm
