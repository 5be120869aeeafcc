#pragma once

#include "mlsm/approximation.hpp"
#include "mlsm/elasticity.hpp"
#include "mlsm/solver.hpp"
#include "mlsm/timing.hpp"

namespace mlsm {

/// Stencil setup shared by all cases.
struct ApproxConfig {
  BasisSpec basis = BasisSpec::monomial9();
  std::size_t support_size = 9;
  WeightSpec weight{1.0};
  double rcond = 1e-12;
  RankPolicy rank_policy = RankPolicy::kStrict;

  void validate() const;
};

struct ElasticitySolution {
  Displacements displacement;
  StressField stress;
  SolveReport report;
  std::size_t matrix_size = 0;
  std::size_t nonzeros = 0;
};

struct PipelineOptions {
  unsigned threads = 1;
};

/// Supports, stencils, assembly, solve and stress recovery on a fixed node set.
/// When `system_out` is given it receives the assembled system.
ElasticitySolution solve_elasticity(const NodeSet& nodes, const BoundaryConditions& bcs,
                                    const Material& material, const ApproxConfig& approx,
                                    const SolverConfig& solver, TimingReport& timing,
                                    const PipelineOptions& options = {},
                                    SparseSystem* system_out = nullptr);

}  // namespace mlsm
