#include "mlsm/pipeline.hpp"

#include "mlsm/kdtree.hpp"

#include <optional>

namespace mlsm {

void ApproxConfig::validate() const {
  if (support_size < 2) throw InvalidArgument("support size must be at least 2");
  if (support_size < basis.size()) throw InvalidArgument("support size is smaller than the basis");
  if (!(weight.sigma > 0.0)) throw InvalidArgument("weight shape parameter must be positive");
  if (basis.kind == BasisSpec::Kind::kGaussian && !(basis.sigma > 0.0)) {
    throw InvalidArgument("gaussian basis shape parameter must be positive");
  }
}

ElasticitySolution solve_elasticity(const NodeSet& nodes, const BoundaryConditions& bcs,
                                    const Material& material, const ApproxConfig& approx,
                                    const SolverConfig& solver, TimingReport& timing,
                                    const PipelineOptions& options, SparseSystem* system_out) {
  approx.validate();
  material.validate();
  if (approx.support_size > nodes.size()) throw InvalidArgument("support larger than the node set");

  std::vector<Support> supports;
  {
    ScopedPhase t(timing, Phase::kSupport);
    supports = find_supports(nodes.positions(), approx.support_size);
  }
  std::optional<ShapeSet> shapes;
  {
    ScopedPhase t(timing, Phase::kShapes);
    const auto ops = required_operators(nodes);
    shapes.emplace(build_shape_set(nodes, std::move(supports), approx.basis, approx.weight, ops,
                                   options.threads, approx.rcond, approx.rank_policy));
  }
  SparseSystem system;
  {
    ScopedPhase t(timing, Phase::kAssembly);
    system = assemble(nodes, *shapes, material, bcs, options.threads);
  }
  ElasticitySolution out;
  out.matrix_size = static_cast<std::size_t>(system.matrix.rows());
  out.nonzeros = static_cast<std::size_t>(system.matrix.nonZeros());

  Solution sol = solve(system, solver);
  timing.add(Phase::kPreconditioner, sol.report.preconditioner_seconds);
  timing.add(Phase::kSolve, sol.report.iteration_seconds);
  out.report = std::move(sol.report);
  {
    ScopedPhase t(timing, Phase::kPostProcess);
    out.displacement = split_solution(sol.x);
    out.stress = compute_stresses(nodes, *shapes, material, out.displacement);
  }
  if (system_out) *system_out = std::move(system);
  return out;
}

}  // namespace mlsm
