#include "mlsm/cases.hpp"

#include "mlsm/metrics.hpp"
#include "mlsm/perturb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace mlsm {

namespace {

bool touches(const std::vector<BoundaryPiece>& pieces, BoundaryPiece which) {
  return std::find(pieces.begin(), pieces.end(), which) != pieces.end();
}

void finish_total(CaseResult& result, std::chrono::steady_clock::time_point start) {
  result.timing.total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void copy_solution(CaseResult& result, ElasticitySolution&& sol) {
  result.displacement = std::move(sol.displacement);
  result.stress = std::move(sol.stress);
  result.report = std::move(sol.report);
  result.matrix_size = sol.matrix_size;
  result.nonzeros = sol.nonzeros;
}

}  // namespace

StressTensor timoshenko_stress(double x, double y, const BeamParams& beam) {
  const double p = beam.load, i = beam.inertia(), d = beam.depth;
  return {p * x * y / i, 0.0, p / (2.0 * i) * (d * d / 4.0 - y * y)};
}

Vec2 timoshenko_displacement(double x, double y, const BeamParams& beam) {
  const double p = beam.load, i = beam.inertia(), d = beam.depth, l = beam.length;
  const double nu = beam.poisson, e = beam.young;
  const double u = p * y * (3 * d * d * (nu + 1) - 4 * (3 * l * l + (nu + 2) * y * y - 3 * x * x)) / (24 * e * i);
  const double v = -p * (3 * d * d * (nu + 1) * (l - x) + 4 * (l - x) * (l - x) * (2 * l + x) + 12 * nu * x * y * y) /
                   (24 * e * i);
  return {u, v};
}

NodeSet cantilever_nodes(const BeamParams& beam, std::size_t nx) {
  if (nx < 2) throw InvalidArgument("cantilever needs at least 2 nodes along its length");
  const double h = beam.length / static_cast<double>(nx - 1);
  const auto ny = static_cast<std::size_t>(std::max<long long>(2, std::llround(beam.depth / h) + 1));
  return build_rectangle_grid(beam.rect(), nx, ny);
}

BoundaryConditions cantilever_conditions(const NodeSet& nodes, const BeamParams& beam, bool all_essential) {
  BoundaryConditions bcs(nodes.size());
  const double tol = nodes.boundary_tolerance();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (!n.is_boundary()) continue;
    const Vec2& p = n.position;
    const auto pieces = nodes.domain().pieces_near(p, tol);
    if (all_essential || touches(pieces, piece::kRight)) {
      bcs[i] = Essential{timoshenko_displacement(p.x(), p.y(), beam)};
      continue;
    }
    const StressTensor s = timoshenko_stress(p.x(), p.y(), beam);
    const Vec2 t(s.xx * n.normal.x() + s.xy * n.normal.y(), s.xy * n.normal.x() + s.yy * n.normal.y());
    bcs[i] = Traction{t};
  }
  return bcs;
}

CaseResult cantilever_case(const CantileverConfig& config, SparseSystem* system_out) {
  const auto start = std::chrono::steady_clock::now();
  TimingReport timing;
  std::optional<NodeSet> nodes;
  {
    ScopedPhase t(timing, Phase::kDomain);
    nodes.emplace(cantilever_nodes(config.beam, config.nx));
    if (config.perturbation > 0.0) nodes.emplace(perturb_nodes(*nodes, config.perturbation, config.seed));
  }
  const BoundaryConditions bcs = cantilever_conditions(*nodes, config.beam, config.all_essential);
  ElasticitySolution sol = solve_elasticity(*nodes, bcs, config.beam.material(), config.approx, config.solver,
                                            timing, {config.threads}, system_out);

  CaseResult result{*nodes, {}, {}, {}, {}, {}, {}, {}, timing, 0, 0};
  copy_solution(result, std::move(sol));
  {
    ScopedPhase t(result.timing, Phase::kPostProcess);
    Displacements exact_u;
    StressField exact_s;
    for (const Node& n : nodes->nodes()) {
      const Vec2 u = timoshenko_displacement(n.position.x(), n.position.y(), config.beam);
      const StressTensor s = timoshenko_stress(n.position.x(), n.position.y(), config.beam);
      exact_u.u.push_back(u.x());
      exact_u.v.push_back(u.y());
      exact_s.xx.push_back(s.xx);
      exact_s.yy.push_back(s.yy);
      exact_s.xy.push_back(s.xy);
    }
    result.error_displacement = error_einf_displacement(result.displacement, exact_u);
    result.error_stress = error_einf_stress(result.stress, exact_s);
    result.exact_displacement = std::move(exact_u);
    result.exact_stress = std::move(exact_s);
  }
  finish_total(result, start);
  return result;
}

std::vector<Circle> DrilledBeamConfig::default_holes(const BeamParams& beam) {
  const double d = beam.depth, l = beam.length;
  return {{{0.2 * l, 0.1 * d}, 0.22 * d}, {{0.5 * l, -0.12 * d}, 0.18 * d}, {{0.78 * l, 0.08 * d}, 0.25 * d}};
}

std::vector<RefineRegion> hole_regions(const Circle& hole, double spacing, std::size_t levels) {
  std::vector<RefineRegion> regions;
  for (std::size_t k = 1; k <= levels; ++k) {
    const double half = hole.radius + static_cast<double>(levels - k + 1) * spacing;
    regions.push_back({{hole.center.x() - half, hole.center.x() + half, hole.center.y() - half,
                        hole.center.y() + half},
                       k});
  }
  return regions;
}

CaseResult drilled_cantilever_case(const DrilledBeamConfig& config, SparseSystem* system_out) {
  const auto start = std::chrono::steady_clock::now();
  TimingReport timing;
  const BeamParams& beam = config.beam;
  if (config.nx < 2) throw InvalidArgument("drilled beam needs at least 2 nodes along its length");
  const double h = beam.length / static_cast<double>(config.nx - 1);

  std::optional<NodeSet> nodes;
  {
    ScopedPhase t(timing, Phase::kDomain);
    nodes.emplace(build_drilled_domain(beam.rect(), config.holes, h));
  }
  if (config.refine_levels > 0 && !config.holes.empty()) {
    ScopedPhase t(timing, Phase::kRefinement);
    std::vector<RefineRegion> regions;
    for (const Circle& c : config.holes) {
      for (const RefineRegion& r : hole_regions(c, h, config.refine_levels)) regions.push_back(r);
    }
    nodes.emplace(refine_levels(*nodes, regions, config.refine));
  }
  if (config.relax.iterations > 0) {
    ScopedPhase t(timing, Phase::kRelaxation);
    nodes.emplace(relax(*nodes, config.relax, config.threads));
  }

  BoundaryConditions bcs(nodes->size());
  const double tol = nodes->boundary_tolerance();
  const Vec2 end_load(0.0, -config.load_scale * beam.load / beam.depth);
  for (std::size_t i = 0; i < nodes->size(); ++i) {
    const Node& n = (*nodes)[i];
    if (!n.is_boundary()) continue;
    const auto pieces = nodes->domain().pieces_near(n.position, tol);
    if (touches(pieces, piece::kRight)) {
      bcs[i] = Essential{};
    } else if (touches(pieces, piece::kLeft)) {
      // At a corner the averaged normal carries the mean of the two edge tractions.
      Vec2 normal_sum = Vec2::Zero();
      for (BoundaryPiece p : pieces) normal_sum += nodes->domain().piece_normal(n.position, p);
      bcs[i] = Traction{end_load / normal_sum.norm()};
    } else {
      bcs[i] = Traction{};
    }
  }
  ElasticitySolution sol =
      solve_elasticity(*nodes, bcs, beam.material(), config.approx, config.solver, timing, {config.threads}, system_out);
  CaseResult result{*nodes, {}, {}, {}, {}, {}, {}, {}, timing, 0, 0};
  copy_solution(result, std::move(sol));
  finish_total(result, start);
  return result;
}

NodeSet refine_demo(const RefineDemoConfig& config, TimingReport* timing) {
  TimingReport local;
  TimingReport& t = timing ? *timing : local;
  std::optional<NodeSet> nodes;
  {
    ScopedPhase p(t, Phase::kDomain);
    nodes.emplace(build_drilled_domain(config.rect, {config.hole}, config.spacing));
  }
  {
    ScopedPhase p(t, Phase::kRefinement);
    const auto regions = hole_regions(config.hole, config.spacing, config.levels);
    nodes.emplace(refine_levels(*nodes, regions, config.refine));
  }
  {
    ScopedPhase p(t, Phase::kRelaxation);
    nodes.emplace(relax(*nodes, config.relax, config.threads));
  }
  return *nodes;
}

}  // namespace mlsm
