#include "mlsm/cases.hpp"

#include "mlsm/metrics.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace mlsm {

HertzGeometry hertz_geometry(const HertzParams& params) {
  if (!(params.load > 0.0) || !(params.young1 > 0.0) || !(params.young2 > 0.0) || !(params.radius1 > 0.0) ||
      !(params.radius2 > 0.0)) {
    throw InvalidArgument("contact load, moduli and radii must be positive");
  }
  const double inv_r = 1.0 / params.radius1 + 1.0 / params.radius2;
  const double inv_e = (1.0 - params.poisson1 * params.poisson1) / params.young1 +
                       (1.0 - params.poisson2 * params.poisson2) / params.young2;
  if (!(inv_e > 0.0)) throw InvalidArgument("contact modulus is not positive");
  HertzGeometry g{};
  g.radius = 1.0 / inv_r;
  g.contact_modulus = 1.0 / inv_e;
  g.half_width = 2.0 * std::sqrt(params.load * g.radius / (std::numbers::pi * g.contact_modulus));
  g.peak_pressure = std::sqrt(params.load * g.contact_modulus / (std::numbers::pi * g.radius));
  return g;
}

double hertz_pressure(double x, double b, double p0) {
  if (std::abs(x) > b) return 0.0;
  return p0 * std::sqrt(std::max(0.0, 1.0 - x * x / (b * b)));
}

StressTensor hertz_stress(double x, double y, double b, double p0) {
  const double a = b * b - x * x + y * y;
  const double root = std::sqrt(a * a + 4.0 * x * x * y * y);
  const double m2 = std::max(0.0, 0.5 * (root + a));
  const double n2 = std::max(0.0, 0.5 * (root - a));
  const double denom = m2 + n2;
  if (denom == 0.0) {
    // Edges of the contact (x = +-b, y = 0): continuous surface limit.
    const double p = hertz_pressure(x, b, p0);
    return {-p, -p, 0.0};
  }
  const double m = std::sqrt(m2);
  const double n = (x >= 0.0 ? 1.0 : -1.0) * std::sqrt(n2);
  const double k = p0 / b;
  const double ratio = (y * y + n2) / denom;
  return {-k * (m * (1.0 + ratio) + 2.0 * y), -k * m * (1.0 - ratio), k * n * (m2 - y * y) / denom};
}

HertzConfig HertzConfig::full_schedule() {
  HertzConfig c;
  c.height = 1.0;
  c.primary_levels = std::size(kHertzPrimarySchedule);
  c.secondary_levels = std::size(kHertzSecondarySchedule);
  return c;
}

double hertz_domain_height(const HertzConfig& config) {
  if (config.height) return *config.height;
  return config.height_over_b * hertz_geometry(config.params).half_width;
}

std::vector<RefineRegion> hertz_regions(const HertzConfig& config) {
  const double b = hertz_geometry(config.params).half_width;
  const double big_h = hertz_domain_height(config);
  std::vector<double> primary;
  for (double h : kHertzPrimarySchedule) {
    if (h * b < big_h) primary.push_back(h);
  }
  if (config.primary_levels > primary.size()) {
    throw InvalidArgument("only " + std::to_string(primary.size()) +
                          " primary refinement regions fit inside the domain");
  }
  if (config.secondary_levels > std::size(kHertzSecondarySchedule)) {
    throw InvalidArgument("at most " + std::to_string(std::size(kHertzSecondarySchedule)) +
                          " secondary refinement levels are defined");
  }
  std::vector<RefineRegion> regions;
  std::size_t level = 0;
  for (std::size_t k = 0; k < config.primary_levels; ++k) {
    const double h = primary[k];
    regions.push_back({{-h * b, h * b, -h * b, 0.0}, ++level});
  }
  for (std::size_t k = 0; k < config.secondary_levels; ++k) {
    const double h = kHertzSecondarySchedule[k];
    ++level;
    for (double c : {-b, b}) regions.push_back({{c - h * b, c + h * b, -h * b, 0.0}, level});
  }
  return regions;
}

NodeSet hertz_nodes(const HertzConfig& config, TimingReport* timing) {
  TimingReport local;
  TimingReport& t = timing ? *timing : local;
  const double big_h = hertz_domain_height(config);
  if (config.nx < 3) throw InvalidArgument("contact grid needs at least 3 nodes across");
  const Rect rect{-big_h, big_h, -big_h, 0.0};
  const double h = rect.width() / static_cast<double>(config.nx - 1);
  std::optional<NodeSet> nodes;
  {
    ScopedPhase p(t, Phase::kDomain);
    const auto ny = static_cast<std::size_t>(std::max<long long>(2, std::llround(big_h / h) + 1));
    nodes.emplace(build_rectangle_grid(rect, config.nx, ny));
  }
  const auto regions = hertz_regions(config);
  if (!regions.empty()) {
    ScopedPhase p(t, Phase::kRefinement);
    nodes.emplace(refine_levels(*nodes, regions, config.refine));
  }
  return *nodes;
}

CaseResult hertz_case(const HertzConfig& config, SparseSystem* system_out) {
  const auto start = std::chrono::steady_clock::now();
  const HertzGeometry geo = hertz_geometry(config.params);
  const double b = geo.half_width, p0 = geo.peak_pressure;
  TimingReport timing;
  const NodeSet nodes = hertz_nodes(config, &timing);

  BoundaryConditions bcs(nodes.size());
  const double tol = nodes.boundary_tolerance();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (!n.is_boundary()) continue;
    const auto pieces = nodes.domain().pieces_near(n.position, tol);
    const bool top_only = pieces.size() == 1 && pieces.front() == piece::kTop;
    if (top_only) {
      bcs[i] = Traction{Vec2(0.0, -hertz_pressure(n.position.x(), b, p0))};
    } else {
      bcs[i] = Essential{};
    }
  }
  const Material material{config.params.young1, config.params.poisson1, Formulation::kPlaneStress};
  ElasticitySolution sol =
      solve_elasticity(nodes, bcs, material, config.approx, config.solver, timing, {config.threads}, system_out);

  CaseResult result{nodes, std::move(sol.displacement), std::move(sol.stress), {}, {}, {}, {},
                    std::move(sol.report), timing, sol.matrix_size, sol.nonzeros};
  {
    ScopedPhase t(result.timing, Phase::kPostProcess);
    StressField exact;
    for (const Node& n : nodes.nodes()) {
      const StressTensor s = hertz_stress(n.position.x(), n.position.y(), b, p0);
      exact.xx.push_back(s.xx);
      exact.yy.push_back(s.yy);
      exact.xy.push_back(s.xy);
    }
    result.error_stress = error_einf_stress_scaled(result.stress, exact, p0);
    result.exact_stress = std::move(exact);
  }
  result.timing.total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace mlsm
