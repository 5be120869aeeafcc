#pragma once

#include "mlsm/domain.hpp"
#include "mlsm/elasticity.hpp"
#include "mlsm/nodeset.hpp"
#include "mlsm/pipeline.hpp"
#include "mlsm/refine.hpp"
#include "mlsm/relax.hpp"
#include "mlsm/solver.hpp"
#include "mlsm/timing.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace mlsm {

struct StressTensor {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;
};

/// Everything a case driver produces.
struct CaseResult {
  NodeSet nodes;
  Displacements displacement;
  StressField stress;
  std::optional<Displacements> exact_displacement;
  std::optional<StressField> exact_stress;
  /// Relative sup-norm errors; for contact problems the stress error is scaled by p0.
  std::optional<double> error_displacement;
  std::optional<double> error_stress;
  SolveReport report;
  TimingReport timing;
  std::size_t matrix_size = 0;
  std::size_t nonzeros = 0;
};

// ---------------------------------------------------------------------------
// Cantilever beam under a parabolic end load.

struct BeamParams {
  double length = 30.0;  // m
  double depth = 5.0;    // m
  double young = 72.1e9;
  double poisson = 0.33;
  double load = 1000.0;  // N/m

  /// D^3 / 12 per unit thickness.
  double inertia() const { return depth * depth * depth / 12.0; }
  Rect rect() const { return {0.0, length, -depth / 2, depth / 2}; }
  Material material() const { return {young, poisson, Formulation::kPlaneStress}; }
};

StressTensor timoshenko_stress(double x, double y, const BeamParams& beam);
Vec2 timoshenko_displacement(double x, double y, const BeamParams& beam);

struct CantileverConfig {
  BeamParams beam;
  /// Nodes along the beam; the height gets the matching count at equal spacing.
  std::size_t nx = 61;
  ApproxConfig approx;
  SolverConfig solver;
  /// Interior-node perturbation magnitude (0 keeps the regular grid).
  double perturbation = 0.0;
  std::uint64_t seed = 1;
  /// Impose the exact displacement on every boundary node.
  bool all_essential = false;
  unsigned threads = 1;
};

/// Regular grid over the beam for a given node count along its length.
NodeSet cantilever_nodes(const BeamParams& beam, std::size_t nx);

/// Essential on the right edge, traction sigma_exact n everywhere else.
BoundaryConditions cantilever_conditions(const NodeSet& nodes, const BeamParams& beam, bool all_essential);

CaseResult cantilever_case(const CantileverConfig& config, SparseSystem* system_out = nullptr);

// ---------------------------------------------------------------------------
// Drilled cantilever: clamped right edge, uniform shear P/D on the left, free holes.

struct DrilledBeamConfig {
  BeamParams beam;
  std::vector<Circle> holes = default_holes(BeamParams{});
  std::size_t nx = 121;
  /// Refinement passes around each hole.
  std::size_t refine_levels = 2;
  RefineConfig refine;
  RelaxConfig relax;
  // The tensor terms of M9 destabilize refined and relaxed clouds; a complete quadratic basis does not.
  ApproxConfig approx{.basis = BasisSpec::monomials({{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}),
                      .support_size = 12,
                      .rank_policy = RankPolicy::kGrowSupport};
  SolverConfig solver;
  /// Multiplies the end load; 0 gives the unloaded beam.
  double load_scale = 1.0;
  unsigned threads = 1;

  /// Three holes along the beam axis, as a default demonstration geometry.
  static std::vector<Circle> default_holes(const BeamParams& beam);
};

CaseResult drilled_cantilever_case(const DrilledBeamConfig& config, SparseSystem* system_out = nullptr);

// ---------------------------------------------------------------------------
// Hertzian contact of a cylinder on a half plane.

struct HertzParams {
  double load = 543.0;  // N/m
  double young1 = 72.1e9;
  double young2 = 72.1e9;
  double poisson1 = 0.33;
  double poisson2 = 0.33;
  double radius1 = 1.0;
  double radius2 = std::numeric_limits<double>::infinity();
};

struct HertzGeometry {
  double radius;          // combined R
  double contact_modulus; // E*
  double half_width;      // b
  double peak_pressure;   // p0
};

HertzGeometry hertz_geometry(const HertzParams& params);
/// Semi-elliptic contact pressure.
double hertz_pressure(double x, double b, double p0);
/// Stresses in the half plane y <= 0.
StressTensor hertz_stress(double x, double y, double b, double p0);

/// Primary refinement half-sizes in units of b (largest first).
inline constexpr double kHertzPrimarySchedule[] = {1000, 500, 200, 100, 50, 20, 10, 5, 4, 3, 2};
/// Secondary refinement half-sizes around x = +-b, in units of b.
inline constexpr double kHertzSecondarySchedule[] = {0.4, 0.3, 0.2, 0.1, 0.05, 0.0025};

struct HertzConfig {
  HertzParams params;
  /// Domain [-H, H] x [-H, 0] with H = height_over_b * b, unless `height` is set.
  double height_over_b = 1000.0;
  std::optional<double> height;
  /// Nodes across the top edge of the unrefined grid.
  std::size_t nx = 101;
  /// Number of primary regions applied, taken largest first among those smaller than the domain.
  std::size_t primary_levels = 0;
  std::size_t secondary_levels = 0;
  RefineConfig refine;
  // Refined grids leave some 9-node stencils rank deficient.
  ApproxConfig approx{.rank_policy = RankPolicy::kGrowSupport};
  SolverConfig solver;
  unsigned threads = 1;

  /// H = 1 m with the complete 11 + 6 level schedule.
  static HertzConfig full_schedule();
};

double hertz_domain_height(const HertzConfig& config);
/// Refinement regions for the configured schedule.
std::vector<RefineRegion> hertz_regions(const HertzConfig& config);
NodeSet hertz_nodes(const HertzConfig& config, TimingReport* timing = nullptr);

CaseResult hertz_case(const HertzConfig& config, SparseSystem* system_out = nullptr);

// ---------------------------------------------------------------------------
// Refinement demonstration: repeated refinement around a hole followed by relaxation.

struct RefineDemoConfig {
  Rect rect{0.0, 1.0, 0.0, 1.0};
  Circle hole{{0.5, 0.5}, 0.15};
  double spacing = 0.05;
  std::size_t levels = 4;
  RefineConfig refine;
  RelaxConfig relax;
  unsigned threads = 1;
};

/// Region k (1-based) is a square around the hole whose half-width shrinks with k.
std::vector<RefineRegion> hole_regions(const Circle& hole, double spacing, std::size_t levels);

NodeSet refine_demo(const RefineDemoConfig& config, TimingReport* timing = nullptr);

}  // namespace mlsm
