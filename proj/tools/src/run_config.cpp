#include "run_config.hpp"

#include <algorithm>
#include <array>
#include <string_view>

namespace mlsm::cli {

namespace {

constexpr std::array kCases = {"cantilever", "cantilever-perturbed", "drilled-beam", "hertz", "refine-demo"};
constexpr std::array kBases = {"m9", "g9", "m6"};
constexpr std::array kPolicies = {"strict", "min-norm", "grow"};
constexpr std::array kSolvers = {"bicgstab", "direct"};

template <std::size_t N>
bool one_of(const std::string& value, const std::array<const char*, N>& allowed) {
  return std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return value == a; });
}

template <std::size_t N>
std::string listing(const std::array<const char*, N>& allowed) {
  std::string out;
  for (const char* a : allowed) out += (out.empty() ? "" : ", ") + std::string(a);
  return out;
}

}  // namespace

void add_run_options(CLI::App& app, RunConfig& c) {
  app.set_config("--config", "", "TOML or INI file with option values (keys as long option names)");
  app.allow_config_extras(false);

  app.add_option("--case", c.case_name, "Case: " + listing(kCases));
  app.add_option("--out", c.out_dir, std::string("Output directory (default: $") + kOutputDirEnv + ")");

  auto* g = app.add_option_group("Discretization");
  g->add_option("--nx", c.nx, "Nodes along the long side of the unrefined grid");
  g->add_option("--basis", c.basis, "Approximation basis: m9, g9 or m6");
  g->add_option("--sigma-b", c.sigma_b, "Gaussian basis shape parameter, in units of p_min");
  g->add_option("--n", c.support_size, "Support size");
  g->add_option("--sigma-w", c.sigma_w, "Weight shape parameter, in units of p_min");
  g->add_option("--rank-policy", c.rank_policy, "Rank-deficient stencils: strict, min-norm or grow");
  g->add_option("--refine-levels", c.refine_levels,
                "Refinement levels (hertz: primary regions; drilled-beam and refine-demo: levels around holes)");
  g->add_option("--secondary-levels", c.secondary_levels, "Hertz secondary refinement levels around x = +-b");
  g->add_flag("--full-schedule", c.full_schedule, "Hertz: H = 1 m with the full refinement schedule");
  g->add_option("--height-over-b", c.height_over_b, "Hertz domain height in units of b");
  g->add_option("--perturbation", c.perturbation, "Interior-node perturbation magnitude");
  g->add_option("--seed", c.seed, "Seed for the perturbation");
  g->add_option("--relax-iterations", c.relax_iterations, "Relaxation sweeps");
  g->add_option("--relax-step", c.relax_step, "Relaxation step");
  g->add_flag("--all-essential", c.all_essential, "Cantilever: exact displacement on every boundary node");
  g->add_option("--load-scale", c.load_scale, "Drilled beam: load multiplier");

  auto* s = app.add_option_group("Solver");
  s->add_option("--solver", c.solver, "bicgstab or direct");
  s->add_option("--tolerance", c.tolerance, "Relative residual tolerance");
  s->add_option("--max-iterations", c.max_iterations, "Iteration cap (0: automatic)");
  s->add_option("--ilut-fill", c.ilut_fill, "ILUT fill factor");
  s->add_option("--ilut-drop", c.ilut_drop, "ILUT drop tolerance");
  s->add_option("--threads", c.threads, "Worker threads");

  auto* w = app.add_option_group("Sweeps (one list per run)");
  w->add_option("--sweep-nx", c.sweep_nx, "List of grid sizes")->delimiter(',');
  w->add_option("--sweep-perturbation", c.sweep_perturbation, "List of perturbation magnitudes")->delimiter(',');
  w->add_option("--sweep-seed", c.sweep_seed, "List of perturbation seeds")->delimiter(',');
  w->add_option("--sweep-refine-levels", c.sweep_refine_levels, "List of refinement level counts")->delimiter(',');

  auto* o = app.add_option_group("Extra output");
  o->add_flag("--vtk", c.vtk, "Also write fields.vtk");
  o->add_flag("--dump-matrix", c.dump_matrix, "Write the assembled system to matrix.txt");
  o->add_flag("--dump-stencils", c.dump_stencils, "Write all stencils to stencils.csv");
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> errors;
  if (c.case_name.empty()) {
    errors.push_back("missing key: case (" + listing(kCases) + ")");
  } else if (!one_of(c.case_name, kCases)) {
    errors.push_back("case: unknown value '" + c.case_name + "' (" + listing(kCases) + ")");
  }
  if (c.out_dir.empty()) errors.push_back(std::string("missing key: out (or set ") + kOutputDirEnv + ")");

  if (c.nx && *c.nx < 3) errors.push_back("nx: must be at least 3");
  if (c.basis && !one_of(*c.basis, kBases)) errors.push_back("basis: unknown value '" + *c.basis + "'");
  if (!(c.sigma_b > 0)) errors.push_back("sigma-b: must be positive");
  if (c.support_size && *c.support_size < 2) errors.push_back("n: must be at least 2");
  if (c.support_size && c.basis) {
    const std::size_t m = *c.basis == "m6" ? 6 : 9;
    if (*c.support_size < m) errors.push_back("n: smaller than the basis size " + std::to_string(m));
  }
  if (!(c.sigma_w > 0)) errors.push_back("sigma-w: must be positive");
  if (c.rank_policy && !one_of(*c.rank_policy, kPolicies)) {
    errors.push_back("rank-policy: unknown value '" + *c.rank_policy + "' (" + listing(kPolicies) + ")");
  }
  if (c.height_over_b && !(*c.height_over_b > 0)) errors.push_back("height-over-b: must be positive");
  if (c.perturbation && !(*c.perturbation >= 0)) errors.push_back("perturbation: must be non-negative");
  if (c.relax_step && !(*c.relax_step >= 0)) errors.push_back("relax-step: must be non-negative");
  if (!one_of(c.solver, kSolvers)) errors.push_back("solver: unknown value '" + c.solver + "' (bicgstab, direct)");
  if (!(c.tolerance > 0 && c.tolerance < 1)) errors.push_back("tolerance: must lie in (0, 1)");
  if (!(c.ilut_fill > 0)) errors.push_back("ilut-fill: must be positive");
  if (!(c.ilut_drop >= 0)) errors.push_back("ilut-drop: must be non-negative");
  if (c.threads == 0) errors.push_back("threads: must be at least 1");

  const int sweeps = !c.sweep_nx.empty() + !c.sweep_perturbation.empty() + !c.sweep_seed.empty() +
                     !c.sweep_refine_levels.empty();
  if (sweeps > 1) errors.push_back("sweep: give at most one sweep list");
  for (std::size_t nx : c.sweep_nx)
    if (nx < 3) errors.push_back("sweep-nx: every entry must be at least 3");
  for (double p : c.sweep_perturbation)
    if (!(p >= 0)) errors.push_back("sweep-perturbation: entries must be non-negative");

  const std::string_view k = c.case_name;
  if (k == "refine-demo" && (c.dump_matrix || c.dump_stencils || c.vtk)) {
    errors.push_back("refine-demo produces nodes only; vtk, dump-matrix and dump-stencils do not apply");
  }
  if (k != "hertz" && (c.full_schedule || c.secondary_levels > 0 || c.height_over_b)) {
    errors.push_back("full-schedule, secondary-levels and height-over-b apply to the hertz case only");
  }
  if (k == "hertz" && c.full_schedule && (c.height_over_b || c.refine_levels || c.secondary_levels)) {
    errors.push_back("full-schedule fixes the height and levels; drop height-over-b, refine-levels, secondary-levels");
  }
  if ((k == "cantilever" || k == "cantilever-perturbed") && c.refine_levels) {
    errors.push_back("refine-levels does not apply to " + c.case_name);
  }
  if (k != "cantilever" && k != "cantilever-perturbed" && (c.perturbation || !c.sweep_perturbation.empty() ||
                                                           !c.sweep_seed.empty() || c.all_essential)) {
    errors.push_back("perturbation, seeds and all-essential apply to the cantilever cases only");
  }
  if ((k != "drilled-beam" && k != "refine-demo") && (c.relax_iterations || c.relax_step)) {
    errors.push_back("relax-iterations and relax-step apply to drilled-beam and refine-demo only");
  }
  return errors;
}

}  // namespace mlsm::cli
