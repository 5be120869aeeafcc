// mlsm: batch front-end for the meshless elasticity cases.
//
//   mlsm run --case cantilever --nx 61 --out results/
//   mlsm run --config run.toml --sweep-nx 61,121,241
//
// Exit status: 0 ok, 2 configuration error, 3 numerical failure, 1 anything else.

#include "run_config.hpp"

#include "mlsm/cases.hpp"
#include "mlsm/io.hpp"
#include "mlsm/kdtree.hpp"
#include "mlsm/perturb.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <variant>

namespace fs = std::filesystem;
using namespace mlsm;
using cli::RunConfig;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kNumerical = 3 };

ApproxConfig approx_for(const RunConfig& c, ApproxConfig approx) {
  if (c.basis == "m9") approx.basis = BasisSpec::monomial9();
  if (c.basis == "g9") approx.basis = BasisSpec::gaussian9(c.sigma_b);
  if (c.basis == "m6") approx.basis = BasisSpec::monomials({{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}});
  if (c.support_size) approx.support_size = *c.support_size;
  approx.weight.sigma = c.sigma_w;
  if (c.rank_policy == "strict") approx.rank_policy = RankPolicy::kStrict;
  if (c.rank_policy == "min-norm") approx.rank_policy = RankPolicy::kMinimumNorm;
  if (c.rank_policy == "grow") approx.rank_policy = RankPolicy::kGrowSupport;
  return approx;
}

// Case default, then the run's overrides.
ApproxConfig case_approx(const RunConfig& c) {
  ApproxConfig approx;
  if (c.case_name == "drilled-beam") approx = DrilledBeamConfig{}.approx;
  if (c.case_name == "hertz") approx = HertzConfig{}.approx;
  // Perturbed clouds default to the 13-node support; 9-node edge stencils lose rank there.
  if (c.case_name == "cantilever-perturbed") approx.support_size = 13;
  return approx_for(c, approx);
}

SolverConfig solver_for(const RunConfig& c) {
  SolverConfig s;
  s.method = c.solver == "direct" ? SolverMethod::kDirect : SolverMethod::kBicgstabIlut;
  s.tolerance = c.tolerance;
  s.max_iterations = c.max_iterations;
  s.ilut_fill = c.ilut_fill;
  s.ilut_drop = c.ilut_drop;
  return s;
}

RelaxConfig relax_for(const RunConfig& c, RelaxConfig r) {
  if (c.relax_iterations) r.iterations = *c.relax_iterations;
  if (c.relax_step) r.step = *c.relax_step;
  return r;
}

// One sweep point: the case settings that a sweep may override.
struct Point {
  std::optional<std::size_t> nx;
  std::optional<double> perturbation;
  std::uint64_t seed = 1;
  std::optional<std::size_t> levels;
  std::optional<double> parameter;
};

std::vector<Point> sweep_points(const RunConfig& c) {
  const Point base{c.nx, c.perturbation, c.seed, c.refine_levels, std::nullopt};
  std::vector<Point> points;
  for (std::size_t nx : c.sweep_nx) {
    Point p = base;
    p.nx = nx;
    p.parameter = static_cast<double>(nx);
    points.push_back(p);
  }
  for (double sigma : c.sweep_perturbation) {
    Point p = base;
    p.perturbation = sigma;
    p.parameter = sigma;
    points.push_back(p);
  }
  for (std::uint64_t seed : c.sweep_seed) {
    Point p = base;
    p.seed = seed;
    p.parameter = static_cast<double>(seed);
    points.push_back(p);
  }
  for (std::size_t levels : c.sweep_refine_levels) {
    Point p = base;
    p.levels = levels;
    p.parameter = static_cast<double>(levels);
    points.push_back(p);
  }
  if (points.empty()) points.push_back(base);
  return points;
}

// A solved case, or a bare node set for the refinement demo.
using Outcome = std::variant<CaseResult, std::pair<NodeSet, TimingReport>>;

Outcome run_point(const RunConfig& c, const Point& p, SparseSystem* system) {
  const std::string& k = c.case_name;
  if (k == "cantilever" || k == "cantilever-perturbed") {
    CantileverConfig cfg;
    cfg.nx = p.nx.value_or(cfg.nx);
    cfg.approx = case_approx(c);
    cfg.solver = solver_for(c);
    cfg.perturbation = p.perturbation.value_or(k == "cantilever-perturbed" ? 0.1 : 0.0);
    cfg.seed = p.seed;
    cfg.all_essential = c.all_essential;
    cfg.threads = c.threads;
    return cantilever_case(cfg, system);
  }
  if (k == "drilled-beam") {
    DrilledBeamConfig cfg;
    cfg.nx = p.nx.value_or(cfg.nx);
    cfg.refine_levels = p.levels.value_or(cfg.refine_levels);
    cfg.relax = relax_for(c, cfg.relax);
    cfg.approx = case_approx(c);
    cfg.solver = solver_for(c);
    cfg.load_scale = c.load_scale;
    cfg.threads = c.threads;
    return drilled_cantilever_case(cfg, system);
  }
  if (k == "hertz") {
    HertzConfig cfg = c.full_schedule ? HertzConfig::full_schedule() : HertzConfig{};
    cfg.nx = p.nx.value_or(cfg.nx);
    if (!c.full_schedule) {
      cfg.primary_levels = p.levels.value_or(0);
      cfg.secondary_levels = c.secondary_levels;
      cfg.height_over_b = c.height_over_b.value_or(cfg.height_over_b);
    }
    cfg.approx = case_approx(c);
    cfg.solver = solver_for(c);
    cfg.threads = c.threads;
    return hertz_case(cfg, system);
  }
  RefineDemoConfig cfg;
  if (p.nx) cfg.spacing = cfg.rect.width() / static_cast<double>(*p.nx - 1);
  cfg.levels = p.levels.value_or(cfg.levels);
  cfg.relax = relax_for(c, cfg.relax);
  cfg.threads = c.threads;
  const auto start = std::chrono::steady_clock::now();
  TimingReport timing;
  NodeSet nodes = refine_demo(cfg, &timing);
  timing.total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return std::pair{std::move(nodes), timing};
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

nlohmann::json report_json(const RunConfig& c, const CaseResult& r) {
  nlohmann::json j;
  j["case"] = c.case_name;
  j["nodes"] = r.nodes.size();
  j["boundary_nodes"] = r.nodes.boundary_count();
  j["matrix_size"] = r.matrix_size;
  j["nonzeros"] = r.nonzeros;
  j["solver"] = {{"method", c.solver},
                 {"iterations", r.report.iterations},
                 {"relative_residual", r.report.relative_residual},
                 {"scaled_residual", r.report.scaled_residual},
                 {"preconditioner_seconds", r.report.preconditioner_seconds},
                 {"iteration_seconds", r.report.iteration_seconds},
                 {"residual_history", r.report.residual_history}};
  if (r.error_displacement) j["error_displacement"] = *r.error_displacement;
  if (r.error_stress) j["error_stress"] = *r.error_stress;
  const auto svm = r.stress.von_mises();
  if (!svm.empty()) j["max_von_mises"] = *std::max_element(svm.begin(), svm.end());
  nlohmann::json phases;
  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    const auto phase = static_cast<Phase>(i);
    phases[std::string(phase_name(phase))] = r.timing.seconds(phase);
  }
  phases["total"] = r.timing.total;
  j["timing"] = phases;
  return j;
}

void write_stencils(const fs::path& path, const RunConfig& c, const CaseResult& r) {
  // Rebuilt from the final node set with the run's approximation settings; deterministic.
  const ApproxConfig approx = case_approx(c);
  const ShapeSet shapes = build_shape_set(r.nodes, find_supports(r.nodes.positions(), approx.support_size),
                                          approx.basis, approx.weight, required_operators(r.nodes), c.threads,
                                          approx.rcond, approx.rank_policy);
  auto out = open_output(path);
  write_stencils_csv(out, shapes);
}

int execute(const RunConfig& c) {
  const fs::path dir = c.out_dir;
  fs::create_directories(dir);
  const auto points = sweep_points(c);
  const bool sweeping = points.size() > 1;

  std::vector<SweepRow> rows;
  std::optional<Outcome> last;
  SparseSystem system;
  std::size_t failures = 0;
  for (const Point& p : points) {
    SweepRow row;
    row.parameter = p.parameter;
    const auto start = std::chrono::steady_clock::now();
    try {
      Outcome o = run_point(c, p, c.dump_matrix ? &system : nullptr);
      if (auto* r = std::get_if<CaseResult>(&o)) {
        row.nodes = r->nodes.size();
        row.error_displacement = r->error_displacement;
        row.error_stress = r->error_stress;
        row.seconds = r->timing.total;
        std::cout << c.case_name << ": N=" << row.nodes << " iterations=" << r->report.iterations
                  << " residual=" << r->report.relative_residual;
        if (r->error_displacement) std::cout << " e_inf_u=" << *r->error_displacement;
        if (r->error_stress) std::cout << " e_inf_sigma=" << *r->error_stress;
        std::cout << " t=" << row.seconds << "s\n";
      } else {
        const auto& [nodes, timing] = std::get<1>(o);
        row.nodes = nodes.size();
        row.seconds = timing.total;
        std::cout << c.case_name << ": N=" << row.nodes << " t=" << row.seconds << "s\n";
      }
      last = std::move(o);
    } catch (const IllConditionedStencil& e) {
      if (!sweeping) throw;
      ++failures;
      std::cerr << "sweep point " << rows.size() << ": ill-conditioned stencil: " << e.what() << '\n';
    } catch (const NonConvergence& e) {
      if (!sweeping) throw;
      ++failures;
      std::cerr << "sweep point " << rows.size() << ": " << e.what() << '\n';
    }
    if (!row.nodes) row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }

  {
    auto out = open_output(dir / "sweep.csv");
    write_sweep_csv(out, rows);
  }
  if (!last) {
    std::cerr << "error: every sweep point failed\n";
    return kNumerical;
  }
  if (auto* r = std::get_if<CaseResult>(&*last)) {
    auto nodes = open_output(dir / "nodes.csv");
    write_nodes_csv(nodes, r->nodes);
    auto fields = open_output(dir / "fields.csv");
    write_fields_csv(fields, r->nodes, r->displacement, r->stress);
    auto timing = open_output(dir / "timing.csv");
    r->timing.write_csv(timing);
    auto report = open_output(dir / "report.json");
    report << report_json(c, *r).dump(2) << '\n';
    if (c.vtk) {
      auto vtk = open_output(dir / "fields.vtk");
      write_fields_vtk(vtk, r->nodes, r->displacement, r->stress);
    }
    if (c.dump_matrix) {
      auto m = open_output(dir / "matrix.txt");
      write_matrix_coordinates(m, system);
    }
    if (c.dump_stencils) write_stencils(dir / "stencils.csv", c, *r);
  } else {
    const auto& [nodes, timing] = std::get<1>(*last);
    auto out = open_output(dir / "nodes.csv");
    write_nodes_csv(out, nodes);
    auto t = open_output(dir / "timing.csv");
    timing.write_csv(t);
  }
  if (failures) std::cerr << failures << " of " << points.size() << " sweep points failed\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meshless local strong-form elasticity solver"};
  RunConfig config;
  std::string command;
  app.add_option("command", command, "run: execute a case or a sweep and write CSV artifacts")
      ->required()
      ->check(CLI::IsMember({"run"}));
  cli::add_run_options(app, config);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (config.out_dir.empty()) {
    if (const char* env = std::getenv(cli::kOutputDirEnv)) config.out_dir = env;
  }
  const auto errors = cli::validate(config);
  if (!errors.empty()) {
    std::cerr << "invalid configuration:\n";
    for (const std::string& e : errors) std::cerr << "  " << e << '\n';
    return kConfig;
  }

  try {
    return execute(config);
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const IllConditionedStencil& e) {
    std::cerr << "ill-conditioned stencil: " << e.what() << '\n';
    return kNumerical;
  } catch (const NonConvergence& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
