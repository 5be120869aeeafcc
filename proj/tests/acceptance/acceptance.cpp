// Acceptance suite: one PASS/FAIL line per criterion.
//
//   mlsm_acceptance            run everything
//   mlsm_acceptance --only 3   run criterion 3
//
// Exit status is nonzero when any selected criterion fails.

#include "mlsm/approximation.hpp"
#include "mlsm/cases.hpp"
#include "mlsm/kdtree.hpp"
#include "mlsm/nodeset.hpp"
#include "mlsm/perturb.hpp"
#include "mlsm/refine.hpp"
#include "mlsm/relax.hpp"
#include "mlsm/solver.hpp"

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mlsm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double inf_norm(const Eigen::VectorXd& v) { return v.lpNorm<Eigen::Infinity>(); }

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Jittered two-ring neighbourhood of `center`: a random but well-posed support.
std::vector<Vec2> random_support(std::mt19937_64& rng, const Vec2& center, double h, std::size_t n) {
  std::uniform_real_distribution<double> jitter(-0.3 * h, 0.3 * h);
  std::vector<Vec2> offsets;
  for (int j = -2; j <= 2; ++j)
    for (int i = -2; i <= 2; ++i)
      if ((i || j) && std::abs(i) + std::abs(j) <= 2) offsets.emplace_back(i, j);
  for (int s : {-1, 1})
    for (int t : {-1, 1}) offsets.emplace_back(2 * s, 2 * t);
  std::vector<Vec2> pts{center};
  for (std::size_t k = 0; pts.size() < n; ++k) pts.push_back(center + h * offsets[k] + Vec2(jitter(rng), jitter(rng)));
  return pts;
}

double monomial_image(int a, int b, Operator op) {
  // Image at the origin of x^a y^b.
  const auto [dx, dy] = [op]() -> std::pair<int, int> {
    switch (op) {
      case Operator::kValue: return {0, 0};
      case Operator::kDx: return {1, 0};
      case Operator::kDy: return {0, 1};
      case Operator::kDxx: return {2, 0};
      case Operator::kDxy: return {1, 1};
      case Operator::kDyy: return {0, 2};
    }
    return {0, 0};
  }();
  if (a != dx || b != dy) return 0.0;
  return std::tgamma(a + 1.0) * std::tgamma(b + 1.0);
}

// ---------------------------------------------------------------------------

Outcome shape_consistency() {
  const auto start = std::chrono::steady_clock::now();
  const BasisSpec m9 = BasisSpec::monomial9();
  double m9_sum = 0, m9_repro = 0, g9_sum = 0;
  std::size_t stencils = 0;
  for (std::size_t n : {9u, 13u}) {
    std::mt19937_64 rng(1000 + n);
    for (int trial = 0; trial < 200; ++trial) {
      const double h = std::pow(10.0, -6.0 + 7.0 * trial / 200.0);
      const Vec2 center(std::uniform_real_distribution<double>(-10, 10)(rng) * h, 5 * h);
      const auto pts = random_support(rng, center, h, n);
      for (const BasisSpec& basis : {m9, BasisSpec::gaussian9(1.0)}) {
        const LocalApproximation a(pts, center, basis, WeightSpec{1.0});
        ++stencils;
        const bool monomial = basis.kind == BasisSpec::Kind::kMonomial;
        for (Operator op : kAllOperators) {
          const Eigen::VectorXd chi = a.shape(op);
          const double scale = std::pow(a.p_min(), -operator_order(op));
          const double sum_err = std::abs(chi.sum() - (op == Operator::kValue ? 1.0 : 0.0)) / scale;
          (monomial ? m9_sum : g9_sum) = std::max(monomial ? m9_sum : g9_sum, sum_err);
          if (!monomial) continue;
          for (const auto& [ex, ey] : basis.exponents) {
            Eigen::VectorXd f(chi.size());
            for (Eigen::Index j = 0; j < f.size(); ++j) {
              const Vec2 q = (pts[static_cast<std::size_t>(j)] - center) / a.p_min();
              f(j) = std::pow(q.x(), ex) * std::pow(q.y(), ey);
            }
            const double exact = monomial_image(ex, ey, op);
            const double err = std::abs(chi.dot(f) / scale - exact) / std::max(1.0, std::abs(exact));
            m9_repro = std::max(m9_repro, err);
          }
        }
      }
    }
  }
  const double t = seconds_since(start);
  const bool pass = m9_sum <= 1e-8 && g9_sum <= 1e-8 && m9_repro <= 1e-7 && t < 10.0;
  return {pass, fmt("%zu stencils; M9 max|row sum err| %.2e, reproduction %.2e; G9 max|row sum err| %.2e "
                    "(limit 1e-8); %.2f s",
                    stencils, m9_sum, m9_repro, g9_sum, t)};
}

Outcome fd_equivalence() {
  const double h = 0.37;
  std::vector<Vec2> pts;
  for (int j = -1; j <= 1; ++j)
    for (int i = -1; i <= 1; ++i) pts.emplace_back(i * h, j * h);
  const double s = 1.0 / (h * h);
  Eigen::VectorXd dxx = Eigen::VectorXd::Zero(9), dyy = dxx, dxy = dxx;
  dxx(3) = s, dxx(4) = -2 * s, dxx(5) = s;
  dyy(1) = s, dyy(4) = -2 * s, dyy(7) = s;
  dxy(0) = s / 4, dxy(2) = -s / 4, dxy(6) = -s / 4, dxy(8) = s / 4;

  double worst_fd = 0, worst_direct = 0;
  for (double sigma_w : {0.5, 1.0, 2.0}) {
    const LocalApproximation a(pts, Vec2::Zero(), BasisSpec::monomial9(), WeightSpec{sigma_w});
    // Direct route: weighted normal equations in physical coordinates, no SVD.
    Eigen::MatrixXd b(9, 9);
    Eigen::VectorXd w(9);
    for (int j = 0; j < 9; ++j) {
      const double x = pts[j].x(), y = pts[j].y();
      b.row(j) << 1, x, y, x * x, y * y, x * y, x * x * y, x * y * y, x * x * y * y;
      w(j) = weight(pts[j], Vec2::Zero(), h, sigma_w);
    }
    const Eigen::MatrixXd normal = b.transpose() * w.asDiagonal() * b;
    const Eigen::MatrixXd rhs = b.transpose() * w.asDiagonal();
    const Eigen::MatrixXd coeff = normal.fullPivLu().solve(rhs);  // basis coefficients per nodal value
    Eigen::VectorXd lxx = Eigen::VectorXd::Zero(9), lyy = lxx, lxy = lxx;
    lxx(3) = 2, lyy(4) = 2, lxy(5) = 1;
    const std::pair<Operator, std::pair<const Eigen::VectorXd*, Eigen::VectorXd>> cases[] = {
        {Operator::kDxx, {&dxx, coeff.transpose() * lxx}},
        {Operator::kDyy, {&dyy, coeff.transpose() * lyy}},
        {Operator::kDxy, {&dxy, coeff.transpose() * lxy}}};
    for (const auto& [op, refs] : cases) {
      const Eigen::VectorXd chi = a.shape(op);
      worst_fd = std::max(worst_fd, (chi - *refs.first).norm() / refs.first->norm());
      worst_direct = std::max(worst_direct, (chi - refs.second).norm() / refs.second.norm());
    }
  }
  return {worst_fd <= 1e-9 && worst_direct <= 1e-9,
          fmt("sigma_w in {0.5,1,2}: max rel diff vs central differences %.2e, vs normal-equation solve %.2e "
              "(limit 1e-9)",
              worst_fd, worst_direct)};
}

Outcome cantilever_convergence() {
  std::vector<double> root_n, eu, es;
  std::string rows;
  for (std::size_t nx : {121u, 241u, 481u, 775u}) {
    CantileverConfig cfg;
    cfg.nx = nx;
    const CaseResult r = cantilever_case(cfg);
    root_n.push_back(std::sqrt(static_cast<double>(r.nodes.size())));
    eu.push_back(*r.error_displacement);
    es.push_back(*r.error_stress);
    rows += fmt(" N=%zu e_u=%.3e e_s=%.3e;", r.nodes.size(), eu.back(), es.back());
  }
  const double order_u = -loglog_slope(root_n, eu);
  const double order_s = -loglog_slope(root_n, es);
  const bool pass = order_u >= 0.7 && order_u <= 1.3 && std::abs(order_s - order_u) <= 0.4;
  return {pass, fmt("order in N^(1/2): u %.2f (band [0.7,1.3]), sigma %.2f (within 0.4 of u);", order_u, order_s) +
                    rows};
}

Outcome exactness_injection() {
  auto run = [](std::size_t nx) {
    CantileverConfig cfg;
    cfg.nx = nx;
    cfg.all_essential = true;
    return cantilever_case(cfg);
  };
  const CaseResult small = run(77), large = run(241);
  const double e3 = *small.error_displacement, e4 = *large.error_displacement;
  return {e4 <= 1e-5 && e4 < e3, fmt("N=%zu e_u=%.3e; N=%zu e_u=%.3e (need <= 1e-5 and e(1e4) < e(1e3))",
                                     small.nodes.size(), e3, large.nodes.size(), e4)};
}

Outcome perturbation_stability() {
  auto run = [](std::size_t n, double sigma, std::uint64_t seed) {
    CantileverConfig cfg;
    cfg.nx = 121;
    cfg.approx.support_size = n;
    cfg.perturbation = sigma;
    cfg.seed = seed;
    return *cantilever_case(cfg).error_displacement;
  };
  const double base = run(13, 0.0, 1);
  std::vector<double> errs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) errs.push_back(run(13, 0.1, seed));
  std::sort(errs.begin(), errs.end());
  const double median = errs[2];

  int failures = 0;
  std::string m9;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    try {
      const double e = run(9, 0.5, seed);
      if (!(e <= 1.0)) ++failures;
      m9 += fmt(" %.2e", e);
    } catch (const Error& e) {
      ++failures;
      m9 += " fail";
    }
  }
  return {median <= 10 * base, fmt("M9 n=13: unperturbed %.3e, median at sigma 0.1 %.3e (limit 10x); "
                                   "M9 n=9 at sigma 0.5 (recorded, %d/5 failures):%s",
                                   base, median, failures, m9.c_str())};
}

Outcome hertz_geometry_check() {
  const HertzParams params;
  const HertzGeometry g = hertz_geometry(params);
  // Gauss-Chebyshev of the second kind integrates p0 sqrt(1 - t^2) exactly.
  const int m = 64;
  double integral = 0;
  for (int k = 1; k <= m; ++k) {
    const double theta = k * std::numbers::pi / (m + 1);
    const double t = std::cos(theta);
    const double wk = std::numbers::pi / (m + 1) * std::sin(theta) * std::sin(theta);
    integral += wk * hertz_pressure(g.half_width * t, g.half_width, g.peak_pressure) / std::sqrt(1 - t * t);
  }
  integral *= g.half_width;
  const double rel_b = std::abs(g.half_width - 0.13e-3) / 0.13e-3;
  const double rel_p = std::abs(g.peak_pressure - 2.6e6) / 2.6e6;
  const double rel_load = std::abs(integral - params.load) / params.load;
  return {rel_b <= 0.02 && rel_p <= 0.02 && rel_load <= 1e-6,
          fmt("b = %.4f mm (%.2f%%), p0 = %.4f MPa (%.2f%%), |int p - P|/P = %.1e", g.half_width * 1e3,
              100 * rel_b, g.peak_pressure * 1e-6, 100 * rel_p, rel_load)};
}

Outcome hertz_self_checks() {
  const HertzGeometry g = hertz_geometry(HertzParams{});
  const double b = g.half_width, p0 = g.peak_pressure;
  const StressTensor c = hertz_stress(0, 0, b, p0);
  const double origin = std::max({std::abs(c.xx + p0), std::abs(c.yy + p0), std::abs(c.xy)}) / p0;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(-b, b);
  double surface = 0;
  for (int k = 0; k < 100; ++k) {
    const double x = ux(rng);
    surface = std::max(surface, std::abs(hertz_stress(x, 0, b, p0).yy + hertz_pressure(x, b, p0)) / p0);
  }
  return {origin <= 1e-9 && surface <= 1e-9,
          fmt("sigma(0,0) rel err %.1e; max |syy(x,0) + p(x)|/p0 over 100 x = %.1e (limit 1e-9)", origin, surface)};
}

Outcome hertz_refinement() {
  HertzConfig unrefined;
  unrefined.nx = 245;
  HertzConfig refined;
  refined.nx = 79;
  refined.primary_levels = 10;
  HertzConfig secondary = refined;
  secondary.secondary_levels = 2;
  const CaseResult a = hertz_case(unrefined);
  const CaseResult b = hertz_case(refined);
  const CaseResult c = hertz_case(secondary);
  const double ea = *a.error_stress, eb = *b.error_stress, ec = *c.error_stress;
  const double budget = std::abs(static_cast<double>(b.nodes.size()) / static_cast<double>(a.nodes.size()) - 1);
  return {eb < 0.5 * ea && ec <= eb && budget <= 0.05,
          fmt("unrefined N=%zu e=%.3e; primary N=%zu e=%.3e (need < %.3e); +2 secondary N=%zu e=%.3e", a.nodes.size(),
              ea, b.nodes.size(), eb, 0.5 * ea, c.nodes.size(), ec)};
}

// Systems with N <= 5000 exercised by the sparsity and solver-oracle criteria.
struct TestSystem {
  std::string name;
  SparseSystem system;
  std::size_t support = 9;
};

std::vector<TestSystem> test_systems() {
  std::vector<TestSystem> out;
  auto add = [&](std::string name, std::size_t support, auto&& run) {
    SparseSystem sys;
    run(&sys);
    out.push_back({std::move(name), std::move(sys), support});
  };
  for (std::size_t nx : {13u, 31u, 61u, 121u}) {
    add(fmt("cantilever nx=%zu", nx), 9, [&](SparseSystem* s) {
      CantileverConfig cfg;
      cfg.nx = nx;
      cantilever_case(cfg, s);
    });
  }
  add("cantilever all-essential", 9, [](SparseSystem* s) {
    CantileverConfig cfg;
    cfg.all_essential = true;
    cantilever_case(cfg, s);
  });
  add("cantilever perturbed n=13", 13, [](SparseSystem* s) {
    CantileverConfig cfg;
    cfg.perturbation = 0.1;
    cfg.approx.support_size = 13;
    cantilever_case(cfg, s);
  });
  add("drilled beam nx=61", 12, [](SparseSystem* s) {
    DrilledBeamConfig cfg;
    cfg.nx = 61;
    drilled_cantilever_case(cfg, s);
  });
  add("hertz nx=41 6 levels", 9, [](SparseSystem* s) {
    HertzConfig cfg;
    cfg.nx = 41;
    cfg.primary_levels = 6;
    hertz_case(cfg, s);
  });
  return out;
}

Outcome sparsity() {
  const BeamParams beam;
  const NodeSet fig = cantilever_nodes(beam, 13);
  const ShapeSet shapes = build_shape_set(fig, find_supports(fig.positions(), 9), BasisSpec::monomial9(),
                                          WeightSpec{1.0}, required_operators(fig));
  const SparseSystem sys = assemble(fig, shapes, beam.material(), cantilever_conditions(fig, beam, false));
  const double fraction = sys.nonzero_fraction();
  const bool shape_ok = fig.size() == 39 && sys.matrix.rows() == 78 && std::abs(fraction - 0.22) <= 0.02;

  bool bound_ok = true;
  std::string worst;
  double worst_ratio = 0;
  for (const TestSystem& t : test_systems()) {
    // Supports may grow under the rank policy; the bound uses the configured n.
    const double n_nodes = static_cast<double>(t.system.node_count());
    const double bound = 2.0 * static_cast<double>(t.support) * n_nodes + n_nodes;
    const double ratio = static_cast<double>(t.system.matrix.nonZeros()) / bound;
    bound_ok &= ratio <= 1.0;
    if (ratio > worst_ratio) worst_ratio = ratio, worst = t.name;
  }
  return {shape_ok && bound_ok,
          fmt("Fig. 1 grid: N=%zu, %ldx%ld, nnz=%ld, fraction %.1f%% (22 +- 2); worst nnz/(2nN+N) = %.2f (%s)",
              fig.size(), static_cast<long>(sys.matrix.rows()), static_cast<long>(sys.matrix.cols()),
              static_cast<long>(sys.matrix.nonZeros()), 100 * fraction, worst_ratio, worst.c_str())};
}

Outcome solver_oracle() {
  double worst = 0;
  std::string name;
  std::size_t count = 0;
  for (const TestSystem& t : test_systems()) {
    if (t.system.node_count() > 5000) continue;
    ++count;
    const Solution it = solve(t.system, SolverConfig{});
    const Solution lu = solve(t.system, SolverConfig{.method = SolverMethod::kDirect});
    const double diff = inf_norm(it.x - lu.x) / inf_norm(lu.x);
    if (diff >= worst) worst = diff, name = t.name;
  }
  return {worst <= 1e-6, fmt("%zu systems, max ||x_it - x_lu||_inf / ||x_lu||_inf = %.2e (%s; limit 1e-6)", count,
                             worst, name.c_str())};
}

Outcome refinement_invariants() {
  const auto start = std::chrono::steady_clock::now();
  std::string notes;
  bool ok = true;

  // Halving on a uniform grid.
  const double h = 0.05;
  NodeSet grid = build_rectangle_grid(Rect{0, 2, 0, 2}, h);
  const Rect core{0.8, 1.2, 0.8, 1.2};
  std::size_t previous = grid.size();
  for (int level = 1; level <= 4; ++level) {
    const NodeSet next = refine_once(grid, core, RefineConfig{});
    for (std::size_t i = 0; i < grid.size(); ++i) ok &= next[i].position == grid[i].position;
    ok &= next.size() > previous;
    previous = next.size();
    grid = next;
    double m = std::numeric_limits<double>::infinity();
    for (const Node& n : grid.nodes())
      if (core.covers(n.position)) m = std::min(m, n.spacing);
    const double ratio = m / (h / std::pow(2.0, level));
    ok &= ratio >= 0.9 && ratio <= 1.1;
    notes += fmt(" %.3f", ratio);
  }

  // Refinement around a hole then relaxation: counts grow, boundary stays put.
  RefineDemoConfig demo;
  const NodeSet base = build_drilled_domain(demo.rect, {demo.hole}, demo.spacing);
  const auto regions = hole_regions(demo.hole, demo.spacing, demo.levels);
  std::size_t count = base.size();
  for (std::size_t k = 1; k <= demo.levels; ++k) {
    std::vector<RefineRegion> upto;
    for (const RefineRegion& r : regions)
      if (r.level <= k) upto.push_back({r.area, std::min(r.level, k)});
    const std::size_t size = refine_levels(base, upto, demo.refine).size();
    ok &= size > count;
    count = size;
  }
  const NodeSet refined = refine_levels(base, regions, demo.refine);
  const NodeSet relaxed = relax(refined, demo.relax);
  bool fixed = relaxed.size() == refined.size();
  for (std::size_t i = 0; fixed && i < refined.size(); ++i) {
    if (refined[i].is_boundary()) fixed = relaxed[i].position == refined[i].position;
  }
  ok &= fixed;
  try {
    check_invariants(relaxed);
  } catch (const Error&) {
    ok = false;
  }

  // Uniform grid is a relaxation fixed point.
  const NodeSet uniform = build_rectangle_grid(Rect{0, 1, 0, 1}, 21, 21);
  const NodeSet still = relax(uniform, RelaxConfig{});
  double drift = 0;
  for (std::size_t i = 0; i < uniform.size(); ++i) drift = std::max(drift, (still[i].position - uniform[i].position).norm());
  ok &= drift <= 1e-12 * 0.05;

  const double t = seconds_since(start);
  ok &= t < 30.0;
  return {ok, fmt("spacing ratios per level:%s (band [0.9,1.1]); demo N %zu -> %zu, boundary fixed: %s; "
                  "uniform relax drift %.1e; %.2f s",
                  notes.c_str(), base.size(), relaxed.size(), fixed ? "yes" : "no", drift, t)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility() {
#ifndef MLSM_CLI_PATH
  return {false, "command-line tool was not built"};
#else
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / fmt("mlsm_repro_%d", static_cast<int>(std::random_device{}() % 100000));
  std::string notes;
  bool ok = true;
  const std::pair<const char*, const char*> runs[] = {
      {"cantilever-perturbed", "--nx 61 --perturbation 0.1 --seed 7 --threads 2"},
      {"drilled-beam", "--nx 61 --threads 2"},
  };
  for (const auto& [name, flags] : runs) {
    std::string first;
    for (int k = 0; k < 2; ++k) {
      const fs::path dir = root / fmt("%s_%d", name, k);
      const std::string cmd = fmt("\"%s\" run --case %s %s --out \"%s\" > /dev/null", MLSM_CLI_PATH, name, flags,
                                  dir.string().c_str());
      if (std::system(cmd.c_str()) != 0) {
        ok = false;
        notes += fmt(" %s run %d failed;", name, k);
        continue;
      }
      const std::string bytes = slurp(dir / "fields.csv") + slurp(dir / "nodes.csv");
      if (k == 0) {
        first = bytes;
      } else {
        const bool same = !bytes.empty() && bytes == first;
        ok &= same;
        notes += fmt(" %s: %zu bytes %s;", name, bytes.size(), same ? "identical" : "DIFFER");
      }
    }
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return {ok, "two runs per case, fields.csv + nodes.csv:" + notes};
#endif
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlsm acceptance suite"};
  std::vector<int> only;
  app.add_option("--only", only, "Criterion numbers to run")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"shape-function consistency", shape_consistency},
      {"finite-difference equivalence", fd_equivalence},
      {"cantilever convergence", cantilever_convergence},
      {"exactness injection", exactness_injection},
      {"perturbation stability", perturbation_stability},
      {"hertz geometry", hertz_geometry_check},
      {"hertz analytic self-checks", hertz_self_checks},
      {"hertz refinement vs truncation", hertz_refinement},
      {"sparsity and structure", sparsity},
      {"solver oracle", solver_oracle},
      {"refinement/relaxation invariants", refinement_invariants},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[k].first << ": " << o.detail
              << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed ? 1 : 0;
}
