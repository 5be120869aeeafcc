#include "mlsm/approximation.hpp"
#include "mlsm/cases.hpp"
#include "mlsm/kdtree.hpp"
#include "mlsm/relax.hpp"
#include "mlsm/solver.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace mlsm;

namespace {

std::vector<Vec2> random_points(std::size_t count) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> pts(count);
  for (Vec2& p : pts) p = {u(rng), u(rng)};
  return pts;
}

NodeSet beam_nodes(std::size_t nx) { return cantilever_nodes(BeamParams{}, nx); }

}  // namespace

static void BM_KdTreeBuild(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(KdTree(pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KdTreeBuild)->RangeMultiplier(10)->Range(1000, 100000);

static void BM_FindSupports(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_supports(pts, 9));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FindSupports)->RangeMultiplier(10)->Range(1000, 100000);

static void BM_LocalShapes(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  std::vector<Vec2> pts{Vec2::Zero()};
  for (int r = 1; pts.size() < n; ++r)
    for (int j = -r; j <= r && pts.size() < n; ++j)
      for (int i = -r; i <= r && pts.size() < n; ++i)
        if (std::max(std::abs(i), std::abs(j)) == r) pts.emplace_back(i + jitter(rng), j + jitter(rng));
  const BasisSpec basis = BasisSpec::monomial9();
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_shapes(pts, Vec2::Zero(), basis, WeightSpec{1.0}, OperatorSet::all()));
  }
}
BENCHMARK(BM_LocalShapes)->Arg(9)->Arg(13)->Arg(25);

static void BM_ShapeSet(benchmark::State& state) {
  const NodeSet nodes = beam_nodes(static_cast<std::size_t>(state.range(0)));
  const auto supports = find_supports(nodes.positions(), 9);
  const auto ops = required_operators(nodes);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_shape_set(nodes, supports, BasisSpec::monomial9(), WeightSpec{1.0}, ops));
  }
  state.counters["N"] = static_cast<double>(nodes.size());
}
BENCHMARK(BM_ShapeSet)->Arg(121)->Arg(241)->Unit(benchmark::kMillisecond);

static void BM_Assembly(benchmark::State& state) {
  const BeamParams beam;
  const NodeSet nodes = beam_nodes(static_cast<std::size_t>(state.range(0)));
  const ShapeSet shapes = build_shape_set(nodes, find_supports(nodes.positions(), 9), BasisSpec::monomial9(),
                                          WeightSpec{1.0}, required_operators(nodes));
  const auto bcs = cantilever_conditions(nodes, beam, false);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(nodes, shapes, beam.material(), bcs));
  state.counters["N"] = static_cast<double>(nodes.size());
}
BENCHMARK(BM_Assembly)->Arg(121)->Arg(241)->Unit(benchmark::kMillisecond);

static void BM_Solve(benchmark::State& state) {
  const BeamParams beam;
  const NodeSet nodes = beam_nodes(static_cast<std::size_t>(state.range(0)));
  const ShapeSet shapes = build_shape_set(nodes, find_supports(nodes.positions(), 9), BasisSpec::monomial9(),
                                          WeightSpec{1.0}, required_operators(nodes));
  const SparseSystem sys = assemble(nodes, shapes, beam.material(), cantilever_conditions(nodes, beam, false));
  const SolverConfig cfg{.method = state.range(1) ? SolverMethod::kDirect : SolverMethod::kBicgstabIlut};
  for (auto _ : state) benchmark::DoNotOptimize(solve(sys, cfg));
  state.counters["N"] = static_cast<double>(nodes.size());
}
BENCHMARK(BM_Solve)->Args({121, 0})->Args({121, 1})->Args({241, 0})->Args({241, 1})->Unit(benchmark::kMillisecond);

static void BM_Relax(benchmark::State& state) {
  const NodeSet nodes = build_drilled_domain(Rect{0, 1, 0, 1}, {{{0.5, 0.5}, 0.2}}, 1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(relax(nodes, RelaxConfig{}));
  state.counters["N"] = static_cast<double>(nodes.size());
}
BENCHMARK(BM_Relax)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
