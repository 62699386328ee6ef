#include <random>

#include <benchmark/benchmark.h>

#include "kslope/diagram.hpp"
#include "kslope/poly.hpp"
#include "kslope/predictor.hpp"
#include "kslope/quadrature.hpp"

using namespace kslope;

namespace {

ComplexPoly monomial(int k) {
  std::vector<Complex> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = 1.0;
  return ComplexPoly(c);
}

DegenerationConfig collapse() { return {2, {monomial(0), monomial(1), monomial(2)}, {2, -1, -1}, 0, ""}; }

std::vector<DiagramPoint> random_points(int n, std::mt19937& rng) {
  std::uniform_int_distribution<int> coord(0, 50), den(1, 6);
  std::vector<DiagramPoint> pts{{0, Rational(coord(rng), den(rng))}, {coord(rng), Rational(0)}};
  while (static_cast<int>(pts.size()) < n) pts.push_back({coord(rng), Rational(coord(rng), den(rng))});
  return pts;
}

}  // namespace

static void BM_BuildDiagram(benchmark::State& state) {
  std::mt19937 rng(7);
  const auto pts = random_points(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(build_diagram(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildDiagram)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

static void BM_RootsWithMultiplicity(benchmark::State& state) {
  // (z - 0.3)^m (z + 0.5i) (z - 2)
  const int m = static_cast<int>(state.range(0));
  ComplexPoly p{1.0};
  for (int k = 0; k < m; ++k) p = multiply(p, ComplexPoly{-0.3, 1.0});
  p = multiply(p, ComplexPoly{Complex(0, 0.5), 1.0});
  p = multiply(p, ComplexPoly{-2.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(roots_with_multiplicity(p));
}
BENCHMARK(BM_RootsWithMultiplicity)->DenseRange(1, 4);

static void BM_Predict(benchmark::State& state) {
  const auto c = collapse();
  for (auto _ : state) benchmark::DoNotOptimize(predict(c));
}
BENCHMARK(BM_Predict);

static void BM_BuildGrid(benchmark::State& state) {
  const auto c = collapse();
  GridParams params;
  params.radial_nodes_per_decade = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(QuadratureGrid(c, params).node_count());
}
BENCHMARK(BM_BuildGrid)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);

static void BM_EvaluateEnergies(benchmark::State& state) {
  const auto c = collapse();
  GridParams params;
  params.threads = static_cast<int>(state.range(0));
  const QuadratureGrid grid(c, params);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_energies(c, 1e-3, grid));
  state.counters["nodes"] = static_cast<double>(grid.node_count());
}
BENCHMARK(BM_EvaluateEnergies)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
