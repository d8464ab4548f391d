#include "qsynth/fixtures.hpp"
#include "qsynth/gates.hpp"
#include "qsynth/optimize.hpp"
#include "qsynth/search.hpp"
#include "qsynth/structure.hpp"
#include "qsynth/verify.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace qsynth;

CMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m(r, c) = cplx(gauss(rng), gauss(rng));
  }
  return m;
}

// A 3-qubit structure of the given CNOT depth on the triangle, with fixed
// pseudo-random parameters.
std::pair<CircuitStructure, std::vector<double>> deep_structure(int depth) {
  CircuitStructure st = root(3);
  const auto places = placements(Topology::triangle());
  std::mt19937_64 rng(17);
  for (int d = 0; d < depth; ++d) {
    st = expand(st, places[rng() % places.size()], GateSet::cnot());
  }
  std::uniform_real_distribution<double> angle(-3.14, 3.14);
  std::vector<double> x(st.param_count);
  for (double& v : x) v = angle(rng);
  return {std::move(st), std::move(x)};
}

void BM_matmul_8x8(benchmark::State& state) {
  const CMatrix a = random_matrix(8, 1), b = random_matrix(8, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(matmul(a, b));
  }
}
BENCHMARK(BM_matmul_8x8);

void BM_kron_4x4(benchmark::State& state) {
  const CMatrix a = random_matrix(4, 3), b = random_matrix(4, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kron(a, b));
  }
}
BENCHMARK(BM_kron_4x4);

void BM_evaluate_reference(benchmark::State& state) {
  const auto [st, x] = deep_structure(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(st, x));
  }
}
BENCHMARK(BM_evaluate_reference)->Arg(2)->Arg(6)->Arg(10);

void BM_evaluate_plan(benchmark::State& state) {
  const auto [st, x] = deep_structure(static_cast<int>(state.range(0)));
  const EvalPlan plan(st);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan.evaluate(x));
  }
}
BENCHMARK(BM_evaluate_plan)->Arg(2)->Arg(6)->Arg(10);

void BM_node_optimization_su4(benchmark::State& state) {
  const Unitary target = haar_random_unitary(4, 5);
  CircuitStructure st = root(2);
  const auto places = placements(Topology::line(2));
  for (int d = 0; d < 3; ++d) st = expand(st, places[0], GateSet::cnot());
  const EvalPlan plan(st);
  ObjectiveSpec spec;
  spec.dimension = st.param_count;
  spec.evaluate = [&](std::span<const double> x) {
    return hs_distance(plan.evaluate(x), target);
  };
  spec.target_value = 1e-13;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(multistart_minimize(spec, 3, seed++));
  }
}
BENCHMARK(BM_node_optimization_su4)->Unit(benchmark::kMillisecond);

void BM_synthesize_qft2(benchmark::State& state) {
  const Unitary target = qft(2);
  const Topology topo = Topology::line(2);
  SearchConfig cfg;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.rng_seed = seed++;
    benchmark::DoNotOptimize(synthesize(target, topo, GateSet::cnot(), cfg));
  }
}
BENCHMARK(BM_synthesize_qft2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
