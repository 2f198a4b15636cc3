#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "lshaped/aggregation.hpp"
#include "lshaped/engine.hpp"
#include "lshaped/lp.hpp"
#include "lshaped/problem.hpp"

namespace {

using namespace lshaped;

// Dense random LP with a known feasible point, so phase 1 always succeeds.
LinearProgram random_lp(std::size_t rows, std::size_t cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LinearProgram lp(rows, cols);
  std::vector<double> x0(cols);
  for (auto& v : x0) v = 1.0 + u(rng);
  for (std::size_t j = 0; j < cols; ++j) {
    lp.objective[j] = 1.0 + u(rng);
    lp.upper[j] = 10.0;
  }
  for (std::size_t i = 0; i < rows; ++i) {
    double b = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      lp.A(i, j) = u(rng);
      b += lp.A(i, j) * x0[j];
    }
    lp.rhs[i] = b;
  }
  return lp;
}

void BM_SolveLp(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const LinearProgram lp = random_lp(rows, 3 * rows, 17);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp));
}
BENCHMARK(BM_SolveLp)->Arg(10)->Arg(40)->Arg(100);

std::vector<OptimalityCut> random_cuts(std::size_t N, std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<OptimalityCut> cuts(N);
  for (std::size_t s = 0; s < N; ++s) {
    cuts[s].grad.resize(n);
    for (auto& v : cuts[s].grad) v = g(rng);
    cuts[s].offset = g(rng);
    cuts[s].members = {s};
  }
  return cuts;
}

void BM_ApplyScheme(benchmark::State& state, const std::string& text) {
  const std::size_t N = 200;
  const auto cuts = random_cuts(N, 5, 3);
  const AggregationScheme scheme = parse_scheme(text);
  for (auto _ : state) benchmark::DoNotOptimize(apply_scheme(scheme, cuts, N));
}
BENCHMARK_CAPTURE(BM_ApplyScheme, partial, std::string("partial:T=20"));
BENCHMARK_CAPTURE(BM_ApplyScheme, closest, std::string("closest:A=8,tau=0.3,measure=angular"));
BENCHMARK_CAPTURE(BM_ApplyScheme, kmedoids, std::string("kmedoids:k=20,measure=angular"));

void BM_LShaped(benchmark::State& state, const std::string& text) {
  const TwoStageProblem p = random_problem({3, 3, 2, 60}, 11);
  EngineConfig config;
  config.scheme = parse_scheme(text);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lshaped(p, config));
}
BENCHMARK_CAPTURE(BM_LShaped, multi, std::string("multi"));
BENCHMARK_CAPTURE(BM_LShaped, single, std::string("single"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_LShaped, partial, std::string("partial:T=10"))->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
