#include <random>

#include <benchmark/benchmark.h>

#include "loopchern/algebra_suite.hpp"
#include "loopchern/brute_force.hpp"
#include "loopchern/cocycles.hpp"
#include "loopchern/current.hpp"
#include "loopchern/metric.hpp"
#include "loopchern/random_chains.hpp"
#include "loopchern/simplex.hpp"

using namespace loopchern;

namespace {

RealMatrix diag41() {
  RealMatrix g = RealMatrix::Identity(2, 2);
  g(0, 0) = 4.0;
  return g;
}

Chain<Complex> word_of_length(int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RandomWordSpec spec;
  spec.min_length = spec.max_length = N;
  return Chain<Complex>::from_word(2, random_word(rng, spec));
}

}  // namespace

static void BM_SimplexIntegral(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  std::vector<double> a(M + 1);
  for (int i = 0; i <= M; ++i) a[i] = 3.0 + 1e-10 * i;
  for (auto _ : state) benchmark::DoNotOptimize(simplex_heat_integral(a));
}
BENCHMARK(BM_SimplexIntegral)->DenseRange(0, 4);

static void BM_EvaluateWord(benchmark::State& state) {
  const TorusGeometry geom(diag41());
  const GammaSet gs = build_gammas(2);
  const auto c = word_of_length(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(geom, gs, c).value);
}
BENCHMARK(BM_EvaluateWord)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

static void BM_BruteForceWord(benchmark::State& state) {
  const TorusGeometry geom(diag41());
  const GammaSet gs = build_gammas(2);
  const auto c = word_of_length(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(chern_brute_force(geom, gs, c).value);
}
BENCHMARK(BM_BruteForceWord)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_AlgebraSuite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_algebra_exhaustive(2, static_cast<int>(state.range(0)), 1).words);
}
BENCHMARK(BM_AlgebraSuite)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

static void BM_SolveCocycles(benchmark::State& state) {
  CocycleTruncation t;
  t.max_length = static_cast<int>(state.range(0));
  t.parity = Parity::both;
  for (auto _ : state) benchmark::DoNotOptimize(solve_cocycles(t).rank);
}
BENCHMARK(BM_SolveCocycles)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_LemmaRatio(benchmark::State& state) {
  const auto d = state.range(0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd S(d, d), T(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      S(i, j) = Complex(nd(rng), nd(rng));
      T(i, j) = Complex(nd(rng), nd(rng));
    }
  T = (T + T.adjoint()).eval();
  for (auto _ : state) benchmark::DoNotOptimize(lemma_ratio(S, T));
}
BENCHMARK(BM_LemmaRatio)->RangeMultiplier(2)->Range(4, 32)->Unit(benchmark::kMicrosecond);

static void BM_H2Check(benchmark::State& state) {
  RealMatrix g1 = diag41();
  const auto fam = log_geodesic_family(RealMatrix::Identity(2, 2), g1);
  const GammaSet gs = build_gammas(2);
  for (auto _ : state) benchmark::DoNotOptimize(h2_check(fam, {0.5, 0.5}, gs, uniform_samples(3), 4.0).sup);
}
BENCHMARK(BM_H2Check)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
