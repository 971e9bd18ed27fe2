#include <random>

#include <benchmark/benchmark.h>

#include "schurdil/dilation.hpp"
#include "schurdil/numcore.hpp"
#include "schurdil/witness.hpp"
#include "support/random.hpp"

using namespace schurdil;
using namespace schurdil::testing;

static void BM_PolarDecompose(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const ComplexMatrix a = random_matrix(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(polar_decompose(a));
}
BENCHMARK(BM_PolarDecompose)->Arg(4)->Arg(16)->Arg(64);

static void BM_SchattenNorm(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const ComplexMatrix a = random_matrix(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(schatten_norm(a, 3.0));
}
BENCHMARK(BM_SchattenNorm)->Arg(4)->Arg(64);

static void BM_UnitaryObjectiveWithGradient(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const UnitaryWitness w = random_witness(rng, n, d);
  const ComplexMatrix m = gram_of(random_witness(rng, n, d));
  std::vector<ComplexMatrix> egrad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(detail::unitary_objective(w.v, m, &egrad));
    benchmark::DoNotOptimize(detail::riemannian_gradient(w.v, egrad));
  }
}
BENCHMARK(BM_UnitaryObjectiveWithGradient)->Args({4, 3})->Args({8, 8});

static void BM_SearchForwardSymbol(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const SchurSymbol s(gram_of(random_witness(rng, 4, 3)));
  SearchConfig cfg;
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(search_witness(s, cfg));
}
BENCHMARK(BM_SearchForwardSymbol)->Unit(benchmark::kMillisecond);

static void BM_ApplyU(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const auto depth = static_cast<std::size_t>(state.range(0));
  const TruncatedDilation dil = build_dilation({random_witness(rng, 2, 2)}, depth);
  const ComplexMatrix y = random_matrix(rng, static_cast<Eigen::Index>(dil.total_dim()));
  for (auto _ : state) benchmark::DoNotOptimize(apply_U(dil, 0, y));
  state.counters["dim"] = static_cast<double>(dil.total_dim());
}
BENCHMARK(BM_ApplyU)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

static void BM_VerifyDilation(benchmark::State& state) {
  std::mt19937_64 rng(6);
  const UnitaryWitness w = random_witness(rng, 3, 3);
  const SchurSymbol s(gram_of(w));
  const TruncatedDilation dil = build_dilation({w}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(verify_dilation(dil, std::span(&s, 1), 1e-10));
}
BENCHMARK(BM_VerifyDilation)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
