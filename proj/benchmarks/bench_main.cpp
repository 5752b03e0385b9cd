#include <random>

#include <benchmark/benchmark.h>

#include "sepmeas/cone.hpp"
#include "sepmeas/instance.hpp"
#include "sepmeas/numerics.hpp"
#include "sepmeas/simulator.hpp"
#include "sepmeas/usd.hpp"

namespace {

using namespace sepmeas;

void BM_MakeInstance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(make_instance(n));
}
BENCHMARK(BM_MakeInstance)->Arg(5)->Arg(13)->Arg(31);

void BM_ReciprocalSet(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reciprocal_set(inst));
}
BENCHMARK(BM_ReciprocalSet)->Arg(5)->Arg(13)->Arg(31);

void BM_FailureProbability(benchmark::State& state) {
  const Instance inst = make_instance(static_cast<int>(state.range(0)));
  const ReciprocalSet r = reciprocal_set(inst);
  for (auto _ : state) benchmark::DoNotOptimize(failure_probability(optimal_measurement(inst), r));
}
BENCHMARK(BM_FailureProbability)->Arg(5)->Arg(13);

void BM_Nnls(benchmark::State& state) {
  const auto rows = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  RealMatrix a(rows, rows / 2);
  RealVec b(rows);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < rows; ++i) b(i) = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(nnls(a, b));
}
BENCHMARK(BM_Nnls)->Arg(9)->Arg(36)->Arg(144);

void BM_Certify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto ops = multicopy_factors(make_instance(n), 1);
  for (auto _ : state) benchmark::DoNotOptimize(certify(ops, ops.size()));
}
BENCHMARK(BM_Certify)->Arg(5)->Arg(13);

void BM_CertifyNnlsOnly(benchmark::State& state) {
  const auto ops = multicopy_factors(make_instance(static_cast<int>(state.range(0))), 1);
  ConeOptions options;
  options.rank1_fast_path = false;
  for (auto _ : state) benchmark::DoNotOptimize(certify(ops, ops.size(), options));
}
BENCHMARK(BM_CertifyNnlsOnly)->Arg(5)->Arg(13);

void BM_Simulate(benchmark::State& state) {
  const Instance inst = make_instance(5);
  const ReciprocalSet r = reciprocal_set(inst);
  const WeightedMeasurement m = optimal_measurement(inst);
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_discrimination(inst, r, m, {7, trials, 1}));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
}
BENCHMARK(BM_Simulate)->Arg(10000)->Arg(100000);

void BM_MultiCopy(benchmark::State& state) {
  const Instance inst = make_instance(5);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(multicopy_measurement(inst, n));
}
BENCHMARK(BM_MultiCopy)->DenseRange(1, 3);

}  // namespace

BENCHMARK_MAIN();
