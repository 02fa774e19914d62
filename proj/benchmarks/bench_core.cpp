#include <map>

#include <benchmark/benchmark.h>

#include "bdeconv/estimator.hpp"
#include "bdeconv/model_sim.hpp"
#include "bdeconv/moment_engine.hpp"
#include "bdeconv/pseudo_moment.hpp"

using namespace bdeconv;

namespace {

const ComplexSeries& mixture_data(std::size_t n) {
  static std::map<std::size_t, ComplexSeries> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, simulate_model(make_preset(Preset::Mixture, 0.05, n, 1))).first;
  return it->second;
}

void BM_EmpiricalMoments(benchmark::State& state) {
  const ComplexSeries& y = mixture_data(static_cast<std::size_t>(state.range(0)));
  const int p = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(empirical_moments(y, p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmpiricalMoments)->Args({2000, 3})->Args({20000, 3})->Args({2000, 5});

void BM_Criterion(benchmark::State& state) {
  const ComplexSeries& y = mixture_data(2000);
  const CriterionEvaluator ev(y, 1, static_cast<int>(state.range(0)));
  const std::vector<double> xi{0.01, 1.0, -0.02};
  for (auto _ : state) benchmark::DoNotOptimize(ev.criterion(0.05, xi));
}
BENCHMARK(BM_Criterion)->Arg(3)->Arg(5);

void BM_SigmaRoot(benchmark::State& state) {
  const ComplexSeries& y = mixture_data(2000);
  const MomentVector d = empirical_moments(y, 3);
  const RootSearchConfig cfg;
  const double smax = default_sigma_max(y);
  for (auto _ : state) benchmark::DoNotOptimize(sigma_root(d, 1.0, smax, cfg));
}
BENCHMARK(BM_SigmaRoot);

void BM_Estimate(benchmark::State& state) {
  const ComplexSeries& y = mixture_data(static_cast<std::size_t>(state.range(0)));
  RootSearchConfig cfg;
  cfg.seed = 3;
  for (auto _ : state) benchmark::DoNotOptimize(estimate(y, FilterSpec::identity(1), 3, cfg));
}
BENCHMARK(BM_Estimate)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
