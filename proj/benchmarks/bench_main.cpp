#include <benchmark/benchmark.h>

#include <vector>

#include "warmstandby/bounds.hpp"
#include "warmstandby/coupling.hpp"
#include "warmstandby/exact_markov.hpp"
#include "warmstandby/simulator.hpp"

using namespace warmstandby;

namespace {

const ExpParams kReference{1.0, 2.0, 0.3, 0.6, 1.5};
const FullState kAllWorking{Condition::working, 0, Condition::working, 0};
const FullState kAllFailed{Condition::failed, 0, Condition::failed, 0};

void BM_SimulatePath(benchmark::State& state) {
  const auto m = IntensityModel::from_exp_params(kReference);
  const double horizon = static_cast<double>(state.range(0));
  Rng rng(1);
  std::size_t events = 0;
  for (auto _ : state) {
    const SamplePath p = simulate_path(m, kAllWorking, horizon, rng);
    events += p.events.size();
    benchmark::DoNotOptimize(p);
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events),
                                                   benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulatePath)->Arg(20)->Arg(200);

void BM_RunCoupled(benchmark::State& state) {
  const auto m = IntensityModel::from_exp_params(kReference);
  CouplingOptions opts;
  opts.epsilon = 0.5;
  Rng rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_coupled(m, kAllWorking, kAllFailed, 20.0, rng, opts));
  }
}
BENCHMARK(BM_RunCoupled);

void BM_OptimizeEpsilon(benchmark::State& state) {
  const IntensityBounds b = IntensityModel::from_exp_params(kReference).bounds();
  const auto grid = default_epsilon_grid(b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_epsilon(b, CouplingStrategy::pairwise, grid));
  }
}
BENCHMARK(BM_OptimizeEpsilon);

void BM_SolveKolmogorov(benchmark::State& state) {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(k);
  const MarkovDist p0 = MarkovDist::point_mass(kState00);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_kolmogorov(kReference, p0, grid));
  }
}
BENCHMARK(BM_SolveKolmogorov);

}  // namespace

BENCHMARK_MAIN();
