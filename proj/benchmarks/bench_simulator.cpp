#include <benchmark/benchmark.h>

#include "hmpp/intensity_tracker.hpp"
#include "hmpp/simulator.hpp"
#include "hmpp/validation.hpp"
#include "support/models.hpp"

using namespace hmpp;

namespace {

SimConfig cfg(double horizon, std::uint64_t seed) {
  SimConfig c;
  c.horizon = horizon;
  c.seed = seed;
  return c;
}

void BM_SimulatePoisson(benchmark::State& state) {
  const ModelSpec m = testing::poisson_model(2.0);
  const double horizon = static_cast<double>(state.range(0));
  std::uint64_t seed = 1;
  std::size_t events = 0;
  for (auto _ : state) {
    const auto r = simulate(m, cfg(horizon, seed++));
    events += r.trajectory.events().size();
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulatePoisson)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SimulateExpHawkes(benchmark::State& state) {
  const ModelSpec m = testing::hawkes_1d(1.0, 0.5, 1.0);
  const double horizon = static_cast<double>(state.range(0));
  std::uint64_t seed = 1;
  std::size_t events = 0;
  for (auto _ : state) {
    events += simulate(m, cfg(horizon, seed++)).trajectory.events().size();
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateExpHawkes)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SimulateStateHawkes(benchmark::State& state) {
  const ModelSpec m = testing::state_hawkes_model();
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(m, cfg(2000.0, seed++)));
}
BENCHMARK(BM_SimulateStateHawkes)->Unit(benchmark::kMillisecond);

void BM_SimulatePowerLawHawkes(benchmark::State& state) {
  ModelSpec m = testing::poisson_model(1.0);
  m.functional = EventFunctional::hawkes({1.0}, Kernel::power_law(KernelWeights(1, 1, 0.5), 2.0, 1.0));
  const double horizon = static_cast<double>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(m, cfg(horizon, seed++)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SimulatePowerLawHawkes)->RangeMultiplier(2)->Range(250, 2000)->Complexity()->Unit(benchmark::kMillisecond);

void BM_Coupled(benchmark::State& state) {
  const ModelSpec low = testing::state_hawkes_model();
  const ModelSpec high = testing::state_maximized(low);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_coupled(low, high, cfg(1000.0, seed++)));
}
BENCHMARK(BM_Coupled)->Unit(benchmark::kMillisecond);

void BM_TrackerIntensity(benchmark::State& state) {
  const ModelSpec m = testing::state_hawkes_model();
  const auto t = simulate(m, cfg(1000.0, 5)).trajectory;
  const auto ev = t.events();
  for (auto _ : state) {
    IntensityTracker tracker(m);
    double acc = 0.0;
    for (const auto& r : ev) {
      acc += tracker.intensity(r.mark.event, r.time);
      tracker.push(r);
    }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * ev.size()));
}
BENCHMARK(BM_TrackerIntensity);

void BM_Residuals(benchmark::State& state) {
  const ModelSpec m = testing::state_hawkes_model();
  const auto t = simulate(m, cfg(static_cast<double>(state.range(0)), 5)).trajectory;
  for (auto _ : state) benchmark::DoNotOptimize(rescaled_residuals(t, m));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * t.events().size()));
}
BENCHMARK(BM_Residuals)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_TransitionTest(benchmark::State& state) {
  const ModelSpec m = testing::state_hawkes_model();
  const auto t = simulate(m, cfg(20000.0, 5)).trajectory;
  for (auto _ : state) benchmark::DoNotOptimize(transition_frequency_test(t, m.transition));
}
BENCHMARK(BM_TransitionTest)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
