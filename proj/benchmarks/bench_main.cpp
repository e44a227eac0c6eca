#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "h1s2s/beamline.hpp"
#include "h1s2s/bloch.hpp"
#include "h1s2s/ensemble.hpp"
#include "h1s2s/fitting.hpp"
#include "h1s2s/random.hpp"

using namespace h1s2s;

namespace {

void BM_EvolveConstant(benchmark::State& state) {
  const AtomicCoefficients co;
  for (auto _ : state) {
    auto s = evolve_constant(DensityState::ground(), 4e6, 100.0, 250.0, 1e-3,
                             ScenarioSwitches{true, true, 0.0}, co);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_EvolveConstant);

void BM_SmallLine(benchmark::State& state) {
  RunConfig config;
  config.atoms_per_line = state.range(0);
  config.power_per_direction = 0.3;
  const SimulationModel model;
  const Ensemble ensemble =
      draw_ensemble(config, model.geometry, model.constants, config.rng_seed);
  const auto grid = uniform_grid(3000.0, 41);
  LineOptions options;
  options.threads = 1;
  for (auto _ : state) {
    auto r = simulate_line(ensemble, 0.3, grid, ScenarioSwitches{true, true, 0.0}, model, options);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 41);
}
BENCHMARK(BM_SmallLine)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_LorentzianFit(benchmark::State& state) {
  std::vector<double> x;
  std::vector<double> y;
  RandomStream rng(1, StreamDomain::kTest, 0);
  for (int i = 0; i < 81; ++i) {
    const double d = -2000.0 + 50.0 * i;
    x.push_back(d);
    y.push_back(1.0 / (1.0 + std::pow((d - 120.0) / 300.0, 2)) + 0.01 * rng.normal());
  }
  for (auto _ : state) {
    auto f = fit_lorentzian(x, y);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_LorentzianFit);

void BM_SpeedSampling(benchmark::State& state) {
  RandomStream rng(3, StreamDomain::kTest, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_speed(rng, 287.0, 4));
}
BENCHMARK(BM_SpeedSampling);

}  // namespace

BENCHMARK_MAIN();
