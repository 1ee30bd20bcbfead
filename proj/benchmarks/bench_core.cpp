#include <benchmark/benchmark.h>

#include "aerocov/antenna.hpp"
#include "aerocov/channel.hpp"
#include "aerocov/coverage.hpp"
#include "aerocov/rng.hpp"
#include "aerocov/units.hpp"

namespace {

using namespace aerocov;

void BM_CompositeGain(benchmark::State& state) {
  AntennaConfig antenna;
  antenna.num_elements_v = static_cast<int>(state.range(0));
  double theta = 60.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(composite_gain_dbi(0.0, theta, 5.0, antenna));
    theta += 0.37;
    if (theta > 180.0) {
      theta -= 180.0;
    }
  }
}
BENCHMARK(BM_CompositeGain)->Arg(16)->Arg(64);

void BM_ExpectedTotalLoss(benchmark::State& state) {
  SystemConfig config;
  config.user_height_m = static_cast<double>(state.range(0));
  double r = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        expected_total_loss(r, config.user_height_m, config));
    r = r < 4800.0 ? r + 13.0 : 10.0;
  }
}
BENCHMARK(BM_ExpectedTotalLoss)->Arg(2)->Arg(100);

void BM_SamplePpp(benchmark::State& state) {
  SystemConfig config;
  auto rng = derive_stream(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_ppp(config, rng));
  }
}
BENCHMARK(BM_SamplePpp);

void BM_UnfadedPowers(benchmark::State& state) {
  SystemConfig config;
  auto rng = derive_stream(2);
  const GeometryRealization geometry = realize_geometry(config, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(unfaded_powers(geometry, config));
  }
  state.SetItemsProcessed(state.iterations() *
                          (geometry.interferer_r_m.size() + 1));
}
BENCHMARK(BM_UnfadedPowers);

void BM_ConditionalCoverage(benchmark::State& state) {
  SystemConfig config;
  config.nakagami_m = static_cast<int>(state.range(0));
  auto rng = derive_stream(3);
  const GeometryRealization geometry = realize_geometry(config, rng);
  const RealizationPowers powers = unfaded_powers(geometry, config);
  const double noise = config.noise_mw();
  const double t_lin = units::db_to_linear(0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        conditional_coverage(powers, noise, config.nakagami_m, t_lin));
  }
}
BENCHMARK(BM_ConditionalCoverage)->Arg(1)->Arg(4);

void BM_McIteration(benchmark::State& state) {
  SystemConfig config;
  std::uint64_t iteration = 0;
  const double noise = config.noise_mw();
  for (auto _ : state) {
    auto rng = derive_stream(4, iteration++);
    const GeometryRealization geometry = realize_geometry(config, rng);
    const RealizationPowers powers = unfaded_powers(geometry, config);
    double interference = 0.0;
    double serving = powers.serving_mw * sample_nakagami_power(1, rng);
    for (double p : powers.interferers_mw) {
      interference += p * sample_nakagami_power(1, rng);
    }
    benchmark::DoNotOptimize(serving / (interference + noise));
  }
}
BENCHMARK(BM_McIteration);

} // namespace

BENCHMARK_MAIN();
