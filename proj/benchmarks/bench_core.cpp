#include <benchmark/benchmark.h>

#include "sfcbackup/harness.hpp"
#include "sfcbackup/oracle.hpp"

using namespace sfcbackup;

namespace {

const ExperimentConfig& reference() {
  static const ExperimentConfig cfg = canonical_config();
  return cfg;
}

void BM_GetConsumption(benchmark::State& state) {
  const auto& cfg = reference();
  const ResidualCapacity full(cfg.network);
  for (auto _ : state) {
    for (std::size_t f = 0; f < cfg.catalog.num_sfcs(); ++f) {
      benchmark::DoNotOptimize(get_consumption(cfg.network, cfg.catalog, full, SfcId{f}));
    }
  }
}
BENCHMARK(BM_GetConsumption);

void BM_SampleSlot(benchmark::State& state) {
  auto cfg = reference();
  cfg.set_users(static_cast<std::size_t>(state.range(0)));
  const auto gt = cfg.ground_truth(1);
  std::uint64_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_slot(gt, t++));
}
BENCHMARK(BM_SampleSlot)->Arg(10)->Arg(100);

void BM_RtsdSlot(benchmark::State& state) {
  const auto& cfg = reference();
  const auto gt = cfg.ground_truth(1);
  auto learners = init_learners(sample_slot(gt, 0), cfg.users, cfg.knobs);
  std::uint64_t t = 1;
  for (auto _ : state) {
    const auto obs = sample_slot(gt, t);
    benchmark::DoNotOptimize(rtsd_slot(cfg.network, cfg.catalog, learners, t, obs, cfg.weights));
    ++t;
  }
}
BENCHMARK(BM_RtsdSlot);

void BM_SlotOracle(benchmark::State& state) {
  const auto& cfg = reference();
  const auto gt = cfg.ground_truth(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_slot_value(cfg.network, cfg.catalog, gt, cfg.weights));
  }
}
BENCHMARK(BM_SlotOracle)->Unit(benchmark::kMillisecond);

void BM_ReferenceExperiment(benchmark::State& state) {
  auto cfg = reference();
  cfg.seeds = {1};
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
}
BENCHMARK(BM_ReferenceExperiment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
