// Microbenchmarks for the hot paths of the acquisition and processing chain.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "windtap/analysis.hpp"
#include "windtap/flow_model.hpp"
#include "windtap/manifest.hpp"
#include "windtap/pipeline.hpp"
#include "windtap/rng.hpp"
#include "windtap/sensor_emulation.hpp"

namespace {

using namespace windtap;

ChordStation mems_at(double x) {
  return ChordStation{x, SensorKind::mems, station_label(x, SensorKind::mems)};
}

TimeSeries noisy_series(std::size_t n, double rate) {
  NoiseGen gen(7);
  TimeSeries ts;
  ts.channel = "bench";
  ts.sample_rate = rate;
  ts.values = gen.ar1_unit(n, 20.0, rate);
  for (auto& v : ts.values) v = -300.0 + 15.0 * v;
  return ts;
}

void BM_GroundTruthSeries(benchmark::State& state) {
  const FlowModelParams params;
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  const auto st = mems_at(0.4);
  const double duration = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ground_truth_series(st, 12.0, fc, params, duration, 2000.0, 11));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(duration * 2000.0));
}
BENCHMARK(BM_GroundTruthSeries)->Arg(10)->Arg(120);

void BM_MemsAcquire(benchmark::State& state) {
  const MemsSpec spec;
  const auto fc = FlowConditions::make(40.0, 1.225, 101325.0);
  const auto truth = noisy_series(static_cast<std::size_t>(state.range(0)), 2000.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mems_acquire(truth, spec, fc, 3, 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MemsAcquire)->Arg(1 << 14)->Arg(1 << 18);

void BM_ScannerAcquire(benchmark::State& state) {
  const ScannerSpec spec;
  const auto truth = noisy_series(static_cast<std::size_t>(state.range(0)), 2048.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scanner_acquire(truth, spec, 3));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScannerAcquire)->Arg(1 << 14)->Arg(1 << 18);

void BM_OutlierFilter(benchmark::State& state) {
  auto series = noisy_series(static_cast<std::size_t>(state.range(0)), 100.0);
  series.values[series.size() / 2] += 500.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(outlier_filter(series));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OutlierFilter)->Arg(1 << 12)->Arg(1 << 16);

void BM_CompensateTube(benchmark::State& state) {
  const ScannerSpec spec;
  TimeSeries recorded;
  recorded.channel = "bench";
  recorded.sample_rate = 512.0;
  recorded.values.resize(static_cast<std::size_t>(state.range(0)));
  for (std::size_t k = 0; k < recorded.values.size(); ++k) {
    recorded.values[k] =
        100.0 * std::sin(2.0 * std::numbers::pi * 20.0 * static_cast<double>(k) / 512.0);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(compensate_tube(recorded, spec));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CompensateTube)->Arg(1 << 14)->Arg(1 << 16);

void BM_SynchronizeResample(benchmark::State& state) {
  const double duration = static_cast<double>(state.range(0));
  std::vector<SyncStream> streams;
  for (double rate : {512.0, 100.0}) {
    SyncStream s;
    s.series = noisy_series(static_cast<std::size_t>(duration * rate), rate);
    s.pulses = sync_pulses(duration);
    streams.push_back(std::move(s));
  }
  const auto reference = sync_pulses(duration);
  for (auto _ : state) {
    benchmark::DoNotOptimize(synchronize_resample(streams, reference, 100.0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(duration * 100.0));
}
BENCHMARK(BM_SynchronizeResample)->Arg(10)->Arg(120);

void BM_DetectSeparation(benchmark::State& state) {
  const FlowModelParams params;
  const auto st = mems_at(0.45);
  std::vector<StationAggregate> curve;
  for (double a = -10.0; a <= 24.0; a += 2.0) {
    StationAggregate agg;
    agg.station = st;
    agg.aoa = a;
    agg.std = fluctuation_std(st, a, params);
    agg.n_samples = 1000;
    curve.push_back(std::move(agg));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect_separation_aoa(curve, 3.0, 8.0));
  }
}
BENCHMARK(BM_DetectSeparation);

}  // namespace

BENCHMARK_MAIN();
