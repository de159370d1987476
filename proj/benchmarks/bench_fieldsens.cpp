#include <benchmark/benchmark.h>

#include "fieldsens/fieldmetrics.hpp"
#include "fieldsens/instrument_dataset.hpp"
#include "fieldsens/linkbudget.hpp"
#include "fieldsens/radiometry.hpp"

using namespace fieldsens;
using namespace fieldsens::literals;

static void BM_NefFromAperture(benchmark::State& state) {
  double t = 23.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nef_from_aperture(Kelvin{t}, 2660_m2, 1.0));
    t += 1e-9;
  }
}
BENCHMARK(BM_NefFromAperture);

static void BM_NefFromGain(benchmark::State& state) {
  double g = 1.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nef_from_gain(7000_K, g, 96_GHz, 0.5));
    g += 1e-12;
  }
}
BENCHMARK(BM_NefFromGain);

static void BM_Nedt(benchmark::State& state) {
  const ReceiverNoiseModel m{250_K, 600_K, 1_GHz, 15_ms, 1.5e-5};
  for (auto _ : state) benchmark::DoNotOptimize(nedt(m));
}
BENCHMARK(BM_Nedt);

static void BM_EvaluateLink(benchmark::State& state) {
  LinkBudget b;
  b.transmit_power = {20.0, DbRef::dbw};
  b.tx_gain = {45.0, DbRef::dbi};
  b.tx_feeder_loss_db = 2.0;
  b.losses = {{"fsl", 206.5}, {"atm", 2.0}, {"rain", 3.0}, {"other", 1.0}};
  b.rx_gain = {50.0, DbRef::dbi};
  b.antenna_temperature = 100_K;
  b.receiver_temperature = 100_K;
  b.rx_feeder_loss = 1.5;
  b.data_rate_bps = 1e8;
  b.path = PathGeometry{Meters{3.6e7}, 20_GHz};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_link(b));
}
BENCHMARK(BM_EvaluateLink);

static void BM_DatasetPipeline(benchmark::State& state) {
  const auto raw = load_instruments(std::string(FIELDSENS_DATA_DIR) + "/spaceborne_receivers.csv");
  for (auto _ : state) {
    const auto derived = derive_records(raw.records);
    benchmark::DoNotOptimize(synthesize_all_ranges(derived));
  }
}
BENCHMARK(BM_DatasetPipeline);

static void BM_ParseDataset(benchmark::State& state) {
  const auto raw = load_instruments(std::string(FIELDSENS_DATA_DIR) + "/spaceborne_receivers.csv");
  const std::string text = serialize_instruments(raw.records);
  for (auto _ : state) benchmark::DoNotOptimize(parse_instruments(text));
}
BENCHMARK(BM_ParseDataset);

BENCHMARK_MAIN();
