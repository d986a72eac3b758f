// Serial reference against the OpenMP path for the data-parallel kernels.
// Arg 0 is Exec::Serial, 1 is Exec::Parallel.

#include <benchmark/benchmark.h>

#include "relcurr/relcurr.hpp"

using namespace relcurr;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

GeneratorConfig bench_generator() {
  GeneratorConfig g;
  g.n_samples = 1000;
  g.length = 128;
  g.seed = 17;
  return g;
}

const Dataset& bench_dataset() {
  static const Dataset ds = generate(bench_generator());
  return ds;
}

const std::vector<ReliabilityRecord>& bench_records() {
  static const auto records = [] {
    const auto& ds = bench_dataset();
    const auto anns = SyntheticAnnotator(bench_generator()).annotate_all(ds, default_questionnaire(), 16, 3);
    return build_reliability_records(ds, anns, {});
  }();
  return records;
}

void BM_Generate(benchmark::State& st) {
  const auto g = bench_generator();
  for (auto _ : st) benchmark::DoNotOptimize(generate(g, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * g.n_samples);
}

void BM_ExtractFeatures(benchmark::State& st) {
  const auto& ds = bench_dataset();
  const auto order = channel_names(ds.samples[0].signal);
  for (auto _ : st) benchmark::DoNotOptimize(extract_features_all(ds.samples, order, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * ds.size());
}

void BM_Annotate(benchmark::State& st) {
  const auto& ds = bench_dataset();
  const SyntheticAnnotator oracle(bench_generator());
  const auto q = default_questionnaire();
  for (auto _ : st) benchmark::DoNotOptimize(oracle.annotate_all(ds, q, 16, 3, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * ds.size());
}

void BM_Augment(benchmark::State& st) {
  const auto& ds = bench_dataset();
  const auto& records = bench_records();
  AugmentConfig cfg;
  cfg.seed = 5;
  for (auto _ : st) benchmark::DoNotOptimize(augment_dataset(ds, records, cfg, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * ds.size());
}

void BM_Predict(benchmark::State& st) {
  const auto& ds = bench_dataset();
  const auto order = channel_names(ds.samples[0].signal);
  const auto features = extract_features_all(ds.samples, order);
  ClassifierModel model(static_cast<int>(features[0].size()), ds.num_classes, 32, 9);
  model.standardizer() = Standardizer::fit(features);
  for (auto _ : st) benchmark::DoNotOptimize(predict_all(model, features, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * ds.size());
}

}  // namespace

BENCHMARK(BM_Generate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractFeatures)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Annotate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Augment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Predict)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
