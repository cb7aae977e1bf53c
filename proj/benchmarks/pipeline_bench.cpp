#include <benchmark/benchmark.h>

#include "hcolor/decode.hpp"
#include "hcolor/net.hpp"
#include "hcolor/synth.hpp"
#include "hcolor/transfer.hpp"

namespace {

using namespace hcolor;

const OutputCoding& coding() {
  static const OutputCoding c({LossVariant::hue_chroma_hist, 5.0, 1}, 32, 25.0);
  return c;
}

GrayImage test_gray(int size) {
  SynthOptions o;
  o.width = o.height = size;
  return desaturate(synth_image(3, 0, o));
}

void BM_ForwardFeatures(benchmark::State& state) {
  const Model model = init_model(NetConfig::desk_scale(coding()), 1);
  const GrayImage gray = test_gray(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(forward_features(model, gray));
  state.SetItemsProcessed(state.iterations() * gray.pixel_count());
}
BENCHMARK(BM_ForwardFeatures)->Arg(32)->Arg(64)->Arg(128);

void BM_PredictField(benchmark::State& state) {
  const Model model = init_model(NetConfig::desk_scale(coding()), 1);
  const GrayImage gray = test_gray(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(predict_field(model, gray));
  state.SetItemsProcessed(state.iterations() * gray.pixel_count());
}
BENCHMARK(BM_PredictField)->Arg(32)->Arg(64);

void BM_TrainStep(benchmark::State& state) {
  Model model = init_model(NetConfig::desk_scale(coding()), 1);
  std::vector<TrainSample> batch;
  for (const auto& img : synth_corpus(2, 4)) batch.push_back(make_train_sample(img, coding()));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(train_step(model, batch, coding(), 0.01, seed++));
}
BENCHMARK(BM_TrainStep);

void BM_Render(benchmark::State& state) {
  const Model model = init_model(NetConfig::desk_scale(coding()), 1);
  const GrayImage gray = test_gray(64);
  const HistogramField field = predict_field(model, gray);
  for (auto _ : state) benchmark::DoNotOptimize(render(field, gray, {}));
  state.SetItemsProcessed(state.iterations() * gray.pixel_count());
}
BENCHMARK(BM_Render);

void BM_EnergyMinimize(benchmark::State& state) {
  const Model model = init_model(NetConfig::desk_scale(coding()), 1);
  const GrayImage gray = test_gray(64);
  const HistogramField field = predict_field(model, gray);
  const auto target = ground_truth_histograms(synth_image(3, 1, {64, 64, false}), field);
  for (auto _ : state) benchmark::DoNotOptimize(energy_minimize(field, target, {}));
}
BENCHMARK(BM_EnergyMinimize);

void BM_QuantileMatch(benchmark::State& state) {
  const RgbImage a = synth_image(4, 0, {64, 64, false}), b = synth_image(4, 1, {64, 64, true});
  for (auto _ : state) benchmark::DoNotOptimize(quantile_match(a, b));
}
BENCHMARK(BM_QuantileMatch);

}  // namespace
BENCHMARK_MAIN();
