#include <benchmark/benchmark.h>

#include "fastfix/augment/augment.hpp"
#include "fastfix/curricula/schedule.hpp"
#include "fastfix/engine/fixmatch.hpp"
#include "fastfix/gradcore/model.hpp"

namespace {

using namespace fastfix;

ModelSpec desk_spec() {
  ModelSpec s;
  s.height = 8;
  s.width = 8;
  s.widths = {8, 16, 32};
  return s;
}

Tensor random_batch(std::size_t n, const ModelSpec& s, std::uint64_t seed) {
  Tensor x({n, s.in_channels, s.height, s.width});
  Rng rng(seed);
  for (auto& v : x.data()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  return x;
}

void BM_Forward(benchmark::State& state) {
  const auto spec = desk_spec();
  Model m(spec, 1);
  const auto x = random_batch(static_cast<std::size_t>(state.range(0)), spec, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.logits(x, {.use_ema = false, .training = true, .update_stats = false}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(256);

void BM_ForwardBackward(benchmark::State& state) {
  const auto spec = desk_spec();
  Model m(spec, 1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_batch(n, spec, 2);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % 10);
  for (auto _ : state) {
    Tape<float> tape;
    auto loss = ops::softmax_cross_entropy<float>(m.forward(tape, x, {}), y);
    m.backward(loss);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardBackward)->Arg(32)->Arg(256);

void BM_FixMatchStep(benchmark::State& state) {
  const auto spec = desk_spec();
  Model m(spec, 1);
  Sgd opt(m, {});
  StepBatch b;
  b.labeled = random_batch(32, spec, 3);
  for (int i = 0; i < 32; ++i) b.labels.push_back(i % 10);
  const auto u = static_cast<std::size_t>(state.range(0));
  if (u > 0) {
    b.unlabeled_weak = random_batch(u, spec, 4);
    b.unlabeled_strong = random_batch(u, spec, 5);
  }
  const std::vector<double> th(10, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(fixmatch_step(m, opt, b, th, 1.0, 0.999));
}
BENCHMARK(BM_FixMatchStep)->Arg(0)->Arg(56)->Arg(224);

Image random_image(std::size_t side, std::uint64_t seed) {
  Image im;
  im.channels = 3;
  im.height = side;
  im.width = side;
  im.pixels.resize(3 * side * side);
  Rng rng(seed);
  for (auto& v : im.pixels) v = static_cast<float>(rng.uniform());
  return im;
}

void BM_WeakAugment(benchmark::State& state) {
  const auto im = random_image(static_cast<std::size_t>(state.range(0)), 1);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(weak_augment(im, rng));
}
BENCHMARK(BM_WeakAugment)->Arg(8)->Arg(32);

void BM_StrongAugment(benchmark::State& state) {
  const auto im = random_image(static_cast<std::size_t>(state.range(0)), 1);
  const AugmentPolicy policy;
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(strong_augment(im, rng, policy));
}
BENCHMARK(BM_StrongAugment)->Arg(8)->Arg(32);

void BM_DiscreteMeanFraction(benchmark::State& state) {
  const auto T = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(discrete_mean_fraction(448, T, 0.7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DiscreteMeanFraction)->Arg(1 << 20);

}  // namespace

BENCHMARK_MAIN();
