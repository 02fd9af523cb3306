#include <benchmark/benchmark.h>

#include "pixelprobe/attack.hpp"
#include "pixelprobe/confmap.hpp"
#include "pixelprobe/network.hpp"
#include "pixelprobe/random.hpp"
#include "pixelprobe/scorer.hpp"
#include "pixelprobe/synthetic.hpp"

using namespace pixelprobe;

static void BM_FullForward64(benchmark::State& state) {
  const NetworkWeights w = spotnet_weights();
  const Image img = make_spot_image(64, 64, 6);
  for (auto _ : state) benchmark::DoNotOptimize(builtin_forward(w, img));
}
BENCHMARK(BM_FullForward64);

static void BM_IncrementalPerturbations(benchmark::State& state) {
  BuiltinScorer scorer("spotnet");
  const Image img = make_spot_image(64, 64, 6);
  SplitMix64 rng(1);
  std::vector<AttackVector> vectors(static_cast<std::size_t>(state.range(0)));
  for (auto& v : vectors) {
    v = {static_cast<std::uint32_t>(rng.index(64)), static_cast<std::uint32_t>(rng.index(64)),
         static_cast<std::uint8_t>(rng.index(256)), static_cast<std::uint8_t>(rng.index(256)),
         static_cast<std::uint8_t>(rng.index(256))};
  }
  for (auto _ : state) benchmark::DoNotOptimize(scorer.score_perturbations(img, vectors));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IncrementalPerturbations)->Arg(200)->Arg(4096);

static void BM_ConfidenceMap(benchmark::State& state) {
  BuiltinScorer scorer("spotnet");
  const Image img = make_spot_image(32, 32, 4);
  const ColorSet colors(51);
  ScanOptions o;
  o.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_confidence_map(img, scorer, colors, o));
  state.SetItemsProcessed(state.iterations() * 32 * 32 * static_cast<std::int64_t>(colors.size()));
}
BENCHMARK(BM_ConfidenceMap)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_Attack(benchmark::State& state) {
  BuiltinScorer scorer("spotnet");
  const Image img = make_spot_image(64, 64, 6);
  DEConfig cfg;
  cfg.generations = 20;
  for (auto _ : state) benchmark::DoNotOptimize(run_attack(img, scorer, Direction::kMinimize, cfg));
}
BENCHMARK(BM_Attack)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
