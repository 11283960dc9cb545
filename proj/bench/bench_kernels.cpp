/*
 * Copyright 2026 The Saliency Bias Audit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference vs OpenMP variants of the per-image audit kernels.

#include <benchmark/benchmark.h>

#include "sba/eval/scoring.hpp"
#include "sba/synth/generator.hpp"

namespace {

using namespace sba;

struct Fixture {
  Fixture() {
    GenConfig cfg;
    cfg.counts = {64, 64, 64, 64};
    data = synth::generate(cfg);
    model = nn::init_model(11);
    for (const auto& s : data.samples) {
      images.push_back(&s.image);
      ids.push_back(s.id);
    }
    maps = eval::explain_serial(model, images, ids, saliency::Explainer::GradCAM, 0.5);
    for (const auto& m : maps) rankings.push_back(&m.ranking);
  }
  Dataset data;
  nn::MiniPadNet model;
  eval::ImageList images;
  std::vector<std::int64_t> ids;
  std::vector<saliency::SaliencyMap> maps;
  eval::RankingList rankings;
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_Forward(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(nn::forward(f.model, f.data.samples[0].image));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Forward);

void BM_ForwardBackward(benchmark::State& state) {
  auto& f = fixture();
  auto grads = nn::Gradients::zeros_like(f.model);
  const auto& s = f.data.samples.back();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        nn::accumulate_loss_gradient(f.model, nn::forward(f.model, s.image), s.label, grads));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ForwardBackward);

void BM_ScorePerturbedSerial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::score_perturbed_serial(
        f.model, f.images, f.rankings, 154, eval::PerturbationMode::Deletion));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.images.size()));
}
BENCHMARK(BM_ScorePerturbedSerial)->Unit(benchmark::kMillisecond);

void BM_ScorePerturbedParallel(benchmark::State& state) {
  auto& f = fixture();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::score_perturbed_parallel(
        f.model, f.images, f.rankings, 154, eval::PerturbationMode::Deletion, threads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.images.size()));
}
BENCHMARK(BM_ScorePerturbedParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_ExplainSerial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        eval::explain_serial(f.model, f.images, f.ids, saliency::Explainer::GradCAMpp, 0.5));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.images.size()));
}
BENCHMARK(BM_ExplainSerial)->Unit(benchmark::kMillisecond);

void BM_ExplainParallel(benchmark::State& state) {
  auto& f = fixture();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::explain_parallel(f.model, f.images, f.ids,
                                                    saliency::Explainer::GradCAMpp, 0.5, threads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.images.size()));
}
BENCHMARK(BM_ExplainParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
