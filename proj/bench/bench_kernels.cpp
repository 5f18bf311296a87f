/*
 * Copyright 2026 The releval Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
// Serial reference vs OpenMP kernels on a synthetic corpus.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "releval/kernels.hpp"

namespace {

using namespace releval;

struct Corpus {
  std::vector<LabeledSerp> serps;
  JudgmentStore judgments;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> grade(0, kMaxGrade);
    for (int q = 0; q < 2000; ++q) {
      LabeledSerp serp;
      serp.query_id = "q" + std::to_string(q);
      for (int k = 1; k <= static_cast<int>(kDefaultDepth); ++k) {
        JudgedResult r{"d" + std::to_string(k), k,
                       {Grade{grade(rng)}, Grade{grade(rng)}, Grade{grade(rng)}}};
        out.judgments.insert(serp.query_id, r.doc_id, r.labels);
        serp.results.push_back(std::move(r));
      }
      out.serps.push_back(std::move(serp));
    }
    return out;
  }();
  return c;
}

ClickModelParams dbn() {
  ClickModelParams p;
  p.model = ModelKind::dbn;
  const double a[] = {0.05, 0.2, 0.4, 0.6, 0.8};
  const double s[] = {0.1, 0.25, 0.4, 0.6, 0.8};
  for (int g = 0; g < kNumGrades; ++g) {
    p.attractiveness[Grade{g}] = a[g];
    p.dbn_satisfaction[Grade{g}] = s[g];
  }
  p.dbn_continuation = 0.9;
  return p;
}

template <auto Kernel>
void score(benchmark::State& state) {
  const auto params = dbn();
  MetricSpec spec;
  spec.kind = MetricKind::udbn;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(corpus().serps, &params, spec));
  }
  state.SetItemsProcessed(state.iterations() * corpus().serps.size());
}

template <auto Kernel>
void draw(benchmark::State& state) {
  const auto params = dbn();
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(corpus().serps, params, 20, 7, LabelPolicy::zero));
  }
  state.SetItemsProcessed(state.iterations() * corpus().serps.size() * 20);
}

template <auto Kernel>
void estep(benchmark::State& state) {
  const auto params = dbn();
  const auto sessions = omp::draw_sessions(corpus().serps, params, 20, 7, LabelPolicy::zero);
  const auto batch = make_batch(sessions, corpus().judgments, LabelPolicy::zero);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(batch, params));
  }
  state.SetItemsProcessed(state.iterations() * batch.size());
}

BENCHMARK(score<serial::score_serps>)->Name("score_serps/serial");
BENCHMARK(score<omp::score_serps>)->Name("score_serps/omp");
BENCHMARK(draw<serial::draw_sessions>)->Name("draw_sessions/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(draw<omp::draw_sessions>)->Name("draw_sessions/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(estep<serial::expected_counts>)->Name("expected_counts/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(estep<omp::expected_counts>)->Name("expected_counts/omp")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
