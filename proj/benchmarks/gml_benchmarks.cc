// Copyright 2026 The gml-absa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "gml/engine.h"
#include "gml/evidence.h"
#include "gml/inference.h"

namespace gml {
namespace {

Resources synthetic_resources() {
  Resources r;
  r.lexicon = synthetic_lexicon();
  return r;
}

Corpus synthetic(std::size_t n) {
  SyntheticParams sp;
  sp.n_units = n;
  sp.seed = 1;
  return generate_synthetic(sp);
}

void BM_Combine(benchmark::State& state) {
  Mass m = word_support_mass(0.9, 0.4);
  Mass r = relation_support_mass(0.8, 0.1);
  for (auto _ : state) {
    m = combine(m, r);
    m.a = 0.54;
    m.b = 0.06;
    m.both = 0.4;
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_Combine);

// Chain of free variables hanging off one evidence variable.
Subgraph chain(std::size_t n) {
  Subgraph sub;
  auto w = sub.add_word_weight(0, 0.5);
  Subgraph::Index prev = sub.add_variable(0, Polarity::kPositive);
  for (std::size_t i = 1; i <= n; ++i) {
    auto v = sub.add_variable(static_cast<UnitId>(i), std::nullopt);
    sub.add_word_factor(v, w);
    sub.add_relation_factor(prev, v, i % 3 ? RelationKind::kSimilar
                                           : RelationKind::kOpposite);
    prev = v;
  }
  sub.set_relation_weight(RelationKind::kSimilar, 2.0);
  sub.set_relation_weight(RelationKind::kOpposite, -2.0);
  sub.set_target(1);
  return sub;
}

void BM_InferMarginal(benchmark::State& state) {
  Subgraph sub = chain(static_cast<std::size_t>(state.range(0)));
  InferenceConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(infer_marginal(sub, cfg));
}
BENCHMARK(BM_InferMarginal)->Arg(4)->Arg(32)->Arg(256);

void BM_LearnWeights(benchmark::State& state) {
  Subgraph base = chain(static_cast<std::size_t>(state.range(0)));
  InferenceConfig cfg;
  for (auto _ : state) {
    Subgraph sub = base;
    learn_weights(sub, cfg);
    benchmark::DoNotOptimize(sub);
  }
}
BENCHMARK(BM_LearnWeights)->Arg(32)->Arg(256);

void BM_ExtractSubgraph(benchmark::State& state) {
  Corpus corpus = synthetic(static_cast<std::size_t>(state.range(0)));
  GradualInference engine(corpus, synthetic_resources(), EngineConfig{});
  UnitId target = 0;
  while (engine.labels()[target]) ++target;
  for (auto _ : state) benchmark::DoNotOptimize(engine.subgraph(target));
}
BENCHMARK(BM_ExtractSubgraph)->Arg(1000)->Arg(4000);

void BM_EngineRun(benchmark::State& state) {
  Corpus corpus = synthetic(static_cast<std::size_t>(state.range(0)));
  Resources res = synthetic_resources();
  for (auto _ : state) benchmark::DoNotOptimize(run(corpus, res, EngineConfig{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EngineRun)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gml
