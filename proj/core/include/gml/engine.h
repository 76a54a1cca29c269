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

#ifndef GML_ENGINE_H_
#define GML_ENGINE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gml/corpus.h"
#include "gml/easy_labeler.h"
#include "gml/evidence.h"
#include "gml/factor_graph.h"
#include "gml/features.h"
#include "gml/inference.h"
#include "gml/lexicon.h"

namespace gml {

struct EngineConfig {
  std::size_t m = 20;
  std::size_t k = 3;
  UncertaintyParams uncertainty;
  InferenceConfig inference;
  WeightInit init;
  double sim_threshold = kDefaultSimThreshold;
  std::size_t kgram_max = kDefaultKgramMax;
  std::size_t negation_window = kDefaultNegationWindow;
  std::size_t hops = 2;
  std::size_t subgraph_cap = 500;
  std::size_t threads = 0;  // 0: GML_THREADS, else the hardware concurrency
  std::uint64_t seed = 0;

  // Throws InputError.
  void validate() const;
};

// Worker count for `requested` (0 means GML_THREADS or hardware concurrency).
std::size_t resolve_threads(std::size_t requested);

struct Resources {
  Lexicon lexicon;
  ConnectiveLists connectives = ConnectiveLists::defaults();
  std::optional<EmbeddingTable> embeddings;
  OpinionTargetExtractor targets = stoplist_opinion_targets;
};

// Everything derived from the corpus before gradual inference starts.
struct Prepared {
  std::vector<AspectUnit> units;
  SentenceTable table;
  std::vector<OpinionSpan> spans;
  EasyLabeling easy;
  std::unique_ptr<FeatureIndex> features;
  std::vector<std::vector<FeatureId>> unit_features;
  std::vector<RelationalFeature> relations;
};

// Throws InputError when category aspects exist without embeddings, or, if
// `require_evidence`, when no unit is easy.
Prepared prepare(const Corpus& corpus, const Resources& resources,
                 const EngineConfig& config, bool require_evidence = true);

struct UnitRecord {
  UnitId unit_id = 0;
  std::string review_id;
  std::string sentence_id;
  std::string aspect_id;
  Polarity predicted = Polarity::kPositive;
  double probability = 0.5;  // P(positive)
  double entropy = 0.0;
  LabelMethod method = LabelMethod::kEasy;
  std::optional<std::size_t> iteration;  // absent for easy labels
};

struct StepRecord {
  std::size_t iteration = 0;
  UnitId unit = 0;
  Polarity label = Polarity::kPositive;
  double probability = 0.5;
  double entropy = 0.0;
  LabelMethod method = LabelMethod::kInferred;
  std::vector<UnitId> candidates;  // the k inferred, in rank order
};

struct RunResult {
  std::vector<UnitRecord> records;  // indexed by unit id
  EasyStats easy;
  std::size_t iterations = 0;
  double seconds = 0.0;
};

// Algorithm 1, one label per step().
class GradualInference {
 public:
  // Keeps a reference to `corpus`, which must outlive the engine.
  GradualInference(const Corpus& corpus, const Resources& resources,
                   const EngineConfig& config);
  GradualInference(Corpus&&, const Resources&, const EngineConfig&) = delete;

  bool done() const { return graph_.unlabeled_count() == 0; }
  std::size_t iteration() const { return iteration_; }
  // Throws std::logic_error when every unit is labeled.
  StepRecord step();
  void run_to_completion();
  RunResult result() const;

  const Corpus& corpus() const { return *corpus_; }
  const Prepared& prepared() const { return prepared_; }
  const FactorGraph& graph() const { return graph_; }
  const FeatureStats& stats() const { return stats_; }
  const LabelMap& labels() const { return labels_; }
  const EngineConfig& config() const { return config_; }

  // Cached support of an unlabeled unit (0 once labeled).
  double support(UnitId u) const { return support_[u]; }
  // Support of every unit recomputed from scratch.
  std::vector<double> recompute_supports() const;
  ObservedEvidence observed(UnitId u) const;
  Subgraph subgraph(UnitId u) const;
  RankKey rank_key(UnitId u) const;

 private:
  struct Candidate {
    UnitId unit;
    Subgraph sub;
    MarginalResult marginal;
  };

  void label(UnitId u, Polarity value, double probability, LabelMethod method);
  void refresh_word_mass(UnitId u);
  void refresh_support(UnitId u);
  StepRecord fallback_step();
  void infer_candidates(std::vector<Candidate>& candidates) const;

  const Corpus* corpus_;
  EngineConfig config_;
  Prepared prepared_;
  FactorGraph graph_;
  FeatureStats stats_;
  LabelMap labels_;
  std::vector<Mass> word_mass_;
  std::vector<std::array<std::uint32_t, 2>> observed_relations_;
  // Per relation kind, units that have observed a relation of that kind;
  // labeled units are dropped lazily.
  std::array<std::vector<UnitId>, 2> relation_holders_;
  std::vector<std::uint8_t> dirty_mark_;
  std::vector<double> support_;
  std::size_t iteration_ = 0;
  std::size_t threads_ = 1;
  std::vector<UnitRecord> records_;
};

RunResult run(const Corpus& corpus, const Resources& resources,
              const EngineConfig& config);

struct MethodMetrics {
  std::size_t count = 0;
  std::size_t gold = 0;
  std::size_t correct = 0;
  std::optional<double> accuracy;
};

struct Metrics {
  std::size_t units = 0;
  std::size_t gold = 0;
  std::optional<double> accuracy;
  std::array<MethodMetrics, 3> by_method;  // easy, inferred, fallback
  double easy_proportion = 0.0;
  std::optional<double> easy_accuracy;
  std::size_t iterations = 0;
  // Accuracy over all gold units labeled so far, after each iteration.
  std::vector<double> trace;
};

// Throws InputError when the records do not cover exactly the corpus's units
// (the message lists up to 10 offending unit ids).
Metrics evaluate(std::span<const UnitRecord> records, const Corpus& corpus);

// --- synthetic workloads ----------------------------------------------------

struct SyntheticParams {
  std::size_t n_units = 1000;
  double easy_fraction = 0.5;
  double relation_density = 0.75;
  double noise = 0.05;
  std::uint64_t seed = 0;

  // Throws InputError.
  void validate() const;
};

// Reviews of template sentences with planted gold polarities.
Corpus generate_synthetic(const SyntheticParams& params);
// Lexicon covering the generator's sentiment vocabulary.
Lexicon synthetic_lexicon();

struct BenchRow {
  std::size_t size = 0;
  double total_seconds = 0.0;
  double seconds_per_label = 0.0;
};

// Runs the engine on synthetic corpora of each size. Throws InputError for an
// empty list, a zero size or sizes that are not strictly ascending.
std::vector<BenchRow> bench_scaling(std::span<const std::size_t> sizes,
                                    const EngineConfig& config,
                                    SyntheticParams params = {});

}  // namespace gml

#endif  // GML_ENGINE_H_
