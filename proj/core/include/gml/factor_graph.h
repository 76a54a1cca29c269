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

#ifndef GML_FACTOR_GRAPH_H_
#define GML_FACTOR_GRAPH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gml/corpus.h"
#include "gml/easy_labeler.h"
#include "gml/features.h"

namespace gml {

// Potential of a word factor: 1 for value 0, e^w for value 1.
double word_potential(double weight, int value);
// Potential of a relational factor: e^w when the two values agree, else 1.
double relational_potential(double weight, int value_i, int value_j);

enum class VariableKind : std::uint8_t { kEvidence, kInference };
enum class LabelMethod : std::uint8_t { kEasy, kInferred, kFallback };
std::string_view to_string(LabelMethod m);

struct PolarityVariable {
  UnitId unit = 0;
  VariableKind kind = VariableKind::kInference;
  std::optional<Polarity> value;
  std::optional<double> probability;
  std::optional<std::size_t> labeled_at;  // iteration index
  std::optional<LabelMethod> method;

  bool labeled() const { return value.has_value(); }
};

struct WeightInit {
  double word = 0.0;
  double similar = 2.0;
  double opposite = -2.0;
};

// Global factor graph: one polarity variable per aspect unit, unary word
// factors and pairwise relational factors. Relational weights are tied per
// kind.
class FactorGraph {
 public:
  FactorGraph() = default;

  std::size_t variable_count() const { return variables_.size(); }
  const PolarityVariable& variable(UnitId u) const { return variables_[u]; }
  std::span<const PolarityVariable> variables() const { return variables_; }

  std::span<const FeatureId> word_features_of(UnitId u) const {
    return unit_features_[u];
  }
  std::span<const std::size_t> relations_of(UnitId u) const {
    return unit_relations_[u];
  }
  const RelationalFeature& relation(std::size_t i) const { return relations_[i]; }
  std::span<const RelationalFeature> relations() const { return relations_; }
  const FeatureIndex& features() const { return *features_; }
  std::span<const UnitId> bearers(FeatureId f) const {
    return features_->feature(f).bearers;
  }

  double word_weight(FeatureId f) const { return word_weights_[f]; }
  void set_word_weight(FeatureId f, double w) { word_weights_[f] = w; }
  double relation_weight(RelationKind k) const {
    return relation_weights_[static_cast<std::size_t>(k)];
  }
  void set_relation_weight(RelationKind k, double w) {
    relation_weights_[static_cast<std::size_t>(k)] = w;
  }
  std::span<const double> word_weights() const { return word_weights_; }

  // Fixes an inference variable's value. Throws std::logic_error if the
  // variable already has one.
  void label(UnitId u, Polarity value, double probability, std::size_t iteration,
             LabelMethod method);

  std::size_t unlabeled_count() const { return unlabeled_; }
  LabelMap label_map() const;

  friend FactorGraph build_graph(std::size_t unit_count,
                                 const EvidenceSet& evidence,
                                 const FeatureIndex& features,
                                 std::vector<std::vector<FeatureId>> unit_features,
                                 std::vector<RelationalFeature> relations,
                                 const WeightInit& init);

 private:
  std::vector<PolarityVariable> variables_;
  std::vector<std::vector<FeatureId>> unit_features_;
  std::vector<std::vector<std::size_t>> unit_relations_;
  std::vector<RelationalFeature> relations_;
  const FeatureIndex* features_ = nullptr;
  std::vector<double> word_weights_;
  std::array<double, 2> relation_weights_{};
  std::size_t unlabeled_ = 0;
};

// `features` must outlive the graph. Throws ConsistencyError for bearers or
// relation endpoints that are not units, or bearer lists that disagree with
// `unit_features`.
FactorGraph build_graph(std::size_t unit_count, const EvidenceSet& evidence,
                        const FeatureIndex& features,
                        std::vector<std::vector<FeatureId>> unit_features,
                        std::vector<RelationalFeature> relations,
                        const WeightInit& init = {});

// --- subgraphs --------------------------------------------------------------

// Self-contained local model: its own copy of the weights it touches, so
// independent subgraphs can be learned and sampled concurrently. Adjacency is
// rebuilt lazily after factors are added, so a subgraph must not be shared
// across threads while it is still being built.
class Subgraph {
 public:
  using Index = std::uint32_t;

  struct WordFactor {
    Index var;
    Index weight;  // index into word_weights()
  };
  struct RelationFactor {
    Index a;
    Index b;
    RelationKind kind;
  };

  Index add_variable(UnitId unit, std::optional<Polarity> evidence);
  // Registers a local copy of a global word weight; returns its local index.
  Index add_word_weight(FeatureId feature, double weight);
  void add_word_factor(Index var, Index weight);
  void add_relation_factor(Index a, Index b, RelationKind kind);
  void reserve(std::size_t variables, std::size_t word_factors,
               std::size_t word_weights = 0);

  void set_target(Index v) { target_ = v; }
  Index target() const { return target_; }

  std::size_t variable_count() const { return units_.size(); }
  UnitId unit(Index v) const { return units_[v]; }
  std::optional<Index> local_index(UnitId unit) const;
  // -1 free, 0/1 clamped evidence.
  int evidence(Index v) const { return evidence_[v]; }
  bool is_free(Index v) const { return evidence_[v] < 0; }
  std::size_t free_count() const;
  std::size_t evidence_count() const { return units_.size() - free_count(); }

  std::span<const WordFactor> word_factors() const { return word_factors_; }
  std::span<const RelationFactor> relation_factors() const {
    return relation_factors_;
  }
  std::span<const Index> word_factors_of(Index v) const;
  std::span<const Index> relations_of(Index v) const;

  std::span<const double> word_weights() const { return word_weights_; }
  std::span<double> word_weights() { return word_weights_; }
  std::span<const FeatureId> word_weight_features() const {
    return word_weight_features_;
  }
  double relation_weight(RelationKind k) const {
    return relation_weights_[static_cast<std::size_t>(k)];
  }
  void set_relation_weight(RelationKind k, double w) {
    relation_weights_[static_cast<std::size_t>(k)] = w;
  }
  bool has_relation_kind(RelationKind k) const;

  // log P(v = 1 | rest) - log P(v = 0 | rest) for the given full assignment.
  double conditional_logit(Index v, std::span<const std::uint8_t> assignment) const;
  // Sum of log potentials of every factor under `assignment`.
  double log_score(std::span<const std::uint8_t> assignment) const;

 private:
  // Compressed per-variable factor lists, built on first use.
  struct Adjacency {
    std::vector<Index> offsets;
    std::vector<Index> items;
    bool stale = true;
  };
  const Adjacency& word_adjacency() const;
  const Adjacency& relation_adjacency() const;

  std::vector<UnitId> units_;
  std::vector<std::int8_t> evidence_;
  std::vector<WordFactor> word_factors_;
  std::vector<RelationFactor> relation_factors_;
  std::vector<double> word_weights_;
  std::vector<FeatureId> word_weight_features_;
  std::array<double, 2> relation_weights_{};
  Index target_ = 0;
  mutable Adjacency word_adjacency_;
  mutable Adjacency relation_adjacency_;
};

struct SubgraphOptions {
  std::size_t hops = 2;
  std::size_t cap = 500;  // bound on word-feature co-bearers pulled in
  std::uint64_t seed = 0;
};

// Target, its relational neighbours within `hops`, and the co-bearers of the
// target's word features, plus every factor whose scope lies inside that set.
// Labeled variables enter as clamped evidence.
Subgraph extract_subgraph(const FactorGraph& graph, UnitId target,
                          const SubgraphOptions& options = {});

// Copies the subgraph's learned weights back into the global graph.
void write_back_weights(const Subgraph& sub, FactorGraph& graph);

}  // namespace gml

#endif  // GML_FACTOR_GRAPH_H_
