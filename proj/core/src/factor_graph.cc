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

#include "gml/factor_graph.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "gml/errors.h"
#include "gml/numeric.h"

namespace gml {

double word_potential(double weight, int value) {
  return value == 1 ? std::exp(weight) : 1.0;
}

double relational_potential(double weight, int value_i, int value_j) {
  return value_i == value_j ? std::exp(weight) : 1.0;
}

std::string_view to_string(LabelMethod m) {
  switch (m) {
    case LabelMethod::kEasy:
      return "easy";
    case LabelMethod::kInferred:
      return "inferred";
    case LabelMethod::kFallback:
      return "fallback";
  }
  return "unknown";
}

// --- FactorGraph ------------------------------------------------------------

void FactorGraph::label(UnitId u, Polarity value, double probability,
                        std::size_t iteration, LabelMethod method) {
  PolarityVariable& v = variables_.at(u);
  if (v.labeled()) {
    throw std::logic_error("variable " + std::to_string(u) +
                           " is already labeled");
  }
  v.value = value;
  v.probability = probability;
  v.labeled_at = iteration;
  v.method = method;
  --unlabeled_;
}

LabelMap FactorGraph::label_map() const {
  LabelMap labels(variables_.size());
  for (const auto& v : variables_) labels[v.unit] = v.value;
  return labels;
}

FactorGraph build_graph(std::size_t unit_count, const EvidenceSet& evidence,
                        const FeatureIndex& features,
                        std::vector<std::vector<FeatureId>> unit_features,
                        std::vector<RelationalFeature> relations,
                        const WeightInit& init) {
  if (unit_features.size() != unit_count) {
    throw ConsistencyError("word feature lists must cover every unit");
  }
  FactorGraph g;
  g.variables_.resize(unit_count);
  g.unlabeled_ = unit_count;
  for (std::size_t u = 0; u < unit_count; ++u) {
    g.variables_[u].unit = static_cast<UnitId>(u);
  }
  for (const auto& [u, polarity] : evidence.labels) {
    if (u >= unit_count) {
      throw ConsistencyError("evidence for unknown unit " + std::to_string(u));
    }
    auto& v = g.variables_[u];
    v.kind = VariableKind::kEvidence;
    v.value = polarity;
    v.probability = polarity == Polarity::kPositive ? 1.0 : 0.0;
    v.method = LabelMethod::kEasy;
    --g.unlabeled_;
  }

  // Bearer lists and per-unit feature lists must describe the same edges.
  std::size_t edges = 0;
  for (std::size_t u = 0; u < unit_count; ++u) {
    for (FeatureId f : unit_features[u]) {
      if (f >= features.size()) {
        throw ConsistencyError("unit " + std::to_string(u) +
                               " references unknown feature " + std::to_string(f));
      }
      const auto& bearers = features.feature(f).bearers;
      if (!std::binary_search(bearers.begin(), bearers.end(),
                              static_cast<UnitId>(u))) {
        throw ConsistencyError("feature " + std::to_string(f) +
                               " does not list unit " + std::to_string(u));
      }
      ++edges;
    }
  }
  std::size_t bearer_edges = 0;
  for (const auto& f : features.features()) {
    for (UnitId b : f.bearers) {
      if (b >= unit_count) {
        throw ConsistencyError("feature '" + f.text() +
                               "' has dangling bearer " + std::to_string(b));
      }
    }
    bearer_edges += f.bearers.size();
  }
  if (bearer_edges != edges) {
    throw ConsistencyError("feature bearer lists disagree with unit features");
  }

  g.unit_relations_.resize(unit_count);
  for (std::size_t i = 0; i < relations.size(); ++i) {
    const auto& r = relations[i];
    if (r.a >= unit_count || r.b >= unit_count || r.a == r.b) {
      throw ConsistencyError("relation " + std::to_string(i) +
                             " has invalid endpoints");
    }
    g.unit_relations_[r.a].push_back(i);
    g.unit_relations_[r.b].push_back(i);
  }

  g.unit_features_ = std::move(unit_features);
  g.relations_ = std::move(relations);
  g.features_ = &features;
  g.word_weights_.assign(features.size(), init.word);
  g.relation_weights_ = {init.similar, init.opposite};
  return g;
}

// --- Subgraph ---------------------------------------------------------------

Subgraph::Index Subgraph::add_variable(UnitId unit,
                                       std::optional<Polarity> evidence) {
  auto idx = static_cast<Index>(units_.size());
  units_.push_back(unit);
  evidence_.push_back(evidence ? static_cast<std::int8_t>(*evidence) : -1);
  word_adjacency_.stale = true;
  relation_adjacency_.stale = true;
  return idx;
}

Subgraph::Index Subgraph::add_word_weight(FeatureId feature, double weight) {
  auto idx = static_cast<Index>(word_weights_.size());
  word_weights_.push_back(weight);
  word_weight_features_.push_back(feature);
  return idx;
}

void Subgraph::add_word_factor(Index var, Index weight) {
  if (var >= units_.size() || weight >= word_weights_.size()) {
    throw std::out_of_range("word factor references unknown variable/weight");
  }
  word_factors_.push_back({var, weight});
  word_adjacency_.stale = true;
}

void Subgraph::add_relation_factor(Index a, Index b, RelationKind kind) {
  if (a >= units_.size() || b >= units_.size() || a == b) {
    throw std::out_of_range("relation factor references unknown variables");
  }
  relation_factors_.push_back({a, b, kind});
  relation_adjacency_.stale = true;
}

void Subgraph::reserve(std::size_t variables, std::size_t word_factors,
                       std::size_t word_weights) {
  units_.reserve(variables);
  evidence_.reserve(variables);
  word_factors_.reserve(word_factors);
  word_weights_.reserve(word_weights);
  word_weight_features_.reserve(word_weights);
}

const Subgraph::Adjacency& Subgraph::word_adjacency() const {
  Adjacency& adj = word_adjacency_;
  if (!adj.stale) return adj;
  adj.offsets.assign(units_.size() + 1, 0);
  for (const auto& f : word_factors_) ++adj.offsets[f.var + 1];
  for (std::size_t v = 0; v < units_.size(); ++v) adj.offsets[v + 1] += adj.offsets[v];
  adj.items.resize(word_factors_.size());
  std::vector<Index> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  for (Index i = 0; i < word_factors_.size(); ++i) {
    adj.items[fill[word_factors_[i].var]++] = i;
  }
  adj.stale = false;
  return adj;
}

const Subgraph::Adjacency& Subgraph::relation_adjacency() const {
  Adjacency& adj = relation_adjacency_;
  if (!adj.stale) return adj;
  adj.offsets.assign(units_.size() + 1, 0);
  for (const auto& r : relation_factors_) {
    ++adj.offsets[r.a + 1];
    ++adj.offsets[r.b + 1];
  }
  for (std::size_t v = 0; v < units_.size(); ++v) adj.offsets[v + 1] += adj.offsets[v];
  adj.items.resize(2 * relation_factors_.size());
  std::vector<Index> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  for (Index i = 0; i < relation_factors_.size(); ++i) {
    adj.items[fill[relation_factors_[i].a]++] = i;
    adj.items[fill[relation_factors_[i].b]++] = i;
  }
  adj.stale = false;
  return adj;
}

std::span<const Subgraph::Index> Subgraph::word_factors_of(Index v) const {
  const Adjacency& adj = word_adjacency();
  return std::span<const Index>(adj.items)
      .subspan(adj.offsets[v], adj.offsets[v + 1] - adj.offsets[v]);
}

std::span<const Subgraph::Index> Subgraph::relations_of(Index v) const {
  const Adjacency& adj = relation_adjacency();
  return std::span<const Index>(adj.items)
      .subspan(adj.offsets[v], adj.offsets[v + 1] - adj.offsets[v]);
}

std::optional<Subgraph::Index> Subgraph::local_index(UnitId unit) const {
  auto it = std::find(units_.begin(), units_.end(), unit);
  if (it == units_.end()) return std::nullopt;
  return static_cast<Index>(it - units_.begin());
}

std::size_t Subgraph::free_count() const {
  return static_cast<std::size_t>(
      std::count(evidence_.begin(), evidence_.end(), std::int8_t{-1}));
}

bool Subgraph::has_relation_kind(RelationKind k) const {
  return std::any_of(relation_factors_.begin(), relation_factors_.end(),
                     [k](const RelationFactor& r) { return r.kind == k; });
}

double Subgraph::conditional_logit(Index v,
                                   std::span<const std::uint8_t> assignment) const {
  double logit = 0.0;
  for (Index fi : word_factors_of(v)) {
    logit += word_weights_[word_factors_[fi].weight];
  }
  for (Index ri : relations_of(v)) {
    const auto& r = relation_factors_[ri];
    Index other = r.a == v ? r.b : r.a;
    double w = relation_weight(r.kind);
    logit += assignment[other] ? w : -w;
  }
  return logit;
}

double Subgraph::log_score(std::span<const std::uint8_t> assignment) const {
  double s = 0.0;
  for (const auto& f : word_factors_) {
    s += std::log(word_potential(word_weights_[f.weight], assignment[f.var]));
  }
  for (const auto& r : relation_factors_) {
    s += std::log(relational_potential(relation_weight(r.kind), assignment[r.a],
                                       assignment[r.b]));
  }
  return s;
}

namespace {

constexpr Subgraph::Index kAbsent = static_cast<Subgraph::Index>(-1);

// Dense unit -> local and feature -> local maps reused across extractions on
// the same thread; only touched entries are reset.
struct ExtractionScratch {
  std::vector<Subgraph::Index> unit_local;
  std::vector<Subgraph::Index> feature_local;
  std::vector<UnitId> touched_units;
  std::vector<FeatureId> touched_features;
  std::vector<UnitId> members, frontier, next, labeled, unlabeled;

  void prepare(std::size_t units, std::size_t features) {
    if (unit_local.size() < units) unit_local.resize(units, kAbsent);
    if (feature_local.size() < features) feature_local.resize(features, kAbsent);
  }
  bool mark(UnitId u, Subgraph::Index value) {
    if (unit_local[u] != kAbsent) return false;
    unit_local[u] = value;
    touched_units.push_back(u);
    return true;
  }
  void reset() {
    for (auto* v : {&members, &frontier, &next, &labeled, &unlabeled}) v->clear();
    for (UnitId u : touched_units) unit_local[u] = kAbsent;
    for (FeatureId f : touched_features) feature_local[f] = kAbsent;
    touched_units.clear();
    touched_features.clear();
  }
};

}  // namespace

Subgraph extract_subgraph(const FactorGraph& graph, UnitId target,
                          const SubgraphOptions& options) {
  thread_local ExtractionScratch scratch;
  scratch.prepare(graph.variable_count(), graph.features().size());
  struct Reset {
    ExtractionScratch& s;
    ~Reset() { s.reset(); }
  } reset{scratch};

  // Members get their local index only once the final set is known; until
  // then unit_local holds 0 as a membership mark.
  auto& members = scratch.members;
  members.push_back(target);
  scratch.mark(target, 0);

  // Breadth-first expansion along relational factors.
  auto& frontier = scratch.frontier;
  auto& next = scratch.next;
  frontier.push_back(target);
  for (std::size_t hop = 0; hop < options.hops && !frontier.empty(); ++hop) {
    next.clear();
    for (UnitId u : frontier) {
      for (std::size_t ri : graph.relations_of(u)) {
        UnitId other = graph.relation(ri).other(u);
        if (scratch.mark(other, 0)) {
          members.push_back(other);
          next.push_back(other);
        }
      }
    }
    std::swap(frontier, next);
  }

  // Co-bearers of the target's word features.
  auto& labeled = scratch.labeled;
  auto& unlabeled = scratch.unlabeled;
  for (FeatureId f : graph.word_features_of(target)) {
    for (UnitId b : graph.bearers(f)) {
      if (!scratch.mark(b, 1)) continue;
      (graph.variable(b).labeled() ? labeled : unlabeled).push_back(b);
    }
  }
  std::sort(labeled.begin(), labeled.end());
  std::sort(unlabeled.begin(), unlabeled.end());
  if (labeled.size() + unlabeled.size() > options.cap) {
    Rng rng(mix_seed(options.seed, target));
    auto sample = [&rng](std::vector<UnitId>& pool, std::size_t keep) {
      for (std::size_t i = 0; i < keep; ++i) {
        std::size_t j = i + rng.below(pool.size() - i);
        std::swap(pool[i], pool[j]);
      }
      pool.resize(keep);
      std::sort(pool.begin(), pool.end());
    };
    if (labeled.size() >= options.cap) {
      sample(labeled, options.cap);
      unlabeled.clear();
    } else {
      sample(unlabeled, options.cap - labeled.size());
    }
  }
  members.insert(members.end(), labeled.begin(), labeled.end());
  members.insert(members.end(), unlabeled.begin(), unlabeled.end());

  // Final local indices; dropped co-bearers are unmarked.
  for (UnitId u : scratch.touched_units) scratch.unit_local[u] = kAbsent;
  Subgraph sub;
  std::size_t word_factor_count = 0;
  for (UnitId u : members) word_factor_count += graph.word_features_of(u).size();
  sub.reserve(members.size(), word_factor_count,
              std::min(word_factor_count, graph.features().size()));
  for (UnitId u : members) {
    scratch.unit_local[u] = sub.add_variable(u, graph.variable(u).value);
  }
  sub.set_target(0);

  for (UnitId u : members) {
    for (FeatureId f : graph.word_features_of(u)) {
      Subgraph::Index& w = scratch.feature_local[f];
      if (w == kAbsent) {
        w = sub.add_word_weight(f, graph.word_weight(f));
        scratch.touched_features.push_back(f);
      }
      sub.add_word_factor(scratch.unit_local[u], w);
    }
  }
  for (UnitId u : members) {
    for (std::size_t ri : graph.relations_of(u)) {
      const auto& r = graph.relation(ri);
      if (r.a != u) continue;  // add each relation once, from its lower endpoint
      Subgraph::Index other = scratch.unit_local[r.b];
      if (other == kAbsent) continue;
      sub.add_relation_factor(scratch.unit_local[u], other, r.kind);
    }
  }
  sub.set_relation_weight(RelationKind::kSimilar,
                          graph.relation_weight(RelationKind::kSimilar));
  sub.set_relation_weight(RelationKind::kOpposite,
                          graph.relation_weight(RelationKind::kOpposite));
  return sub;
}

void write_back_weights(const Subgraph& sub, FactorGraph& graph) {
  auto weights = sub.word_weights();
  auto features = sub.word_weight_features();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    graph.set_word_weight(features[i], weights[i]);
  }
  for (RelationKind k : {RelationKind::kSimilar, RelationKind::kOpposite}) {
    if (sub.has_relation_kind(k)) {
      graph.set_relation_weight(k, sub.relation_weight(k));
    }
  }
}

}  // namespace gml
