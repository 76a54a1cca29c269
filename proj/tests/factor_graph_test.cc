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
#include <set>

#include <gtest/gtest.h>

#include "gml/engine.h"
#include "gml/errors.h"
#include "test_util.h"

namespace gml {
namespace {

TEST(Potentials, WordFactor) {
  EXPECT_NEAR(word_potential(2.0, 1), 7.38905609893065, 1e-12);
  for (double w : {-3.0, 0.0, 1.5, 9.0}) EXPECT_EQ(word_potential(w, 0), 1.0);
}

TEST(Potentials, RelationalFactor) {
  EXPECT_NEAR(relational_potential(-2.0, 1, 1), 0.1353352832366127, 1e-12);
  EXPECT_NEAR(relational_potential(-2.0, 0, 0), 0.1353352832366127, 1e-12);
  EXPECT_EQ(relational_potential(-2.0, 0, 1), 1.0);
  EXPECT_NEAR(relational_potential(2.0, 1, 1), std::exp(2.0), 1e-12);
}

// Units 0..n-1; feature f is borne by the units listed in bearers[f];
// relations as (a, b, kind).
struct Toy {
  FeatureIndex index;
  FactorGraph graph;

  Toy(std::size_t n, const std::vector<std::vector<UnitId>>& bearers,
      const std::vector<std::tuple<UnitId, UnitId, RelationKind>>& rels,
      const std::map<UnitId, Polarity>& evidence) {
    std::vector<std::vector<FeatureId>> unit_features(n);
    for (std::size_t f = 0; f < bearers.size(); ++f) {
      FeatureId id = index.intern({"f" + std::to_string(f)}, false);
      for (UnitId u : bearers[f]) {
        index.add_bearer(id, u);
        unit_features[u].push_back(id);
      }
    }
    std::vector<RelationalFeature> relations;
    for (auto [a, b, kind] : rels) {
      RelationalFeature r;
      r.id = static_cast<FeatureId>(relations.size());
      r.a = a;
      r.b = b;
      r.kind = kind;
      relations.push_back(r);
    }
    EvidenceSet ev;
    ev.labels = evidence;
    graph = build_graph(n, ev, index, std::move(unit_features), std::move(relations));
  }
};

std::set<UnitId> units_of(const Subgraph& sub) {
  std::set<UnitId> out;
  for (Subgraph::Index v = 0; v < sub.variable_count(); ++v) out.insert(sub.unit(v));
  return out;
}

TEST(FactorGraph, RunningExampleShape) {
  Corpus corpus = testing::running_example();
  Resources res = testing::running_resources();
  GradualInference engine(corpus, res, EngineConfig{});
  const FactorGraph& g = engine.graph();
  EXPECT_EQ(g.variable_count(), 4u);
  EXPECT_EQ(g.unlabeled_count(), 1u);
  EXPECT_EQ(g.variable(1).kind, VariableKind::kInference);
  EXPECT_EQ(g.variable(0).kind, VariableKind::kEvidence);
  EXPECT_EQ(g.relations().size(), 2u);
  EXPECT_EQ(g.relation_weight(RelationKind::kSimilar), 2.0);
  EXPECT_EQ(g.relation_weight(RelationKind::kOpposite), -2.0);
  for (double w : g.word_weights()) EXPECT_EQ(w, 0.0);
}

TEST(FactorGraph, LabelOnce) {
  Toy t(2, {{0, 1}}, {}, {{0, Polarity::kPositive}});
  EXPECT_EQ(t.graph.unlabeled_count(), 1u);
  t.graph.label(1, Polarity::kNegative, 0.2, 0, LabelMethod::kInferred);
  EXPECT_EQ(t.graph.unlabeled_count(), 0u);
  EXPECT_EQ(t.graph.variable(1).labeled_at, 0u);
  EXPECT_THROW(t.graph.label(1, Polarity::kPositive, 0.9, 1, LabelMethod::kInferred),
               std::logic_error);
  EXPECT_THROW(t.graph.label(0, Polarity::kPositive, 0.9, 1, LabelMethod::kInferred),
               std::logic_error);
  auto labels = t.graph.label_map();
  EXPECT_EQ(labels[1], Polarity::kNegative);
}

TEST(FactorGraph, RejectsInconsistentInputs) {
  FeatureIndex index;
  FeatureId f = index.intern({"x"}, false);
  index.add_bearer(f, 0);
  EXPECT_THROW(build_graph(2, {}, index, {{}, {f}}, {}), ConsistencyError);
  EXPECT_THROW(build_graph(2, {}, index, {{f}}, {}), ConsistencyError);
  RelationalFeature self;
  self.a = self.b = 1;
  EXPECT_THROW(build_graph(2, {}, index, {{f}, {}}, {self}), ConsistencyError);
  EvidenceSet ev;
  ev.labels[7] = Polarity::kPositive;
  EXPECT_THROW(build_graph(2, ev, index, {{f}, {}}, {}), ConsistencyError);
}

TEST(Subgraph, TwoHopRelationalNeighbourhood) {
  using K = RelationKind;
  Toy t(6, {}, {{0, 1, K::kSimilar}, {1, 2, K::kOpposite}, {2, 3, K::kSimilar},
                {4, 5, K::kSimilar}},
        {});
  Subgraph sub = extract_subgraph(t.graph, 0);
  EXPECT_EQ(units_of(sub), (std::set<UnitId>{0, 1, 2}));
  EXPECT_EQ(sub.unit(sub.target()), 0u);
  EXPECT_EQ(sub.relation_factors().size(), 2u);

  SubgraphOptions one;
  one.hops = 1;
  EXPECT_EQ(units_of(extract_subgraph(t.graph, 0, one)), (std::set<UnitId>{0, 1}));
  SubgraphOptions three;
  three.hops = 3;
  EXPECT_EQ(units_of(extract_subgraph(t.graph, 0, three)),
            (std::set<UnitId>{0, 1, 2, 3}));
}

TEST(Subgraph, CoBearersJoinWithTheirFactors) {
  Toy t(5, {{0, 2, 3}, {3, 4}}, {}, {{2, Polarity::kPositive}});
  Subgraph sub = extract_subgraph(t.graph, 0);
  EXPECT_EQ(units_of(sub), (std::set<UnitId>{0, 2, 3}));
  // Unit 3's second feature comes along since its factor lies inside.
  EXPECT_EQ(sub.word_factors().size(), 4u);
  EXPECT_EQ(sub.word_weights().size(), 2u);
  auto v2 = sub.local_index(2);
  ASSERT_TRUE(v2);
  EXPECT_EQ(sub.evidence(*v2), 1);
  EXPECT_TRUE(sub.is_free(sub.target()));
  EXPECT_EQ(sub.evidence_count(), 1u);
  EXPECT_FALSE(sub.local_index(1));
}

TEST(Subgraph, FactorScopesStayInside) {
  testing::Gen gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 40;
    std::vector<std::vector<UnitId>> bearers(10);
    for (auto& b : bearers) {
      for (UnitId u = 0; u < n; ++u) {
        if (gen.coin(0.1)) b.push_back(u);
      }
    }
    std::vector<std::tuple<UnitId, UnitId, RelationKind>> rels;
    for (int i = 0; i < 30; ++i) {
      UnitId a = static_cast<UnitId>(gen.below(n)), b = static_cast<UnitId>(gen.below(n));
      if (a == b) continue;
      rels.emplace_back(std::min(a, b), std::max(a, b),
                        gen.coin() ? RelationKind::kSimilar : RelationKind::kOpposite);
    }
    std::map<UnitId, Polarity> ev;
    for (UnitId u = 0; u < n; ++u) {
      if (gen.coin(0.4)) ev[u] = gen.coin() ? Polarity::kPositive : Polarity::kNegative;
    }
    Toy t(n, bearers, rels, ev);
    UnitId target = static_cast<UnitId>(gen.below(n));
    Subgraph sub = extract_subgraph(t.graph, target);
    auto members = units_of(sub);
    EXPECT_EQ(members.size(), sub.variable_count());
    EXPECT_TRUE(members.count(target));
    for (const auto& f : sub.word_factors()) {
      ASSERT_LT(f.var, sub.variable_count());
      FeatureId g = sub.word_weight_features()[f.weight];
      auto fs = t.graph.word_features_of(sub.unit(f.var));
      EXPECT_TRUE(std::find(fs.begin(), fs.end(), g) != fs.end());
    }
    // Every global relation between members appears exactly once.
    std::size_t inside = 0;
    for (const auto& r : t.graph.relations()) {
      if (members.count(r.a) && members.count(r.b)) ++inside;
    }
    EXPECT_EQ(sub.relation_factors().size(), inside);
    for (Subgraph::Index v = 0; v < sub.variable_count(); ++v) {
      const auto& var = t.graph.variable(sub.unit(v));
      EXPECT_EQ(sub.is_free(v), !var.labeled());
      EXPECT_EQ(sub.word_factors_of(v).size(),
                t.graph.word_features_of(sub.unit(v)).size());
    }
  }
}

TEST(Subgraph, CapKeepsLabeledFirstThenSamplesUnlabeled) {
  std::vector<UnitId> all;
  for (UnitId u = 0; u < 20; ++u) all.push_back(u);
  std::map<UnitId, Polarity> ev;
  for (UnitId u = 1; u <= 5; ++u) ev[u] = Polarity::kPositive;
  Toy t(20, {all}, {}, ev);

  SubgraphOptions opts;
  opts.cap = 8;
  Subgraph sub = extract_subgraph(t.graph, 0, opts);
  auto members = units_of(sub);
  EXPECT_EQ(members.size(), 1u + 8u);
  for (UnitId u = 1; u <= 5; ++u) EXPECT_TRUE(members.count(u)) << u;

  opts.cap = 3;
  members = units_of(extract_subgraph(t.graph, 0, opts));
  EXPECT_EQ(members.size(), 1u + 3u);
  for (UnitId u : members) EXPECT_TRUE(u == 0 || ev.count(u)) << u;
}

TEST(Subgraph, SamplingIsSeeded) {
  std::vector<UnitId> all;
  for (UnitId u = 0; u < 200; ++u) all.push_back(u);
  Toy t(200, {all}, {}, {{7, Polarity::kNegative}});
  SubgraphOptions opts;
  opts.cap = 10;
  opts.seed = 4;
  auto a = units_of(extract_subgraph(t.graph, 0, opts));
  auto b = units_of(extract_subgraph(t.graph, 0, opts));
  EXPECT_EQ(a, b);
  bool differs = false;
  for (std::uint64_t s = 5; s < 10 && !differs; ++s) {
    opts.seed = s;
    differs = units_of(extract_subgraph(t.graph, 0, opts)) != a;
  }
  EXPECT_TRUE(differs);
}

TEST(Subgraph, ConditionalLogitMatchesScoreDifference) {
  testing::Gen gen(17);
  for (int trial = 0; trial < 100; ++trial) {
    Subgraph sub;
    const std::size_t n = 2 + gen.below(6);
    for (std::size_t v = 0; v < n; ++v) {
      std::optional<Polarity> ev;
      if (v > 0 && gen.coin(0.3)) ev = gen.coin() ? Polarity::kPositive : Polarity::kNegative;
      sub.add_variable(static_cast<UnitId>(v), ev);
    }
    for (int w = 0; w < 3; ++w) sub.add_word_weight(w, gen.uniform(-3, 3));
    for (int i = 0; i < 6; ++i) {
      sub.add_word_factor(static_cast<Subgraph::Index>(gen.below(n)),
                          static_cast<Subgraph::Index>(gen.below(3)));
    }
    for (int i = 0; i < 4; ++i) {
      auto a = static_cast<Subgraph::Index>(gen.below(n));
      auto b = static_cast<Subgraph::Index>(gen.below(n));
      if (a != b) sub.add_relation_factor(a, b, gen.coin() ? RelationKind::kSimilar
                                                           : RelationKind::kOpposite);
    }
    sub.set_relation_weight(RelationKind::kSimilar, gen.uniform(0, 3));
    sub.set_relation_weight(RelationKind::kOpposite, gen.uniform(-3, 0));
    std::vector<std::uint8_t> x(n);
    for (auto& b : x) b = gen.coin() ? 1 : 0;
    for (Subgraph::Index v = 0; v < n; ++v) {
      auto one = x, zero = x;
      one[v] = 1;
      zero[v] = 0;
      EXPECT_NEAR(sub.conditional_logit(v, x), sub.log_score(one) - sub.log_score(zero),
                  1e-9);
    }
  }
}

TEST(Subgraph, RejectsDanglingFactors) {
  Subgraph sub;
  sub.add_variable(0, std::nullopt);
  EXPECT_THROW(sub.add_word_factor(0, 0), std::out_of_range);
  EXPECT_THROW(sub.add_relation_factor(0, 0, RelationKind::kSimilar), std::out_of_range);
  EXPECT_THROW(sub.add_relation_factor(0, 3, RelationKind::kSimilar), std::out_of_range);
}

TEST(Subgraph, WriteBackCopiesTouchedWeightsOnly) {
  Toy t(3, {{0, 1}, {2}}, {{0, 1, RelationKind::kSimilar}}, {});
  Subgraph sub = extract_subgraph(t.graph, 0);
  ASSERT_EQ(sub.word_weights().size(), 1u);
  sub.word_weights()[0] = 1.25;
  sub.set_relation_weight(RelationKind::kSimilar, 3.0);
  sub.set_relation_weight(RelationKind::kOpposite, -7.0);
  write_back_weights(sub, t.graph);
  EXPECT_EQ(t.graph.word_weight(0), 1.25);
  EXPECT_EQ(t.graph.word_weight(1), 0.0);
  EXPECT_EQ(t.graph.relation_weight(RelationKind::kSimilar), 3.0);
  // No opposite factor in the subgraph, so its weight is left alone.
  EXPECT_EQ(t.graph.relation_weight(RelationKind::kOpposite), -2.0);
}

}  // namespace
}  // namespace gml
