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

#include "gml/inference.h"

#include <cmath>

#include <gtest/gtest.h>

#include "gml/errors.h"
#include "gml/numeric.h"
#include "test_util.h"

namespace gml {
namespace {

using Index = Subgraph::Index;
const double kE2 = std::exp(2.0) / (1.0 + std::exp(2.0));

TEST(Entropy, Anchors) {
  EXPECT_NEAR(entropy(0.5), std::log(2.0), 1e-15);
  EXPECT_NEAR(entropy(0.8808), 0.3653, 1e-4);
  EXPECT_EQ(entropy(0.0), 0.0);
  EXPECT_EQ(entropy(1.0), 0.0);
  EXPECT_THROW(entropy(-0.1), std::domain_error);
  EXPECT_THROW(entropy(1.5), std::domain_error);
  EXPECT_THROW(entropy(std::nan("")), std::domain_error);
}

TEST(Entropy, SymmetricAndMaximalAtHalf) {
  testing::Gen gen(1);
  for (int i = 0; i < 1000; ++i) {
    double p = gen.uniform(0, 1);
    EXPECT_NEAR(entropy(p), entropy(1 - p), 1e-12);
    EXPECT_LE(entropy(p), std::log(2.0) + 1e-15);
  }
}

TEST(Sigmoid, StableAtExtremes) {
  EXPECT_EQ(sigmoid(-1000), 0.0);
  EXPECT_EQ(sigmoid(1000), 1.0);
  EXPECT_NEAR(sigmoid(2.0), kE2, 1e-15);
}

Subgraph single_word_factor(double w) {
  Subgraph sub;
  Index t = sub.add_variable(0, std::nullopt);
  sub.add_word_factor(t, sub.add_word_weight(0, w));
  sub.set_target(t);
  return sub;
}

TEST(ExactMarginal, SingleWordFactor) {
  EXPECT_NEAR(exact_marginal(single_word_factor(2.0)), kE2, 1e-12);
  EXPECT_NEAR(exact_marginal(single_word_factor(-1.0)), sigmoid(-1.0), 1e-12);
}

TEST(ExactMarginal, EvidenceTargetIsItsValue) {
  Subgraph sub;
  sub.add_variable(0, Polarity::kNegative);
  EXPECT_EQ(exact_marginal(sub), 0.0);
}

TEST(ExactMarginal, RefusesLargeGraphs) {
  Subgraph sub;
  for (UnitId u = 0; u < 6; ++u) sub.add_variable(u, std::nullopt);
  EXPECT_THROW(exact_marginal(sub, 5), std::length_error);
  EXPECT_NO_THROW(exact_marginal(sub, 6));
}

TEST(InferMarginal, SingleWordFactorIsClosedForm) {
  InferenceConfig cfg;
  MarginalResult r = infer_marginal(single_word_factor(2.0), cfg);
  EXPECT_NEAR(r.probability, kE2, 0.02);
  EXPECT_NEAR(r.entropy, entropy(r.probability), 1e-15);
}

TEST(InferMarginal, SimilarToPositiveEvidence) {
  Subgraph sub;
  Index t = sub.add_variable(0, std::nullopt);
  Index e = sub.add_variable(1, Polarity::kPositive);
  sub.add_relation_factor(t, e, RelationKind::kSimilar);
  sub.set_relation_weight(RelationKind::kSimilar, 2.0);
  sub.set_target(t);
  EXPECT_NEAR(exact_marginal(sub), kE2, 1e-12);
  EXPECT_NEAR(infer_marginal(sub, InferenceConfig{}).probability, kE2, 0.02);
}

TEST(InferMarginal, OppositeToNegativeEvidenceThroughFreeMiddle) {
  // t -similar- m -opposite- e(neg): t should lean positive.
  Subgraph sub;
  Index t = sub.add_variable(0, std::nullopt);
  Index m = sub.add_variable(1, std::nullopt);
  Index e = sub.add_variable(2, Polarity::kNegative);
  sub.add_relation_factor(t, m, RelationKind::kSimilar);
  sub.add_relation_factor(m, e, RelationKind::kOpposite);
  sub.set_relation_weight(RelationKind::kSimilar, 2.0);
  sub.set_relation_weight(RelationKind::kOpposite, -2.0);
  sub.set_target(t);
  double exact = exact_marginal(sub);
  EXPECT_GT(exact, 0.7);
  EXPECT_NEAR(infer_marginal(sub, InferenceConfig{}).probability, exact, 0.02);
}

TEST(InferMarginal, EvidenceTarget) {
  Subgraph sub;
  sub.add_variable(0, Polarity::kPositive);
  MarginalResult r = infer_marginal(sub, InferenceConfig{});
  EXPECT_EQ(r.probability, 1.0);
  EXPECT_EQ(r.entropy, 0.0);
}

TEST(InferMarginal, ReportsSubgraphWeights) {
  Subgraph sub = single_word_factor(1.5);
  sub.set_relation_weight(RelationKind::kOpposite, -4.0);
  MarginalResult r = infer_marginal(sub, InferenceConfig{});
  EXPECT_EQ(r.word_weights, (std::vector<double>{1.5}));
  EXPECT_EQ(r.relation_weights[1], -4.0);
}

// Random graph with up to `max_free` free variables, weights in [-3, 3].
Subgraph random_subgraph(testing::Gen& gen, std::size_t max_free) {
  Subgraph sub;
  const std::size_t free = 1 + gen.below(max_free);
  const std::size_t evidence = gen.below(5);
  for (std::size_t v = 0; v < free; ++v) sub.add_variable(static_cast<UnitId>(v), std::nullopt);
  for (std::size_t v = 0; v < evidence; ++v) {
    sub.add_variable(static_cast<UnitId>(free + v),
                     gen.coin() ? Polarity::kPositive : Polarity::kNegative);
  }
  const std::size_t n = free + evidence;
  const std::size_t weights = 1 + gen.below(4);
  for (std::size_t w = 0; w < weights; ++w) {
    sub.add_word_weight(static_cast<FeatureId>(w), gen.uniform(-3, 3));
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = 0; w < weights; ++w) {
      if (gen.coin(0.4)) sub.add_word_factor(static_cast<Index>(v), static_cast<Index>(w));
    }
  }
  const std::size_t edges = gen.below(2 * n);
  for (std::size_t i = 0; i < edges; ++i) {
    auto a = static_cast<Index>(gen.below(n));
    auto b = static_cast<Index>(gen.below(n));
    if (a == b) continue;
    sub.add_relation_factor(a, b, gen.coin() ? RelationKind::kSimilar
                                             : RelationKind::kOpposite);
  }
  sub.set_relation_weight(RelationKind::kSimilar, gen.uniform(0, 3));
  sub.set_relation_weight(RelationKind::kOpposite, gen.uniform(-3, 0));
  sub.set_target(0);
  return sub;
}

TEST(InferMarginal, AgreesWithEnumerationOnSmallGraphs) {
  testing::Gen gen(2024);
  int close = 0;
  const int cases = 40;
  for (int i = 0; i < cases; ++i) {
    Subgraph sub = random_subgraph(gen, 8);
    InferenceConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(i);
    double gibbs = infer_marginal(sub, cfg).probability;
    double exact = exact_marginal(sub);
    if (std::abs(gibbs - exact) <= 0.02) ++close;
    EXPECT_LE(std::abs(gibbs - exact), 0.1) << "case " << i;
  }
  EXPECT_GE(close, cases * 9 / 10);
}

TEST(InferMarginal, DeterministicForSeed) {
  testing::Gen gen(3);
  Subgraph sub = random_subgraph(gen, 6);
  InferenceConfig cfg;
  cfg.seed = 99;
  EXPECT_EQ(infer_marginal(sub, cfg).probability, infer_marginal(sub, cfg).probability);
}

TEST(InferenceConfig, Validation) {
  InferenceConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.sample_sweeps = 0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = {};
  cfg.weight_clamp = 0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = {};
  cfg.l2 = -1;
  EXPECT_THROW(cfg.validate(), InputError);
}

// Target plus `pos` positive and `neg` negative evidence bearers of one
// feature.
Subgraph shared_feature(int pos, int neg) {
  Subgraph sub;
  Index t = sub.add_variable(0, std::nullopt);
  Index w = sub.add_word_weight(0, 0.0);
  sub.add_word_factor(t, w);
  UnitId u = 1;
  for (int i = 0; i < pos; ++i) sub.add_word_factor(sub.add_variable(u++, Polarity::kPositive), w);
  for (int i = 0; i < neg; ++i) sub.add_word_factor(sub.add_variable(u++, Polarity::kNegative), w);
  sub.set_target(t);
  return sub;
}

TEST(LearnWeights, PositiveEvidenceRaisesWeight) {
  Subgraph sub = shared_feature(10, 0);
  learn_weights(sub, InferenceConfig{});
  EXPECT_GT(sub.word_weights()[0], 0.0);
  Subgraph neg = shared_feature(0, 10);
  learn_weights(neg, InferenceConfig{});
  EXPECT_LT(neg.word_weights()[0], 0.0);
}

TEST(LearnWeights, SymmetricEvidenceKeepsWeightNearZero) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Subgraph sub = shared_feature(6, 6);
    InferenceConfig cfg;
    cfg.seed = seed;
    learn_weights(sub, cfg);
    EXPECT_LT(std::abs(sub.word_weights()[0]), 0.1) << seed;
  }
}

TEST(LearnWeights, MatchesExactGradientStepOnIsolatedEvidence) {
  // With no relational factors every conditional is exact, so one epoch is
  // a deterministic gradient step: w += eta * (sum_y (y - s(w)) - l2 w).
  Subgraph sub = shared_feature(3, 1);
  InferenceConfig cfg;
  cfg.learning_epochs = 1;
  learn_weights(sub, cfg);
  double expected = cfg.step_size * (3 * (1 - 0.5) + 1 * (0 - 0.5));
  EXPECT_NEAR(sub.word_weights()[0], expected, 1e-15);
}

TEST(LearnWeights, AgreementRaisesSimilarWeight) {
  Subgraph sub;
  for (UnitId u = 0; u < 20; ++u) {
    sub.add_variable(u, u % 2 ? Polarity::kPositive : Polarity::kNegative);
  }
  sub.add_variable(20, std::nullopt);
  for (Index v = 0; v + 2 < 20; v += 2) {
    sub.add_relation_factor(v, v + 2, RelationKind::kSimilar);
    sub.add_relation_factor(v + 1, v + 3, RelationKind::kSimilar);
  }
  sub.add_relation_factor(20, 0, RelationKind::kSimilar);
  sub.set_relation_weight(RelationKind::kSimilar, 0.5);
  sub.set_target(20);
  learn_weights(sub, InferenceConfig{});
  EXPECT_GT(sub.relation_weight(RelationKind::kSimilar), 0.5);
}

TEST(LearnWeights, SignConstraintsAndClampHold) {
  testing::Gen gen(77);
  for (int i = 0; i < 100; ++i) {
    Subgraph sub = random_subgraph(gen, 8);
    InferenceConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(i);
    cfg.step_size = gen.uniform(0.01, 5.0);
    cfg.weight_clamp = gen.uniform(0.5, 10.0);
    learn_weights(sub, cfg);
    // Kinds without factors in the subgraph keep their weight.
    if (sub.has_relation_kind(RelationKind::kSimilar)) {
      EXPECT_GE(sub.relation_weight(RelationKind::kSimilar), 0.0);
      EXPECT_LE(sub.relation_weight(RelationKind::kSimilar), cfg.weight_clamp);
    }
    if (sub.has_relation_kind(RelationKind::kOpposite)) {
      EXPECT_LE(sub.relation_weight(RelationKind::kOpposite), 0.0);
      EXPECT_GE(sub.relation_weight(RelationKind::kOpposite), -cfg.weight_clamp);
    }
    for (double w : sub.word_weights()) {
      EXPECT_LE(std::abs(w), cfg.weight_clamp + 1e-12);
    }
  }
}

TEST(LearnWeights, DeterministicForSeed) {
  testing::Gen gen(8);
  Subgraph a = random_subgraph(gen, 8);
  Subgraph b = a;
  InferenceConfig cfg;
  cfg.seed = 5;
  learn_weights(a, cfg);
  learn_weights(b, cfg);
  EXPECT_TRUE(std::equal(a.word_weights().begin(), a.word_weights().end(),
                         b.word_weights().begin()));
  EXPECT_EQ(a.relation_weight(RelationKind::kSimilar),
            b.relation_weight(RelationKind::kSimilar));
}

TEST(LearnWeights, EmptySubgraphIsNoOp) {
  Subgraph sub;
  sub.add_variable(0, std::nullopt);
  sub.set_relation_weight(RelationKind::kSimilar, 2.0);
  learn_weights(sub, InferenceConfig{});
  EXPECT_EQ(sub.relation_weight(RelationKind::kSimilar), 2.0);
}

}  // namespace
}  // namespace gml
