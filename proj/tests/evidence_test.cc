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

#include "gml/evidence.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "gml/errors.h"
#include "test_util.h"

namespace gml {
namespace {

// Dempster's rule by enumerating focal-set pairs. Sets are bitmasks over the
// two propositions: 1 = {a}, 2 = {b}, 3 = the frame.
Mass enumerate_combine(const Mass& m1, const Mass& m2) {
  const double w1[4] = {0, m1.a, m1.b, m1.both};
  const double w2[4] = {0, m2.a, m2.b, m2.both};
  double joint[4] = {0, 0, 0, 0};
  for (int s = 1; s < 4; ++s) {
    for (int t = 1; t < 4; ++t) joint[s & t] += w1[s] * w2[t];
  }
  const double norm = 1.0 - joint[0];
  Mass out;
  out.frame = m1.frame;
  out.a = joint[1] / norm;
  out.b = joint[2] / norm;
  out.both = joint[3] / norm;
  out.conflict = 1.0 - (1.0 - m1.conflict) * (1.0 - m2.conflict) * norm;
  return out;
}

Mass random_mass(testing::Gen& gen, Frame frame = Frame::kSupport) {
  double x = gen.uniform(0.01, 0.99);
  double d = gen.uniform(0.01, 1.0);
  return Mass{frame, (1 - d) * x, (1 - d) * (1 - x), d, 0.0};
}

void expect_mass_near(const Mass& m, const Mass& e, double tol) {
  EXPECT_NEAR(m.a, e.a, tol);
  EXPECT_NEAR(m.b, e.b, tol);
  EXPECT_NEAR(m.both, e.both, tol);
  EXPECT_NEAR(m.conflict, e.conflict, tol);
}

TEST(Masses, WordSupport) {
  Mass m = word_support_mass(0.9, 0.4);
  EXPECT_NEAR(m.a, 0.54, 1e-12);
  EXPECT_NEAR(m.b, 0.06, 1e-12);
  EXPECT_NEAR(m.both, 0.40, 1e-12);
  EXPECT_EQ(m.frame, Frame::kSupport);
  // Polarity-symmetric: a negative feature is just as labelable.
  expect_mass_near(word_support_mass(0.1, 0.4), m, 1e-12);
}

TEST(Masses, RelationSupport) {
  Mass m = relation_support_mass(0.9, 0.1);
  EXPECT_NEAR(m.a, 0.81, 1e-12);
  EXPECT_NEAR(m.b, 0.09, 1e-12);
  EXPECT_NEAR(m.both, 0.10, 1e-12);
}

TEST(Masses, Certainty) {
  Mass w = word_certainty_mass(0.2, 0.4);
  EXPECT_NEAR(w.a, 0.12, 1e-12);
  EXPECT_NEAR(w.b, 0.48, 1e-12);
  EXPECT_EQ(w.frame, Frame::kCertainty);

  Mass r = relation_certainty_mass(2.0, Polarity::kPositive, 0.1);
  EXPECT_NEAR(r.a, 0.7927, 1e-4);
  EXPECT_NEAR(r.b, 0.1073, 1e-4);
  EXPECT_NEAR(r.both, 0.1, 1e-12);
  Mass flipped = relation_certainty_mass(2.0, Polarity::kNegative, 0.1);
  EXPECT_NEAR(flipped.a, r.b, 1e-12);
  EXPECT_NEAR(flipped.b, r.a, 1e-12);
  // An opposite relation to a negative label points positive.
  EXPECT_NEAR(relation_certainty_mass(-2.0, Polarity::kNegative, 0.1).a, r.a, 1e-12);
}

TEST(Masses, DomainErrors) {
  EXPECT_THROW(word_support_mass(0.0, 0.4), std::domain_error);
  EXPECT_THROW(word_support_mass(1.0, 0.4), std::domain_error);
  EXPECT_THROW(word_support_mass(0.5, 0.0), std::domain_error);
  EXPECT_THROW(word_support_mass(0.5, 1.5), std::domain_error);
  EXPECT_THROW(relation_support_mass(std::nan(""), 0.1), std::domain_error);
  EXPECT_THROW(relation_certainty_mass(1.0, Polarity::kPositive, 0.0),
               std::domain_error);
  EXPECT_NO_THROW(word_support_mass(0.5, 1.0));
}

TEST(Combine, WorkedExample) {
  Mass m = combine(word_support_mass(0.9, 0.4), relation_support_mass(0.9, 0.1));
  EXPECT_NEAR(m.conflict, 0.0972, 1e-12);
  EXPECT_NEAR(m.a, 0.9032, 1e-4);
  EXPECT_NEAR(m.b, 0.0525, 1e-4);
  EXPECT_NEAR(m.both, 0.0443, 1e-4);
  expect_mass_near(m, enumerate_combine(word_support_mass(0.9, 0.4),
                                        relation_support_mass(0.9, 0.1)),
                   1e-12);
}

TEST(Combine, MatchesEnumeration) {
  testing::Gen gen(5);
  for (int i = 0; i < 1000; ++i) {
    Mass m1 = random_mass(gen), m2 = random_mass(gen);
    expect_mass_near(combine(m1, m2), enumerate_combine(m1, m2), 1e-12);
  }
}

TEST(Combine, NormalizedAndCommutative) {
  testing::Gen gen(6);
  for (int i = 0; i < 1000; ++i) {
    Mass m1 = random_mass(gen), m2 = random_mass(gen);
    Mass ab = combine(m1, m2), ba = combine(m2, m1);
    EXPECT_NEAR(ab.total(), 1.0, 1e-12);
    EXPECT_GE(ab.a, 0.0);
    EXPECT_GE(ab.b, 0.0);
    EXPECT_GE(ab.both, 0.0);
    EXPECT_GE(ab.conflict, 0.0);
    EXPECT_LT(ab.conflict, 1.0);
    expect_mass_near(ab, ba, 1e-15);
  }
}

TEST(Combine, Associative) {
  testing::Gen gen(7);
  for (int i = 0; i < 1000; ++i) {
    Mass x = random_mass(gen), y = random_mass(gen), z = random_mass(gen);
    expect_mass_near(combine(combine(x, y), z), combine(x, combine(y, z)), 1e-9);
  }
}

TEST(Combine, VacuousIsIdentity) {
  testing::Gen gen(8);
  for (int i = 0; i < 100; ++i) {
    Mass m = random_mass(gen);
    Mass out = combine(Mass::vacuous(Frame::kSupport), m);
    EXPECT_EQ(out.a, m.a);
    EXPECT_EQ(out.b, m.b);
    EXPECT_EQ(out.both, m.both);
    EXPECT_EQ(out.conflict, 0.0);
  }
}

TEST(Combine, Errors) {
  EXPECT_THROW(combine(Mass::vacuous(Frame::kSupport), Mass::vacuous(Frame::kCertainty)),
               std::invalid_argument);
  Mass yes{Frame::kCertainty, 1.0, 0.0, 0.0, 0.0};
  Mass no{Frame::kCertainty, 0.0, 1.0, 0.0, 0.0};
  EXPECT_THROW(combine(yes, no), TotalConflictError);
}

TEST(Combine, OpposingCertaintiesConflict) {
  Mass m = combine(word_certainty_mass(0.9, 0.4), word_certainty_mass(0.1, 0.4));
  Mass agree = combine(word_certainty_mass(0.9, 0.4), word_certainty_mass(0.9, 0.4));
  EXPECT_GT(m.conflict, agree.conflict);
  EXPECT_NEAR(m.a, m.b, 1e-12);
}

TEST(Support, WordPlusRelation) {
  ObservedEvidence ev;
  ev.word_p = {0.9};
  ev.relations.push_back({RelationKind::kSimilar, 0.9, 2.0, Polarity::kPositive});
  SupportResult s = evidential_support(ev, UncertaintyParams{});
  EXPECT_NEAR(s.score, 0.9032, 1e-4);
  EXPECT_FALSE(s.total_conflict);
}

TEST(Support, NothingObservedIsZero) {
  SupportResult s = evidential_support(ObservedEvidence{}, UncertaintyParams{});
  EXPECT_EQ(s.score, 0.0);
}

TEST(Support, MoreEvidenceNeverLowersSupport) {
  testing::Gen gen(9);
  for (int i = 0; i < 200; ++i) {
    ObservedEvidence ev;
    double prev = 0.0;
    for (int j = 0; j < 6; ++j) {
      ev.word_p.push_back(gen.uniform(0.05, 0.95));
      double s = evidential_support(ev, UncertaintyParams{}).score;
      EXPECT_GE(s, prev - 1e-12);
      prev = s;
    }
  }
}

TEST(Certainty, CombinesWordsThenRelations) {
  ObservedEvidence ev;
  ev.word_p = {0.8};
  ev.relations.push_back({RelationKind::kOpposite, 0.7, -2.0, Polarity::kPositive});
  UncertaintyParams params;
  Mass expected = combine(combine(Mass::vacuous(Frame::kCertainty),
                                  word_certainty_mass(0.8, params.d_f_star)),
                          relation_certainty_mass(-2.0, Polarity::kPositive,
                                                  params.d_fp_star));
  expect_mass_near(certainty_masses(ev, params), expected, 1e-15);
  Mass none = certainty_masses(ObservedEvidence{}, params);
  EXPECT_EQ(none.both, 1.0);
}

TEST(UncertaintyParams, Validation) {
  UncertaintyParams p;
  EXPECT_NO_THROW(p.validate());
  p.d_fp = 0.0;
  EXPECT_THROW(p.validate(), InputError);
  p = {};
  p.d_f_star = 1.01;
  EXPECT_THROW(p.validate(), InputError);
}

TEST(RankKey, OrdersByConflictThenEntropyThenUnit) {
  Mass calm = word_certainty_mass(0.95, 0.4);
  Mass unsure = word_certainty_mass(0.55, 0.4);
  Mass torn = combine(word_certainty_mass(0.9, 0.4), word_certainty_mass(0.1, 0.4));
  std::vector<RankKey> keys = {max_uncertainty_key(0), conflict_rank_key(4, torn),
                               conflict_rank_key(3, unsure), conflict_rank_key(2, calm),
                               conflict_rank_key(1, calm)};
  std::sort(keys.begin(), keys.end());
  std::vector<UnitId> order;
  for (const auto& k : keys) order.push_back(k.unit);
  EXPECT_EQ(order, (std::vector<UnitId>{1, 2, 3, 4, 0}));
}

TEST(RankKey, PignisticEntropy) {
  EXPECT_NEAR(Mass::vacuous(Frame::kCertainty).pignistic_entropy(), std::log(2.0), 1e-15);
  Mass m{Frame::kCertainty, 0.6, 0.2, 0.2, 0.0};
  EXPECT_NEAR(m.pignistic_entropy(), entropy(0.7), 1e-15);
  EXPECT_EQ(max_uncertainty_key(7).conflict, 1.0);
}

}  // namespace
}  // namespace gml
