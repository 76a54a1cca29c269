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

#ifndef GML_EVIDENCE_H_
#define GML_EVIDENCE_H_

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "gml/corpus.h"
#include "gml/features.h"

namespace gml {

// Two-proposition frames. Support: {L, U} (labelable or not). Certainty:
// {L+, L-} (the label, if assigned, is positive or negative).
enum class Frame : std::uint8_t { kSupport, kCertainty };

struct Mass {
  Frame frame = Frame::kSupport;
  double a = 0.0;     // L or L+
  double b = 0.0;     // U or L-
  double both = 1.0;  // the whole frame
  double conflict = 0.0;  // accumulated over combinations, in [0, 1)

  static Mass vacuous(Frame f) { return Mass{f, 0.0, 0.0, 1.0, 0.0}; }
  double total() const { return a + b + both; }
  // H(a + both / 2).
  double pignistic_entropy() const;
};

// Throws std::domain_error unless p in (0, 1) and d in (0, 1].
Mass word_support_mass(double p, double d);
Mass relation_support_mass(double accuracy, double d);
Mass word_certainty_mass(double p, double d);
// P(f') = sigmoid(w) when the labeled endpoint is positive, else 1 - sigmoid(w).
Mass relation_certainty_mass(double weight, Polarity labeled_endpoint, double d);

// Dempster's rule. Throws std::invalid_argument for mixed frames and
// TotalConflictError when the focal elements are fully contradictory.
Mass combine(const Mass& m1, const Mass& m2);

struct UncertaintyParams {
  double d_f = 0.4;
  double d_fp = 0.1;
  double d_f_star = 0.4;
  double d_fp_star = 0.1;

  // Throws InputError unless each value is in (0, 1].
  void validate() const;
};

struct ObservedRelation {
  RelationKind kind = RelationKind::kSimilar;
  double accuracy = 0.5;  // R of the kind
  double weight = 0.0;    // current tied weight of the kind
  Polarity other = Polarity::kPositive;  // label of the other endpoint
};

// The observed features of one variable, in combination order: word
// features by ascending feature id, then relations by ascending index.
struct ObservedEvidence {
  std::vector<double> word_p;
  std::vector<ObservedRelation> relations;

  bool empty() const { return word_p.empty() && relations.empty(); }
};

ObservedEvidence observe(const FeatureStats& stats,
                         std::span<const FeatureId> unit_features,
                         std::span<const RelationalFeature> relations,
                         std::span<const std::size_t> unit_relations, UnitId unit,
                         const LabelMap& labels,
                         std::array<double, 2> relation_weights);

struct SupportResult {
  double score = 0.0;  // combined m(L)
  bool total_conflict = false;
  Mass mass = Mass::vacuous(Frame::kSupport);
};

SupportResult evidential_support(const ObservedEvidence& evidence,
                                 const UncertaintyParams& params);

// Combined certainty mass; vacuous when nothing is observed. Throws
// TotalConflictError.
Mass certainty_masses(const ObservedEvidence& evidence,
                      const UncertaintyParams& params);

struct RankKey {
  double conflict = 0.0;
  double pignistic_entropy = 0.0;
  UnitId unit = 0;

  auto operator<=>(const RankKey&) const = default;
};

RankKey conflict_rank_key(UnitId unit, const Mass& certainty);
// Key of a variable whose certainty masses totally conflict.
RankKey max_uncertainty_key(UnitId unit);

}  // namespace gml

#endif  // GML_EVIDENCE_H_
