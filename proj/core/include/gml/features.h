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

#ifndef GML_FEATURES_H_
#define GML_FEATURES_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gml/corpus.h"
#include "gml/lexicon.h"

namespace gml {

// --- clauses ----------------------------------------------------------------

struct Clause {
  Range tokens;
  bool shift_before = false;  // boundary preceding this clause has a shift word
};

struct ClauseSegmentation {
  std::vector<Clause> clauses;
  std::vector<std::size_t> shift_positions;  // token index of each shift word
  bool leading_shift = false;  // a shift word opens the sentence

  bool has_shift_word() const { return !shift_positions.empty(); }
  bool has_inner_shift() const;
  std::optional<std::size_t> clause_of(std::size_t token) const;
  // True when a shift boundary lies between clause `a` and clause `b`.
  bool shift_between(std::size_t a, std::size_t b) const;
};

// Splits at , ; : . ! ? and at shift words. Boundary tokens belong to no
// clause; empty clauses are dropped.
ClauseSegmentation segment_clauses(std::span<const std::string> tokens,
                                   const ConnectiveLists& connectives);

// Per-sentence analysis shared by the easy labeler and feature extraction.
struct SentenceInfo {
  ClauseSegmentation segmentation;
  std::vector<SentimentHit> hits;
};
using SentenceTable = std::vector<std::vector<SentenceInfo>>;  // [review][sentence]

SentenceTable analyze_sentences(const Corpus& corpus, const Lexicon& lexicon,
                                const ConnectiveLists& connectives,
                                std::size_t negation_window);

// --- opinion spans ----------------------------------------------------------

enum class SpanAssociation : std::uint8_t {
  kExplicitTerm,
  kEmbeddingSimilarity,
  kWholeSentence
};
std::string_view to_string(SpanAssociation a);

struct OpinionSpan {
  UnitId unit = 0;
  Range tokens;
  std::optional<std::size_t> clause;  // nullopt for whole-sentence spans
  SpanAssociation association = SpanAssociation::kWholeSentence;
};

// Returns the token indices inside `clause` that may be opinion targets.
using OpinionTargetExtractor =
    std::function<std::vector<std::size_t>(std::span<const std::string>, Range)>;

// Default extractor: every word token that is not a function word.
std::vector<std::size_t> stoplist_opinion_targets(
    std::span<const std::string> tokens, Range clause);
bool is_function_word(std::string_view token);

inline constexpr double kDefaultSimThreshold = 0.5;

struct SpanOptions {
  double sim_threshold = kDefaultSimThreshold;
  const EmbeddingTable* embeddings = nullptr;
  OpinionTargetExtractor targets = stoplist_opinion_targets;
};

// ATSA: the clause holding the term. ACSA: the clause whose opinion targets or
// sentiment words are most similar to the category (at least sim_threshold).
// Falls back to the whole sentence.
OpinionSpan resolve_opinion_span(const Corpus& corpus, const AspectUnit& unit,
                                 const SentenceInfo& info,
                                 const SpanOptions& options);

std::vector<OpinionSpan> resolve_opinion_spans(
    const Corpus& corpus, std::span<const AspectUnit> units,
    const SentenceTable& table, const SpanOptions& options);

// --- word features ----------------------------------------------------------

using FeatureId = std::uint32_t;

struct WordFeature {
  FeatureId id = 0;
  std::vector<std::string> surface;
  bool negated = false;
  std::vector<UnitId> bearers;  // ascending

  std::string text() const;  // surface joined by spaces, "neg:" prefix if negated
};

// Global interner keyed by (surface, negated).
class FeatureIndex {
 public:
  FeatureId intern(const std::vector<std::string>& surface, bool negated);
  std::optional<FeatureId> find(const std::vector<std::string>& surface,
                                bool negated) const;
  void add_bearer(FeatureId f, UnitId unit);

  const WordFeature& feature(FeatureId f) const { return features_[f]; }
  std::size_t size() const { return features_.size(); }
  std::span<const WordFeature> features() const { return features_; }

 private:
  std::vector<WordFeature> features_;
  std::map<std::pair<std::vector<std::string>, bool>, FeatureId> ids_;
};

inline constexpr std::size_t kDefaultKgramMax = 3;

// Unigram feature per sentiment hit inside the span, plus every k-gram
// (2 <= k <= kgram_max) inside the span containing at least one hit. A k-gram
// takes the negation flag of the first hit it contains. Returns the unit's
// feature ids, ascending and unique.
std::vector<FeatureId> extract_word_features(
    UnitId unit, std::span<const std::string> tokens,
    std::span<const SentimentHit> hits, Range span, std::size_t kgram_max,
    FeatureIndex& index);

// --- relational features ----------------------------------------------------

enum class RelationKind : std::uint8_t { kSimilar = 0, kOpposite = 1 };
std::string_view to_string(RelationKind k);

struct RelationalFeature {
  FeatureId id = 0;
  RelationKind kind = RelationKind::kSimilar;
  int rule = 1;   // 1, 2 or 3
  UnitId a = 0;   // a < b
  UnitId b = 0;

  UnitId other(UnitId u) const { return u == a ? b : a; }
};

// Rule 3 (same sentence, spans split by an inner shift) > rule 2 (adjacent,
// second sentence opens with a shift word, no inner shifts) > rule 1 (same or
// adjacent sentences without any shift word).
std::vector<RelationalFeature> extract_relational_features(
    const Corpus& corpus, std::span<const AspectUnit> units,
    std::span<const OpinionSpan> spans, const SentenceTable& table);

// --- statistics -------------------------------------------------------------

// Labels known so far, indexed by unit id.
using LabelMap = std::vector<std::optional<Polarity>>;

// Laplace-smoothed label statistics over word features and relation kinds.
struct FeatureStats {
  std::vector<std::uint32_t> positives;  // per word feature
  std::vector<std::uint32_t> labeled;
  std::array<std::uint32_t, 2> relation_hits{};   // prediction held
  std::array<std::uint32_t, 2> relation_pairs{};  // both endpoints labeled

  double p(FeatureId f) const {
    return (positives[f] + 1.0) / (labeled[f] + 2.0);
  }
  std::size_t n(FeatureId f) const { return labeled[f]; }
  bool observed(FeatureId f) const { return labeled[f] > 0; }
  double r(RelationKind k) const {
    auto i = static_cast<std::size_t>(k);
    return (relation_hits[i] + 1.0) / (relation_pairs[i] + 2.0);
  }
};

bool relation_holds(RelationKind kind, Polarity x, Polarity y);

FeatureStats feature_statistics(const FeatureIndex& index,
                                std::span<const RelationalFeature> relations,
                                const LabelMap& labels);

// Folds one new label into `stats`. `labels` must not yet contain `unit`.
// Returns the relation kinds whose counts changed (every kind whose accuracy
// estimate changed is among them).
std::array<bool, 2> update_statistics(
    FeatureStats& stats, UnitId unit, Polarity label,
    std::span<const FeatureId> unit_features,
    std::span<const RelationalFeature> relations,
    std::span<const std::size_t> unit_relations, const LabelMap& labels);

}  // namespace gml

#endif  // GML_FEATURES_H_
