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

#ifndef GML_EASY_LABELER_H_
#define GML_EASY_LABELER_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gml/corpus.h"
#include "gml/features.h"
#include "gml/lexicon.h"

namespace gml {

enum class HardReason : std::uint8_t {
  kNoSentimentWord = 0,
  kConflictingPolarities = 1,
  kConnectivePresent = 2,
  kLongDistanceNegation = 3,
};
inline constexpr std::size_t kHardReasonCount = 4;
std::string_view to_string(HardReason r);

struct EasyDecision {
  UnitId unit = 0;
  std::optional<Polarity> polarity;  // set iff easy
  std::vector<HardReason> reasons;   // ascending; empty iff easy

  bool easy() const { return polarity.has_value(); }
  bool has(HardReason r) const;
};

// An aspect unit is easy when its clause has at least one sentiment hit, all
// hits share one effective polarity, no negation in the clause is long
// distance, and the sentence has no contrast, hypothetical or condition
// connective.
EasyDecision classify_easiness(UnitId unit, std::span<const std::string> tokens,
                               std::span<const SentimentHit> sentence_hits,
                               Range clause, const ConnectiveLists& connectives,
                               std::size_t negation_window = kDefaultNegationWindow);

// Convenience overload that computes the sentence's hits itself.
EasyDecision classify_easiness(UnitId unit, std::span<const std::string> tokens,
                               Range clause, const Lexicon& lexicon,
                               const ConnectiveLists& connectives,
                               std::size_t negation_window = kDefaultNegationWindow);

// Labels fixed by easy-instance labeling. Values never change afterwards.
struct EvidenceSet {
  static constexpr std::string_view kSource = "easy";
  std::map<UnitId, Polarity> labels;
};

struct EasyStats {
  std::size_t total = 0;
  std::size_t easy = 0;
  double proportion = 0.0;
  std::optional<double> accuracy;  // only when some easy unit has gold
  std::size_t gold_easy = 0;       // easy units with a gold label
  std::array<std::size_t, kHardReasonCount> reason_histogram{};
};

struct EasyLabeling {
  std::vector<EasyDecision> decisions;  // indexed by unit id
  EvidenceSet evidence;
  EasyStats stats;
};

// Classifies every unit on its opinion span. Does not require any easy unit.
EasyLabeling classify_all(const Corpus& corpus, std::span<const AspectUnit> units,
                          std::span<const OpinionSpan> spans,
                          const SentenceTable& table,
                          const ConnectiveLists& connectives,
                          std::size_t negation_window = kDefaultNegationWindow);

// As classify_all, but throws InputError when no unit is easy: gradual
// inference cannot start without evidence.
EasyLabeling label_easy_instances(
    const Corpus& corpus, std::span<const AspectUnit> units,
    std::span<const OpinionSpan> spans, const SentenceTable& table,
    const ConnectiveLists& connectives,
    std::size_t negation_window = kDefaultNegationWindow);

}  // namespace gml

#endif  // GML_EASY_LABELER_H_
