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

#include "gml/easy_labeler.h"

#include <algorithm>

#include "gml/errors.h"

namespace gml {

std::string_view to_string(HardReason r) {
  switch (r) {
    case HardReason::kNoSentimentWord:
      return "no_sentiment_word";
    case HardReason::kConflictingPolarities:
      return "conflicting_polarities";
    case HardReason::kConnectivePresent:
      return "connective_present";
    case HardReason::kLongDistanceNegation:
      return "long_distance_negation";
  }
  return "unknown";
}

bool EasyDecision::has(HardReason r) const {
  return std::find(reasons.begin(), reasons.end(), r) != reasons.end();
}

EasyDecision classify_easiness(UnitId unit, std::span<const std::string> tokens,
                               std::span<const SentimentHit> sentence_hits,
                               Range clause, const ConnectiveLists& connectives,
                               std::size_t negation_window) {
  clause.end = std::min(clause.end, tokens.size());
  std::vector<SentimentHit> hits;
  for (const auto& h : sentence_hits) {
    if (clause.contains(h.token_index)) hits.push_back(h);
  }

  EasyDecision d;
  d.unit = unit;
  if (hits.empty()) {
    d.reasons.push_back(HardReason::kNoSentimentWord);
  } else {
    Polarity first = hits.front().effective_polarity();
    bool conflict = std::any_of(hits.begin(), hits.end(), [&](const auto& h) {
      return h.effective_polarity() != first;
    });
    if (conflict) d.reasons.push_back(HardReason::kConflictingPolarities);
  }
  if (connectives.contrast.occurs_in(tokens) ||
      connectives.hypothetical.occurs_in(tokens) ||
      connectives.condition.occurs_in(tokens)) {
    d.reasons.push_back(HardReason::kConnectivePresent);
  }
  if (has_long_distance_negation(tokens, hits, connectives, negation_window,
                                 clause)) {
    d.reasons.push_back(HardReason::kLongDistanceNegation);
  }
  if (d.reasons.empty()) d.polarity = hits.front().effective_polarity();
  return d;
}

EasyDecision classify_easiness(UnitId unit, std::span<const std::string> tokens,
                               Range clause, const Lexicon& lexicon,
                               const ConnectiveLists& connectives,
                               std::size_t negation_window) {
  auto hits = find_sentiment_hits(tokens, lexicon, connectives, negation_window);
  return classify_easiness(unit, tokens, hits, clause, connectives,
                           negation_window);
}

EasyLabeling classify_all(const Corpus& corpus, std::span<const AspectUnit> units,
                          std::span<const OpinionSpan> spans,
                          const SentenceTable& table,
                          const ConnectiveLists& connectives,
                          std::size_t negation_window) {
  EasyLabeling out;
  out.decisions.reserve(units.size());
  std::size_t gold_correct = 0;
  for (const auto& unit : units) {
    const Sentence& sentence = corpus.sentence_of(unit);
    const SentenceInfo& info = table[unit.review][unit.sentence];
    EasyDecision d =
        classify_easiness(unit.unit_id, sentence.tokens, info.hits,
                          spans[unit.unit_id].tokens, connectives, negation_window);
    if (d.easy()) {
      out.evidence.labels.emplace(unit.unit_id, *d.polarity);
      ++out.stats.easy;
      if (auto gold = corpus.aspect_of(unit).gold) {
        ++out.stats.gold_easy;
        if (*gold == *d.polarity) ++gold_correct;
      }
    }
    for (HardReason r : d.reasons) {
      ++out.stats.reason_histogram[static_cast<std::size_t>(r)];
    }
    out.decisions.push_back(std::move(d));
  }
  out.stats.total = units.size();
  out.stats.proportion =
      units.empty() ? 0.0 : static_cast<double>(out.stats.easy) / units.size();
  if (out.stats.gold_easy > 0) {
    out.stats.accuracy =
        static_cast<double>(gold_correct) / static_cast<double>(out.stats.gold_easy);
  }
  return out;
}

EasyLabeling label_easy_instances(
    const Corpus& corpus, std::span<const AspectUnit> units,
    std::span<const OpinionSpan> spans, const SentenceTable& table,
    const ConnectiveLists& connectives, std::size_t negation_window) {
  EasyLabeling out =
      classify_all(corpus, units, spans, table, connectives, negation_window);
  if (!units.empty() && out.evidence.labels.empty()) {
    throw InputError(
        "no easy instances found among " + std::to_string(units.size()) +
        " aspect units; gradual inference needs at least one. Check that the "
        "lexicon covers the corpus vocabulary and that sentences are not all "
        "hedged by contrast/hypothetical/condition connectives.");
  }
  return out;
}

}  // namespace gml
