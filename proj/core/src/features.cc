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

#include "gml/features.h"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "gml/errors.h"

namespace gml {
namespace {

bool is_clause_delimiter(std::string_view token) {
  return token == "," || token == ";" || token == ":" || token == "." ||
         token == "!" || token == "?";
}

bool is_word_token(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u >= 0x80;
  });
}

const std::unordered_set<std::string_view>& function_words() {
  static const std::unordered_set<std::string_view> words{
      "a",     "an",    "the",    "this",  "that",   "these",  "those",
      "i",     "me",    "my",     "mine",  "you",    "your",   "he",
      "him",   "his",   "she",    "her",   "it",     "its",    "we",
      "us",    "our",   "they",   "them",  "their",  "is",     "are",
      "was",   "were",  "be",     "been",  "being",  "am",     "do",
      "does",  "did",   "have",   "has",   "had",    "can",    "could",
      "would", "should", "will",  "shall", "may",    "might",  "must",
      "to",    "of",    "in",     "on",    "at",     "for",    "with",
      "by",    "from",  "about",  "into",  "over",   "under",  "up",
      "down",  "out",   "and",    "or",    "so",     "as",     "than",
      "then",  "too",   "very",   "just",  "also",   "there",  "here",
      "what",  "which", "who",    "whom",  "whose",  "when",   "where",
      "why",   "how",   "all",    "any",   "some",   "each",   "every",
      "other", "such",  "only",   "own",   "same",   "again",  "really",
      "quite", "not",   "no",     "it's",  "i'm",    "i've",   "that's",
      "there's", "get", "got",    "one",   "much",   "many",   "more",
      "most",  "bit",   "little", "lot",   "still",  "even",   "ever"};
  return words;
}

std::vector<std::string> category_parts(std::string_view category) {
  std::vector<std::string> parts;
  for (auto& t : tokenize(category)) {
    // "laptop#battery_life" tokenizes with "_" and "#" as separate tokens.
    if (is_word_token(t.text)) parts.push_back(std::move(t.text));
  }
  return parts;
}

}  // namespace

// --- clauses ----------------------------------------------------------------

bool ClauseSegmentation::has_inner_shift() const {
  return shift_positions.size() > (leading_shift ? 1u : 0u);
}

std::optional<std::size_t> ClauseSegmentation::clause_of(
    std::size_t token) const {
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (clauses[i].tokens.contains(token)) return i;
  }
  return std::nullopt;
}

bool ClauseSegmentation::shift_between(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  for (std::size_t c = a + 1; c <= b && c < clauses.size(); ++c) {
    if (clauses[c].shift_before) return true;
  }
  return false;
}

ClauseSegmentation segment_clauses(std::span<const std::string> tokens,
                                   const ConnectiveLists& connectives) {
  ClauseSegmentation seg;
  std::size_t start = 0;
  bool pending_shift = false;
  bool seen_content = false;

  auto close = [&](std::size_t end) {
    if (end > start) {
      seg.clauses.push_back({Range{start, end}, pending_shift});
      pending_shift = false;
    }
  };

  for (std::size_t i = 0; i < tokens.size();) {
    if (std::size_t len = connectives.shift.match_at(tokens, i); len > 0) {
      close(i);
      seg.shift_positions.push_back(i);
      if (!seen_content) {
        seg.leading_shift = true;
      } else {
        pending_shift = true;
      }
      i += len;
      start = i;
      continue;
    }
    if (is_clause_delimiter(tokens[i])) {
      close(i);
      start = i + 1;
      ++i;
      continue;
    }
    seen_content = true;
    ++i;
  }
  close(tokens.size());
  return seg;
}

SentenceTable analyze_sentences(const Corpus& corpus, const Lexicon& lexicon,
                                const ConnectiveLists& connectives,
                                std::size_t negation_window) {
  SentenceTable table(corpus.reviews.size());
  for (std::size_t r = 0; r < corpus.reviews.size(); ++r) {
    for (const auto& sentence : corpus.reviews[r].sentences) {
      SentenceInfo info;
      info.segmentation = segment_clauses(sentence.tokens, connectives);
      info.hits = find_sentiment_hits(sentence.tokens, lexicon, connectives,
                                      negation_window);
      table[r].push_back(std::move(info));
    }
  }
  return table;
}

// --- opinion spans ----------------------------------------------------------

std::string_view to_string(SpanAssociation a) {
  switch (a) {
    case SpanAssociation::kExplicitTerm:
      return "explicit_term";
    case SpanAssociation::kEmbeddingSimilarity:
      return "embedding_similarity";
    case SpanAssociation::kWholeSentence:
      return "whole_sentence";
  }
  return "unknown";
}

bool is_function_word(std::string_view token) {
  return function_words().contains(token);
}

std::vector<std::size_t> stoplist_opinion_targets(
    std::span<const std::string> tokens, Range clause) {
  std::vector<std::size_t> out;
  for (std::size_t i = clause.begin; i < clause.end && i < tokens.size(); ++i) {
    if (is_word_token(tokens[i]) && !is_function_word(tokens[i])) {
      out.push_back(i);
    }
  }
  return out;
}

OpinionSpan resolve_opinion_span(const Corpus& corpus, const AspectUnit& unit,
                                 const SentenceInfo& info,
                                 const SpanOptions& options) {
  const Sentence& sentence = corpus.sentence_of(unit);
  const AspectRef& aspect = corpus.aspect_of(unit);
  const auto& seg = info.segmentation;

  OpinionSpan span;
  span.unit = unit.unit_id;
  span.tokens = Range{0, sentence.tokens.size()};

  if (unit.mode == AspectMode::kTerm) {
    if (aspect.term_span) {
      if (auto c = seg.clause_of(aspect.term_span->begin)) {
        span.tokens = seg.clauses[*c].tokens;
        span.clause = c;
        span.association = SpanAssociation::kExplicitTerm;
      }
    }
    return span;
  }

  const auto parts = category_parts(*aspect.category);
  auto similarity = [&](const std::string& token) {
    double best = 0.0;
    for (const auto& part : parts) {
      if (token == part) return 1.0;
      if (options.embeddings) {
        best = std::max(best, options.embeddings->similarity(token, part));
      }
    }
    return best;
  };

  std::optional<std::size_t> best_clause;
  double best_score = 0.0;
  for (std::size_t c = 0; c < seg.clauses.size(); ++c) {
    Range range = seg.clauses[c].tokens;
    std::vector<std::size_t> candidates = options.targets(sentence.tokens, range);
    for (const auto& hit : info.hits) {
      if (range.contains(hit.token_index)) candidates.push_back(hit.token_index);
    }
    double score = 0.0;
    for (std::size_t i : candidates) {
      score = std::max(score, similarity(sentence.tokens[i]));
    }
    if (score >= options.sim_threshold && score > best_score) {
      best_score = score;
      best_clause = c;
    }
  }
  if (best_clause) {
    span.tokens = seg.clauses[*best_clause].tokens;
    span.clause = best_clause;
    span.association = SpanAssociation::kEmbeddingSimilarity;
  }
  return span;
}

std::vector<OpinionSpan> resolve_opinion_spans(
    const Corpus& corpus, std::span<const AspectUnit> units,
    const SentenceTable& table, const SpanOptions& options) {
  std::vector<OpinionSpan> spans;
  spans.reserve(units.size());
  for (const auto& unit : units) {
    spans.push_back(resolve_opinion_span(
        corpus, unit, table[unit.review][unit.sentence], options));
  }
  return spans;
}

// --- word features ----------------------------------------------------------

std::string WordFeature::text() const {
  std::string out = negated ? "neg:" : "";
  for (std::size_t i = 0; i < surface.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += surface[i];
  }
  return out;
}

FeatureId FeatureIndex::intern(const std::vector<std::string>& surface,
                               bool negated) {
  auto key = std::make_pair(surface, negated);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  auto id = static_cast<FeatureId>(features_.size());
  features_.push_back(WordFeature{id, surface, negated, {}});
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<FeatureId> FeatureIndex::find(
    const std::vector<std::string>& surface, bool negated) const {
  auto it = ids_.find(std::make_pair(surface, negated));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void FeatureIndex::add_bearer(FeatureId f, UnitId unit) {
  auto& bearers = features_.at(f).bearers;
  auto pos = std::lower_bound(bearers.begin(), bearers.end(), unit);
  if (pos == bearers.end() || *pos != unit) bearers.insert(pos, unit);
}

std::vector<FeatureId> extract_word_features(
    UnitId unit, std::span<const std::string> tokens,
    std::span<const SentimentHit> hits, Range span, std::size_t kgram_max,
    FeatureIndex& index) {
  span.end = std::min(span.end, tokens.size());
  std::vector<FeatureId> out;

  // Hit lookup by token position within the span.
  std::vector<const SentimentHit*> hit_at(tokens.size(), nullptr);
  for (const auto& h : hits) {
    if (span.contains(h.token_index)) hit_at[h.token_index] = &h;
  }

  for (std::size_t i = span.begin; i < span.end; ++i) {
    if (const SentimentHit* h = hit_at[i]) {
      out.push_back(index.intern({h->word}, h->negated));
    }
  }
  for (std::size_t k = 2; k <= kgram_max; ++k) {
    if (span.size() < k) break;
    for (std::size_t i = span.begin; i + k <= span.end; ++i) {
      const SentimentHit* first = nullptr;
      for (std::size_t j = i; j < i + k && !first; ++j) first = hit_at[j];
      if (!first) continue;
      std::vector<std::string> surface(tokens.begin() + i, tokens.begin() + i + k);
      out.push_back(index.intern(surface, first->negated));
    }
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (FeatureId f : out) index.add_bearer(f, unit);
  return out;
}

// --- relational features ----------------------------------------------------

std::string_view to_string(RelationKind k) {
  return k == RelationKind::kSimilar ? "similar" : "opposite";
}

std::vector<RelationalFeature> extract_relational_features(
    const Corpus& /*corpus*/, std::span<const AspectUnit> units,
    std::span<const OpinionSpan> spans, const SentenceTable& table) {
  if (spans.size() != units.size()) {
    throw ConsistencyError("one opinion span per unit is required");
  }
  std::vector<RelationalFeature> out;

  // Units are enumerated review by review, so each review is a contiguous run.
  std::size_t begin = 0;
  while (begin < units.size()) {
    std::size_t end = begin;
    while (end < units.size() && units[end].review == units[begin].review) ++end;

    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < end; ++j) {
        const AspectUnit& ui = units[i];
        const AspectUnit& uj = units[j];
        if (ui.review != uj.review) {
          throw ConsistencyError("relation endpoints must share a review");
        }
        const auto& si = table[ui.review][ui.sentence].segmentation;
        const auto& sj = table[uj.review][uj.sentence].segmentation;

        std::optional<std::pair<RelationKind, int>> rel;
        if (ui.sentence == uj.sentence) {
          const auto& ci = spans[i].clause;
          const auto& cj = spans[j].clause;
          if (ci && cj && *ci != *cj && si.shift_between(*ci, *cj)) {
            rel = {RelationKind::kOpposite, 3};
          } else if (!si.has_shift_word()) {
            rel = {RelationKind::kSimilar, 1};
          }
        } else {
          std::size_t lo = std::min(ui.sentence, uj.sentence);
          std::size_t hi = std::max(ui.sentence, uj.sentence);
          if (hi - lo == 1) {
            const auto& first = ui.sentence < uj.sentence ? si : sj;
            const auto& second = ui.sentence < uj.sentence ? sj : si;
            if (second.leading_shift && !first.has_inner_shift() &&
                !second.has_inner_shift()) {
              rel = {RelationKind::kOpposite, 2};
            } else if (!first.has_shift_word() && !second.has_shift_word()) {
              rel = {RelationKind::kSimilar, 1};
            }
          }
        }
        if (rel) {
          RelationalFeature f;
          f.id = static_cast<FeatureId>(out.size());
          f.kind = rel->first;
          f.rule = rel->second;
          f.a = std::min(ui.unit_id, uj.unit_id);
          f.b = std::max(ui.unit_id, uj.unit_id);
          out.push_back(f);
        }
      }
    }
    begin = end;
  }
  return out;
}

// --- statistics -------------------------------------------------------------

bool relation_holds(RelationKind kind, Polarity x, Polarity y) {
  return kind == RelationKind::kSimilar ? x == y : x != y;
}

FeatureStats feature_statistics(const FeatureIndex& index,
                                std::span<const RelationalFeature> relations,
                                const LabelMap& labels) {
  FeatureStats stats;
  stats.positives.assign(index.size(), 0);
  stats.labeled.assign(index.size(), 0);
  for (const auto& f : index.features()) {
    for (UnitId u : f.bearers) {
      if (u < labels.size() && labels[u]) {
        ++stats.labeled[f.id];
        if (*labels[u] == Polarity::kPositive) ++stats.positives[f.id];
      }
    }
  }
  for (const auto& r : relations) {
    if (r.a < labels.size() && r.b < labels.size() && labels[r.a] && labels[r.b]) {
      auto k = static_cast<std::size_t>(r.kind);
      ++stats.relation_pairs[k];
      if (relation_holds(r.kind, *labels[r.a], *labels[r.b])) {
        ++stats.relation_hits[k];
      }
    }
  }
  return stats;
}

std::array<bool, 2> update_statistics(
    FeatureStats& stats, UnitId unit, Polarity label,
    std::span<const FeatureId> unit_features,
    std::span<const RelationalFeature> relations,
    std::span<const std::size_t> unit_relations, const LabelMap& labels) {
  for (FeatureId f : unit_features) {
    ++stats.labeled[f];
    if (label == Polarity::kPositive) ++stats.positives[f];
  }
  std::array<bool, 2> changed{};
  for (std::size_t idx : unit_relations) {
    const auto& r = relations[idx];
    UnitId other = r.other(unit);
    if (!labels[other]) continue;
    auto k = static_cast<std::size_t>(r.kind);
    ++stats.relation_pairs[k];
    if (relation_holds(r.kind, label, *labels[other])) ++stats.relation_hits[k];
    changed[k] = true;
  }
  return changed;
}

}  // namespace gml
