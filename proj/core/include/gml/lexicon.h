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

#ifndef GML_LEXICON_H_
#define GML_LEXICON_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gml/corpus.h"

namespace gml {

// Sentiment lexicon mapping tokens to signed scores. Entries weaker than
// min_strength stay loaded but never produce sentiment hits.
class Lexicon {
 public:
  static constexpr double kDefaultMinStrength = 1.0;
  static constexpr double kNormalizedBound = 4.0;

  explicit Lexicon(double min_strength = kDefaultMinStrength)
      : min_strength_(min_strength) {}

  // Inserts or overwrites an entry.
  void set(std::string token, double score);

  std::optional<double> score(std::string_view token) const;
  // Score only if the entry is strong enough to count as a sentiment word.
  std::optional<double> active_score(std::string_view token) const;
  bool is_active(std::string_view token) const {
    return active_score(token).has_value();
  }

  double min_strength() const { return min_strength_; }
  std::size_t size() const { return entries_.size(); }

  // Linearly rescales all scores so the largest magnitude becomes 4.
  void normalize();

  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  std::unordered_map<std::string, double> entries_;
  double min_strength_;
  std::vector<std::string> warnings_;
};

// TSV "token<TAB>score"; blank lines and lines starting with '#' are skipped.
// Duplicate tokens keep the last score and record a warning.
Lexicon parse_lexicon(std::string_view text, bool normalize,
                      double min_strength = Lexicon::kDefaultMinStrength);
Lexicon load_lexicon(const std::filesystem::path& path, bool normalize,
                     double min_strength = Lexicon::kDefaultMinStrength);

// A set of (possibly multi-word) phrases matched against token sequences.
class PhraseSet {
 public:
  PhraseSet() = default;
  PhraseSet(std::initializer_list<std::string_view> phrases);

  void add(std::string_view phrase);

  // Length of the longest phrase starting at `pos`, or 0.
  std::size_t match_at(std::span<const std::string> tokens,
                       std::size_t pos) const;
  bool occurs_in(std::span<const std::string> tokens) const;

  bool empty() const { return phrases_.empty(); }
  std::size_t size() const { return phrases_.size(); }
  const std::vector<std::vector<std::string>>& phrases() const {
    return phrases_;
  }

 private:
  std::vector<std::vector<std::string>> phrases_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_;
};

struct ConnectiveLists {
  PhraseSet contrast;
  PhraseSet hypothetical;
  PhraseSet condition;
  PhraseSet negation;
  PhraseSet shift;

  // Built-in English lists; resources/connectives.ini ships the same content.
  static ConnectiveLists defaults();
};

// INI-like file with [contrast] [hypothetical] [condition] [negation] [shift]
// sections and one lowercase entry per line. Omitted sections fall back to the
// built-in defaults.
ConnectiveLists parse_connectives(std::string_view text);
ConnectiveLists load_connectives(const std::filesystem::path& path);

inline constexpr std::size_t kDefaultNegationWindow = 3;

struct SentimentHit {
  std::size_t token_index = 0;
  std::string word;
  double score = 0.0;  // lexicon score, sign gives raw polarity
  Polarity raw_polarity = Polarity::kPositive;
  bool negated = false;

  Polarity effective_polarity() const {
    return negated ? flip(raw_polarity) : raw_polarity;
  }
  double effective_score() const { return negated ? -score : score; }
};

// One hit per active lexicon token. A hit is negated when the `window` tokens
// before it hold an odd number of negation words.
std::vector<SentimentHit> find_sentiment_hits(
    std::span<const std::string> tokens, const Lexicon& lexicon,
    const ConnectiveLists& connectives,
    std::size_t window = kDefaultNegationWindow);

// Positions of negation tokens in `tokens`.
std::vector<std::size_t> negation_positions(std::span<const std::string> tokens,
                                            const ConnectiveLists& connectives);

// True when some negation token lies outside the window preceding every hit.
// Only negations inside `scope` are considered (whole sentence by default).
bool has_long_distance_negation(std::span<const std::string> tokens,
                                std::span<const SentimentHit> hits,
                                const ConnectiveLists& connectives,
                                std::size_t window = kDefaultNegationWindow,
                                std::optional<Range> scope = std::nullopt);

struct FallbackLabel {
  Polarity polarity = Polarity::kPositive;
  double score = 0.0;
  bool is_default = false;  // score was exactly 0 (including no hits)
};

// Lexicon-sum polarity over the hits inside `clause`.
FallbackLabel fallback_label(std::span<const SentimentHit> hits, Range clause,
                             Polarity default_polarity = Polarity::kPositive);

}  // namespace gml

#endif  // GML_LEXICON_H_
