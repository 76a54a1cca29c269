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

#include "gml/lexicon.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "gml/errors.h"

namespace gml {

void Lexicon::set(std::string token, double score) {
  entries_[std::move(token)] = score;
}

std::optional<double> Lexicon::score(std::string_view token) const {
  auto it = entries_.find(std::string(token));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> Lexicon::active_score(std::string_view token) const {
  auto s = score(token);
  if (!s || *s == 0.0 || std::abs(*s) < min_strength_) return std::nullopt;
  return s;
}

void Lexicon::normalize() {
  double max_abs = 0.0;
  for (const auto& [token, s] : entries_) max_abs = std::max(max_abs, std::abs(s));
  if (max_abs == 0.0) return;
  const double scale = kNormalizedBound / max_abs;
  for (auto& [token, s] : entries_) {
    s = std::clamp(s * scale, -kNormalizedBound, kNormalizedBound);
  }
}

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos <= text.size();) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    fn(line_no, text.substr(pos, nl - pos));
    pos = nl + 1;
  }
}

std::string lowercase(std::string_view s) {
  std::string out;
  for (auto& t : tokenize(s)) {
    if (!out.empty()) out.push_back(' ');
    out += t.text;
  }
  return out;
}

}  // namespace

Lexicon parse_lexicon(std::string_view text, bool normalize,
                      double min_strength) {
  Lexicon lexicon(min_strength);
  for_each_line(text, [&](std::size_t no, std::string_view raw) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') return;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw InputError("lexicon line " + std::to_string(no) +
                       ": expected \"token<TAB>score\"");
    }
    std::string token = lowercase(trim(line.substr(0, tab)));
    std::string_view score_text = trim(line.substr(tab + 1));
    double score = 0.0;
    auto [ptr, ec] = std::from_chars(
        score_text.data(), score_text.data() + score_text.size(), score);
    if (token.empty() || ec != std::errc() ||
        ptr != score_text.data() + score_text.size() || !std::isfinite(score)) {
      throw InputError("lexicon line " + std::to_string(no) +
                       ": unparsable score '" + std::string(score_text) + "'");
    }
    if (lexicon.score(token)) {
      lexicon.add_warning("lexicon line " + std::to_string(no) +
                          ": duplicate token '" + token + "', last score wins");
    }
    lexicon.set(std::move(token), score);
  });
  if (normalize) lexicon.normalize();
  return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path& path, bool normalize,
                     double min_strength) {
  std::string text = read_file(path);
  try {
    return parse_lexicon(text, normalize, min_strength);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

// --- phrases ----------------------------------------------------------------

PhraseSet::PhraseSet(std::initializer_list<std::string_view> phrases) {
  for (auto p : phrases) add(p);
}

void PhraseSet::add(std::string_view phrase) {
  std::vector<std::string> tokens;
  for (auto& t : tokenize(phrase)) tokens.push_back(std::move(t.text));
  if (tokens.empty()) return;
  if (std::find(phrases_.begin(), phrases_.end(), tokens) != phrases_.end()) {
    return;
  }
  by_first_[tokens.front()].push_back(phrases_.size());
  phrases_.push_back(std::move(tokens));
}

std::size_t PhraseSet::match_at(std::span<const std::string> tokens,
                                std::size_t pos) const {
  if (pos >= tokens.size()) return 0;
  auto it = by_first_.find(tokens[pos]);
  if (it == by_first_.end()) return 0;
  std::size_t best = 0;
  for (std::size_t idx : it->second) {
    const auto& p = phrases_[idx];
    if (p.size() <= best || pos + p.size() > tokens.size()) continue;
    if (std::equal(p.begin(), p.end(), tokens.begin() + pos)) best = p.size();
  }
  return best;
}

bool PhraseSet::occurs_in(std::span<const std::string> tokens) const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (match_at(tokens, i) > 0) return true;
  }
  return false;
}

ConnectiveLists ConnectiveLists::defaults() {
  ConnectiveLists c;
  c.contrast = {"but",          "however",     "although",   "though",
                "yet",          "whereas",     "while",      "even though",
                "nevertheless", "nonetheless"};
  c.shift = c.contrast;
  c.hypothetical = {"if", "whether", "assuming", "supposing", "in case"};
  c.condition = {"unless", "as long as", "provided that", "only if",
                 "on condition that"};
  c.negation = {"not",     "no",       "never",   "none",   "nothing",
                "nobody",  "neither",  "nor",     "without", "cannot",
                "don't",   "doesn't",  "didn't",  "isn't",  "aren't",
                "wasn't",  "weren't",  "can't",   "couldn't", "won't",
                "wouldn't", "shouldn't", "hasn't", "haven't", "hadn't",
                "mustn't", "ain't",    "dont",    "doesnt", "didnt",
                "isnt",    "cant",     "wont"};
  return c;
}

ConnectiveLists parse_connectives(std::string_view text) {
  ConnectiveLists lists = ConnectiveLists::defaults();
  struct Section {
    PhraseSet* set;
    bool seen = false;
  };
  std::unordered_map<std::string, Section> sections{
      {"contrast", {&lists.contrast}},   {"hypothetical", {&lists.hypothetical}},
      {"condition", {&lists.condition}}, {"negation", {&lists.negation}},
      {"shift", {&lists.shift}}};
  PhraseSet* current = nullptr;
  for_each_line(text, [&](std::size_t no, std::string_view raw) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') return;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw InputError("connectives line " + std::to_string(no) +
                         ": malformed section header");
      }
      std::string name(trim(line.substr(1, line.size() - 2)));
      auto it = sections.find(name);
      if (it == sections.end()) {
        throw InputError("connectives line " + std::to_string(no) +
                         ": unknown section [" + name + "]");
      }
      if (!it->second.seen) {
        *it->second.set = PhraseSet{};
        it->second.seen = true;
      }
      current = it->second.set;
      return;
    }
    if (!current) {
      throw InputError("connectives line " + std::to_string(no) +
                       ": entry before any section header");
    }
    current->add(line);
  });
  return lists;
}

ConnectiveLists load_connectives(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_connectives(text);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

// --- hits and negation ------------------------------------------------------

std::vector<std::size_t> negation_positions(std::span<const std::string> tokens,
                                            const ConnectiveLists& connectives) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (connectives.negation.match_at(tokens, i) > 0) out.push_back(i);
  }
  return out;
}

std::vector<SentimentHit> find_sentiment_hits(
    std::span<const std::string> tokens, const Lexicon& lexicon,
    const ConnectiveLists& connectives, std::size_t window) {
  std::vector<bool> is_negation(tokens.size(), false);
  for (std::size_t p : negation_positions(tokens, connectives)) {
    is_negation[p] = true;
  }

  std::vector<SentimentHit> hits;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto score = lexicon.active_score(tokens[i]);
    if (!score) continue;
    std::size_t count = 0;
    for (std::size_t j = i >= window ? i - window : 0; j < i; ++j) {
      if (is_negation[j]) ++count;
    }
    SentimentHit hit;
    hit.token_index = i;
    hit.word = tokens[i];
    hit.score = *score;
    hit.raw_polarity = *score > 0 ? Polarity::kPositive : Polarity::kNegative;
    hit.negated = count % 2 == 1;
    hits.push_back(std::move(hit));
  }
  return hits;
}

bool has_long_distance_negation(std::span<const std::string> tokens,
                                std::span<const SentimentHit> hits,
                                const ConnectiveLists& connectives,
                                std::size_t window, std::optional<Range> scope) {
  for (std::size_t p : negation_positions(tokens, connectives)) {
    if (scope && !scope->contains(p)) continue;
    bool local = std::any_of(hits.begin(), hits.end(), [&](const SentimentHit& h) {
      return p < h.token_index && h.token_index - p <= window;
    });
    if (!local) return true;
  }
  return false;
}

FallbackLabel fallback_label(std::span<const SentimentHit> hits, Range clause,
                             Polarity default_polarity) {
  FallbackLabel out;
  for (const auto& h : hits) {
    if (clause.contains(h.token_index)) out.score += h.effective_score();
  }
  if (out.score == 0.0) {
    out.polarity = default_polarity;
    out.is_default = true;
  } else {
    out.polarity = out.score > 0 ? Polarity::kPositive : Polarity::kNegative;
  }
  return out;
}

}  // namespace gml
