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

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gml/engine.h"
#include "gml/errors.h"
#include "gml/numeric.h"

namespace gml {
namespace {

constexpr std::array<std::string_view, 20> kPositive = {
    "great",  "excellent", "good",     "amazing",     "fantastic",
    "wonderful", "superb", "solid",    "reliable",    "impressive",
    "smooth", "fast",      "bright",   "sturdy",      "comfortable",
    "responsive", "perfect", "lovely", "nice",        "awesome"};
constexpr std::array<std::string_view, 20> kNegative = {
    "terrible", "awful",  "bad",      "poor",        "horrible",
    "weak",     "slow",   "flimsy",   "dim",         "noisy",
    "disappointing", "mediocre", "sluggish", "unreliable", "uncomfortable",
    "faulty",   "broken", "laggy",    "dreadful",    "clunky"};
constexpr std::array<std::string_view, 20> kAspects = {
    "battery", "screen",  "keyboard", "display",  "speaker",
    "trackpad", "camera", "charger",  "case",     "hinge",
    "fan",     "processor", "memory", "touchpad", "webcam",
    "port",    "cable",   "lid",      "stand",    "software"};

class Builder {
 public:
  explicit Builder(const SyntheticParams& p) : p_(p), rng_(mix_seed(p.seed, 0x73796eULL)) {}

  Corpus build() {
    // Units per hard draw: a quarter of the clean ones are two-aspect pairs.
    const double h = 1.0 + 0.25 * (1.0 - p_.noise);
    const double e = p_.easy_fraction;
    const double p_easy = e * h / (1.0 - e + e * h);
    while (units_ < p_.n_units) {
      if (corpus_.reviews.empty() || !rng_.bernoulli(p_.relation_density)) {
        start_review();
      }
      if (rng_.bernoulli(p_easy)) {
        easy_sentence();
      } else {
        hard_sentence();
      }
    }
    return std::move(corpus_);
  }

 private:
  struct Planted {
    std::string term;
    Polarity gold;
  };

  std::string_view word(Polarity p) {
    const auto& pool = p == Polarity::kPositive ? kPositive : kNegative;
    return pool[rng_.below(pool.size())];
  }
  std::string_view aspect() { return kAspects[rng_.below(kAspects.size())]; }
  Polarity coin() {
    return rng_.bernoulli(0.5) ? Polarity::kPositive : Polarity::kNegative;
  }

  void start_review() {
    Review r;
    r.id = "r" + std::to_string(corpus_.reviews.size());
    corpus_.reviews.push_back(std::move(r));
    prev_gold_ = coin();
    linkable_ = false;
  }

  // Polarity a new sentence continues with when it is tied to the previous
  // one by a similar relation.
  Polarity continued() { return linkable_ ? prev_gold_ : coin(); }

  void emit(std::string text, std::vector<Planted> aspects, bool has_shift) {
    Review& review = corpus_.reviews.back();
    Sentence s;
    s.id = "s" + std::to_string(review.sentences.size());
    s.text = std::move(text);
    for (auto& t : tokenize(s.text)) {
      s.tokens.push_back(std::move(t.text));
      s.offsets.push_back(t.chars);
    }
    std::size_t from = 0;
    for (auto& a : aspects) {
      AspectRef ref;
      ref.id = "a" + std::to_string(s.aspects.size());
      for (std::size_t i = from; i < s.tokens.size(); ++i) {
        if (s.tokens[i] == a.term) {
          ref.term_span = Range{i, i + 1};
          from = i + 1;
          break;
        }
      }
      ref.term = std::move(a.term);
      ref.gold = a.gold;
      prev_gold_ = a.gold;
      s.aspects.push_back(std::move(ref));
      ++units_;
    }
    review.sentences.push_back(std::move(s));
    linkable_ = !has_shift;
  }

  void easy_sentence() {
    Polarity gold = continued();
    if (linkable_ && rng_.bernoulli(p_.noise)) gold = flip(gold);
    std::string a(aspect());
    std::string text;
    switch (rng_.below(4)) {
      case 0:
        text = "The " + a + " is " + std::string(word(gold)) + ".";
        break;
      case 1:
        text = "I found the " + a + " really " + std::string(word(gold)) + ".";
        break;
      case 2:
        text = "The " + a + " feels " + std::string(word(gold)) + " overall.";
        break;
      default:
        text = "The " + a + " is not " + std::string(word(flip(gold))) + ".";
        break;
    }
    // Sarcasm: the text reads one way, the annotator hears the other.
    Polarity recorded = rng_.bernoulli(p_.noise / 2.0) ? flip(gold) : gold;
    emit(std::move(text), {{a, recorded}}, false);
  }

  void hard_sentence() {
    std::string a(aspect());
    if (rng_.bernoulli(p_.noise)) {
      // Misleading surface words; the planted label follows the review.
      Polarity gold = continued();
      std::string w(word(flip(gold)));
      std::string text = rng_.bernoulli(0.5)
                             ? "I don't think the " + a + " is " + w + "."
                             : "The " + a + " would be " + w + " if it worked properly.";
      emit(std::move(text), {{a, gold}}, false);
      return;
    }
    std::size_t kind = rng_.below(4);
    if (kind < 2 && !linkable_) kind = 3;
    if (kind == 2 && units_ + 2 > p_.n_units) kind = 3;  // would overshoot n_units
    switch (kind) {
      case 0: {  // opens with a shift word: opposite to the previous sentence
        Polarity gold = flip(prev_gold_);
        emit("However, the " + a + " is " + std::string(word(gold)) + ".",
             {{a, gold}}, true);
        break;
      }
      case 1: {  // no sentiment word; similar to the previous sentence
        emit("I used the " + a + " every day.", {{a, prev_gold_}}, false);
        break;
      }
      case 2: {  // two aspects contrasted inside one sentence
        std::string b(aspect());
        while (b == a) b = aspect();
        Polarity g1 = coin();
        Polarity g2 = flip(g1);
        emit("The " + a + " is " + std::string(word(g1)) + " but the " + b + " is " +
                 std::string(word(g2)) + ".",
             {{a, g1}, {b, g2}}, true);
        break;
      }
      default: {  // conditional
        Polarity gold = continued();
        emit("The " + a + " is " + std::string(word(gold)) +
                 " unless you need more.",
             {{a, gold}}, false);
        break;
      }
    }
  }

  SyntheticParams p_;
  Rng rng_;
  Corpus corpus_;
  std::size_t units_ = 0;
  Polarity prev_gold_ = Polarity::kPositive;
  bool linkable_ = false;
};

}  // namespace

void SyntheticParams::validate() const {
  if (n_units == 0) throw InputError("synthetic corpus needs n_units > 0");
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!(easy_fraction > 0.0 && easy_fraction <= 1.0)) {
    throw InputError("easy_fraction must be in (0, 1]");
  }
  if (!unit(relation_density)) throw InputError("relation_density must be in [0, 1]");
  if (!unit(noise)) throw InputError("noise must be in [0, 1]");
}

Corpus generate_synthetic(const SyntheticParams& params) {
  params.validate();
  return Builder(params).build();
}

Lexicon synthetic_lexicon() {
  Lexicon lex;
  for (auto w : kPositive) lex.set(std::string(w), 2.0);
  for (auto w : kNegative) lex.set(std::string(w), -2.0);
  return lex;
}

}  // namespace gml
