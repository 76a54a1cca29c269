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

#ifndef GML_CORPUS_H_
#define GML_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gml {

enum class Polarity : std::uint8_t { kNegative = 0, kPositive = 1 };

inline Polarity flip(Polarity p) {
  return p == Polarity::kPositive ? Polarity::kNegative : Polarity::kPositive;
}
std::string_view to_string(Polarity p);
// Accepts "positive" / "negative"; anything else is nullopt.
std::optional<Polarity> parse_polarity(std::string_view s);

using UnitId = std::uint32_t;

inline constexpr std::size_t kNoOffset = static_cast<std::size_t>(-1);

// Half-open [begin, end) range of token or character positions.
struct Range {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  friend bool operator==(const Range&, const Range&) = default;
};

struct Token {
  std::string text;  // lowercased
  Range chars;       // byte offsets into the source text
};

// Lowercased word/punctuation tokens. Apostrophes between word characters
// stay inside the token ("don't"); every other ASCII punctuation character is
// its own token. Non-ASCII bytes count as word characters.
std::vector<Token> tokenize(std::string_view text);

struct AspectRef {
  std::string id;
  std::optional<std::string> term;      // aspect term (ATSA)
  std::optional<std::string> category;  // aspect category (ACSA)
  std::optional<Range> term_span;       // token range of the term
  std::optional<Polarity> gold;
};

struct Sentence {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  // Character range of each token in `text`; kNoOffset when a pre-tokenized
  // token could not be located in the text.
  std::vector<Range> offsets;
  std::vector<AspectRef> aspects;
};

struct Review {
  std::string id;
  std::vector<Sentence> sentences;
};

enum class AspectMode : std::uint8_t { kTerm, kCategory };

struct AspectUnit {
  UnitId unit_id = 0;
  std::size_t review = 0;    // index into Corpus::reviews
  std::size_t sentence = 0;  // index into Review::sentences
  std::size_t aspect = 0;    // index into Sentence::aspects
  AspectMode mode = AspectMode::kTerm;
};

struct Corpus {
  std::vector<Review> reviews;

  const Review& review_of(const AspectUnit& u) const { return reviews[u.review]; }
  const Sentence& sentence_of(const AspectUnit& u) const {
    return reviews[u.review].sentences[u.sentence];
  }
  const AspectRef& aspect_of(const AspectUnit& u) const {
    return sentence_of(u).aspects[u.aspect];
  }
  std::size_t sentence_count() const;
};

// Parses the corpus JSON document. Throws InputError with the line/column of
// a syntax error or the JSON path of a schema violation.
Corpus parse_corpus(std::string_view json_text);
Corpus load_corpus(const std::filesystem::path& path);

// One unit per (review, sentence, aspect) triple in document order.
std::vector<AspectUnit> enumerate_aspect_units(const Corpus& corpus);

// Dense word vectors keyed by token.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }

  // Returns false if the token is already present.
  bool insert(std::string token, std::span<const double> vector);

  // nullopt for unknown tokens.
  std::optional<std::span<const double>> lookup(std::string_view token) const;

  // Cosine similarity; 0 when either token is unknown or has zero norm.
  double similarity(std::string_view a, std::string_view b) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

double cosine(std::span<const double> a, std::span<const double> b);

EmbeddingTable parse_embeddings(std::string_view text);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

// Reads a whole file; throws InputError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace gml

#endif  // GML_CORPUS_H_
