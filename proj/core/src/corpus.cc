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

#include "gml/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gml/errors.h"

namespace gml {
namespace {

using json = nlohmann::json;

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

char lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

// U+2019 (right single quotation mark) is folded to an ASCII apostrophe so
// that "don’t" and "don't" are the same token.
constexpr std::string_view kCurlyApostrophe = "\xE2\x80\x99";

std::string normalize_token(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    if (raw.substr(i, kCurlyApostrophe.size()) == kCurlyApostrophe) {
      out.push_back('\'');
      i += kCurlyApostrophe.size();
    } else {
      out.push_back(lower(raw[i]));
      ++i;
    }
  }
  return out;
}

std::string json_path(const std::string& base, std::string_view field) {
  return base + "." + std::string(field);
}

std::string require_string(const json& obj, std::string_view field,
                           const std::string& where) {
  auto it = obj.find(std::string(field));
  if (it == obj.end()) {
    throw InputError(where + ": missing field '" + std::string(field) + "'");
  }
  if (!it->is_string()) {
    throw InputError(json_path(where, field) + ": expected a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj,
                                           std::string_view field,
                                           const std::string& where) {
  auto it = obj.find(std::string(field));
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw InputError(json_path(where, field) + ": expected a string or null");
  }
  return it->get<std::string>();
}

const json& require_array(const json& obj, std::string_view field,
                          const std::string& where) {
  auto it = obj.find(std::string(field));
  if (it == obj.end()) {
    throw InputError(where + ": missing field '" + std::string(field) + "'");
  }
  if (!it->is_array()) {
    throw InputError(json_path(where, field) + ": expected an array");
  }
  return *it;
}

std::optional<Range> find_subsequence(const std::vector<std::string>& haystack,
                                      const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return std::nullopt;
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(),
                        needle.end());
  if (it == haystack.end()) return std::nullopt;
  auto begin = static_cast<std::size_t>(it - haystack.begin());
  return Range{begin, begin + needle.size()};
}

AspectRef parse_aspect(const json& node, const std::string& where,
                       const std::vector<std::string>& tokens) {
  if (!node.is_object()) throw InputError(where + ": expected an object");
  AspectRef aspect;
  aspect.id = require_string(node, "id", where);
  aspect.term = optional_string(node, "term", where);
  aspect.category = optional_string(node, "category", where);
  if (!aspect.term && !aspect.category) {
    throw InputError(where + ": aspect '" + aspect.id +
                     "' has neither a term nor a category");
  }

  if (auto gold = optional_string(node, "gold", where)) {
    aspect.gold = parse_polarity(*gold);
    if (!aspect.gold) {
      throw InputError(json_path(where, "gold") + ": expected \"positive\", "
                       "\"negative\" or null, got \"" + *gold + "\"");
    }
  }

  auto span_it = node.find("term_span");
  if (span_it != node.end() && !span_it->is_null()) {
    const json& span = *span_it;
    if (!span.is_array() || span.size() != 2 || !span[0].is_number_integer() ||
        !span[1].is_number_integer()) {
      throw InputError(json_path(where, "term_span") +
                       ": expected [begin, end] token indices");
    }
    auto begin = span[0].get<std::int64_t>();
    auto end = span[1].get<std::int64_t>();
    if (begin < 0 || end <= begin ||
        static_cast<std::size_t>(end) > tokens.size()) {
      throw InputError(json_path(where, "term_span") + ": range [" +
                       std::to_string(begin) + ", " + std::to_string(end) +
                       ") is outside the sentence's " +
                       std::to_string(tokens.size()) + " tokens");
    }
    aspect.term_span =
        Range{static_cast<std::size_t>(begin), static_cast<std::size_t>(end)};
  } else if (aspect.term) {
    std::vector<std::string> term_tokens;
    for (auto& t : tokenize(*aspect.term)) term_tokens.push_back(t.text);
    aspect.term_span = find_subsequence(tokens, term_tokens);
  }
  return aspect;
}

Sentence parse_sentence(const json& node, const std::string& where) {
  if (!node.is_object()) throw InputError(where + ": expected an object");
  Sentence sentence;
  sentence.id = require_string(node, "id", where);
  sentence.text = require_string(node, "text", where);

  auto tok_it = node.find("tokens");
  if (tok_it != node.end() && !tok_it->is_null()) {
    if (!tok_it->is_array()) {
      throw InputError(json_path(where, "tokens") + ": expected an array");
    }
    std::string lowered = normalize_token(sentence.text);
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < tok_it->size(); ++i) {
      const json& t = (*tok_it)[i];
      if (!t.is_string()) {
        throw InputError(json_path(where, "tokens") + "[" + std::to_string(i) +
                         "]: expected a string");
      }
      std::string token = normalize_token(t.get<std::string>());
      Range offset{kNoOffset, kNoOffset};
      // normalize_token may shorten curly apostrophes, so offsets are only
      // exact for texts without them.
      if (lowered.size() == sentence.text.size()) {
        auto pos = lowered.find(token, cursor);
        if (pos != std::string::npos) {
          offset = Range{pos, pos + token.size()};
          cursor = offset.end;
        }
      }
      sentence.tokens.push_back(std::move(token));
      sentence.offsets.push_back(offset);
    }
  } else {
    for (auto& t : tokenize(sentence.text)) {
      sentence.tokens.push_back(std::move(t.text));
      sentence.offsets.push_back(t.chars);
    }
  }

  const json& aspects = require_array(node, "aspects", where);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < aspects.size(); ++i) {
    std::string at = where + ".aspects[" + std::to_string(i) + "]";
    AspectRef aspect = parse_aspect(aspects[i], at, sentence.tokens);
    if (!seen.insert(aspect.id).second) {
      throw InputError(at + ": duplicate aspect id '" + aspect.id + "'");
    }
    sentence.aspects.push_back(std::move(aspect));
  }
  return sentence;
}

std::string describe_parse_error(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

std::string_view to_string(Polarity p) {
  return p == Polarity::kPositive ? "positive" : "negative";
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  if (s == "positive") return Polarity::kPositive;
  if (s == "negative") return Polarity::kNegative;
  return std::nullopt;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  auto apostrophe_at = [&](std::size_t k) -> std::size_t {
    if (text[k] == '\'') return 1;
    if (text.substr(k, kCurlyApostrophe.size()) == kCurlyApostrophe) {
      return kCurlyApostrophe.size();
    }
    return 0;
  };

  while (i < n) {
    unsigned char c = byte(i);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    // A curly apostrophe starts with a non-ASCII byte, so it is tested before
    // the generic word-byte branch.
    std::size_t apos = apostrophe_at(i);
    if (apos == 0 && is_word_byte(c)) {
      std::size_t start = i;
      while (i < n) {
        if (std::size_t a = apostrophe_at(i); a > 0) {
          // Keep the apostrophe only when a word character follows it.
          if (i > start && i + a < n && is_word_byte(byte(i + a)) &&
              apostrophe_at(i + a) == 0) {
            i += a;
            continue;
          }
          break;
        }
        if (!is_word_byte(byte(i))) break;
        ++i;
      }
      tokens.push_back({normalize_token(text.substr(start, i - start)),
                        Range{start, i}});
      continue;
    }
    std::size_t len = apos > 0 ? apos : 1;
    tokens.push_back({normalize_token(text.substr(i, len)), Range{i, i + len}});
    i += len;
  }
  return tokens;
}

std::size_t Corpus::sentence_count() const {
  std::size_t total = 0;
  for (const auto& r : reviews) total += r.sentences.size();
  return total;
}

Corpus parse_corpus(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw InputError("corpus JSON syntax error at " +
                     describe_parse_error(json_text, e.byte == 0 ? 0 : e.byte - 1) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw InputError("corpus: expected a JSON object");

  Corpus corpus;
  const json& reviews = require_array(doc, "reviews", "corpus");
  std::set<std::string> review_ids;
  for (std::size_t r = 0; r < reviews.size(); ++r) {
    std::string where = "reviews[" + std::to_string(r) + "]";
    const json& node = reviews[r];
    if (!node.is_object()) throw InputError(where + ": expected an object");
    Review review;
    review.id = require_string(node, "id", where);
    if (!review_ids.insert(review.id).second) {
      throw InputError(where + ": duplicate review id '" + review.id + "'");
    }
    const json& sentences = require_array(node, "sentences", where);
    std::set<std::string> sentence_ids;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      std::string at = where + ".sentences[" + std::to_string(s) + "]";
      Sentence sentence = parse_sentence(sentences[s], at);
      if (!sentence_ids.insert(sentence.id).second) {
        throw InputError(at + ": duplicate sentence id '" + sentence.id + "'");
      }
      review.sentences.push_back(std::move(sentence));
    }
    corpus.reviews.push_back(std::move(review));
  }
  return corpus;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_corpus(text);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<AspectUnit> enumerate_aspect_units(const Corpus& corpus) {
  std::vector<AspectUnit> units;
  for (std::size_t r = 0; r < corpus.reviews.size(); ++r) {
    const auto& sentences = corpus.reviews[r].sentences;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      const auto& aspects = sentences[s].aspects;
      for (std::size_t a = 0; a < aspects.size(); ++a) {
        AspectUnit unit;
        unit.unit_id = static_cast<UnitId>(units.size());
        unit.review = r;
        unit.sentence = s;
        unit.aspect = a;
        unit.mode = aspects[a].term ? AspectMode::kTerm : AspectMode::kCategory;
        units.push_back(unit);
      }
    }
  }
  return units;
}

// --- embeddings -------------------------------------------------------------

bool EmbeddingTable::insert(std::string token, std::span<const double> vector) {
  if (vector.size() != dimension_) {
    throw InputError("embedding for '" + token + "' has dimension " +
                     std::to_string(vector.size()) + ", expected " +
                     std::to_string(dimension_));
  }
  auto [it, inserted] = index_.try_emplace(std::move(token), data_.size());
  if (!inserted) return false;
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

std::optional<std::span<const double>> EmbeddingTable::lookup(
    std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(data_.data() + it->second, dimension_);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double EmbeddingTable::similarity(std::string_view a, std::string_view b) const {
  auto va = lookup(a);
  auto vb = lookup(b);
  if (!va || !vb) return 0.0;
  return cosine(*va, *vb);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingTable parse_embeddings(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos < text.size();) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (line.find_first_not_of(" \t") != std::string_view::npos) {
      lines.emplace_back(line_no, line);
    }
    pos = nl + 1;
  }
  if (lines.empty()) throw InputError("embeddings: file is empty");

  std::optional<std::size_t> declared_count;
  std::size_t first = 0;
  {
    auto fields = split_fields(lines[0].second);
    std::size_t count = 0, dim = 0;
    if (fields.size() == 2 && parse_number(fields[0], count) &&
        parse_number(fields[1], dim)) {
      if (dim == 0) throw InputError("embeddings: header declares dimension 0");
      declared_count = count;
      first = 1;
    }
  }

  std::optional<EmbeddingTable> table;
  std::vector<double> values;
  for (std::size_t i = first; i < lines.size(); ++i) {
    auto [no, line] = lines[i];
    auto fields = split_fields(line);
    if (fields.size() < 2) {
      throw InputError("embeddings line " + std::to_string(no) +
                       ": expected a token followed by vector components");
    }
    std::size_t dim = fields.size() - 1;
    if (!table) table.emplace(dim);
    if (dim != table->dimension()) {
      throw InputError("embeddings line " + std::to_string(no) + ": found " +
                       std::to_string(dim) + " components, expected " +
                       std::to_string(table->dimension()));
    }
    values.assign(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) {
      if (!parse_number(fields[d + 1], values[d]) || !std::isfinite(values[d])) {
        throw InputError("embeddings line " + std::to_string(no) +
                         ": bad number '" + std::string(fields[d + 1]) + "'");
      }
    }
    table->insert(std::string(fields[0]), values);
  }
  if (!table) throw InputError("embeddings: no vectors after the header line");
  if (declared_count && *declared_count != lines.size() - first) {
    throw InputError("embeddings: header declares " +
                     std::to_string(*declared_count) + " vectors but " +
                     std::to_string(lines.size() - first) + " were found");
  }
  return std::move(*table);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_embeddings(text);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace gml
