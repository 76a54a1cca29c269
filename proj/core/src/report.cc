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

#include "gml/report.h"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "gml/errors.h"

namespace gml {
namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json mass_json(const Mass& m) {
  return {{"a", m.a}, {"b", m.b}, {"both", m.both}, {"conflict", m.conflict}};
}

}  // namespace

void write_predictions(std::ostream& out, std::span<const UnitRecord> records) {
  for (const auto& r : records) {
    json j = {
        {"unit_id", r.unit_id},
        {"review_id", r.review_id},
        {"sentence_id", r.sentence_id},
        {"aspect_id", r.aspect_id},
        {"predicted", std::string(to_string(r.predicted))},
        {"probability", r.probability},
        {"entropy", r.entropy},
        {"method", std::string(to_string(r.method))},
        {"iteration", r.iteration ? json(*r.iteration) : json(nullptr)},
    };
    out << j.dump() << '\n';
  }
}

std::vector<UnitRecord> parse_predictions(std::string_view text) {
  std::vector<UnitRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& why) {
      throw InputError("predictions line " + std::to_string(line_no) + ": " + why);
    };
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(e.what());
    }
    try {
      UnitRecord r;
      r.unit_id = j.at("unit_id").get<UnitId>();
      r.review_id = j.value("review_id", "");
      r.sentence_id = j.value("sentence_id", "");
      r.aspect_id = j.value("aspect_id", "");
      auto pol = parse_polarity(j.at("predicted").get<std::string>());
      if (!pol) fail("predicted must be \"positive\" or \"negative\"");
      r.predicted = *pol;
      r.probability = j.value("probability", 0.5);
      r.entropy = j.value("entropy", 0.0);
      std::string method = j.value("method", "easy");
      if (method == "easy") {
        r.method = LabelMethod::kEasy;
      } else if (method == "inferred") {
        r.method = LabelMethod::kInferred;
      } else if (method == "fallback") {
        r.method = LabelMethod::kFallback;
      } else {
        fail("unknown method '" + method + "'");
      }
      if (j.contains("iteration") && !j["iteration"].is_null()) {
        r.iteration = j["iteration"].get<std::size_t>();
      }
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      fail(e.what());
    }
  }
  return out;
}

json metrics_json(const Metrics& m) {
  json by_method = json::object();
  for (LabelMethod method :
       {LabelMethod::kEasy, LabelMethod::kInferred, LabelMethod::kFallback}) {
    const auto& mm = m.by_method[static_cast<std::size_t>(method)];
    by_method[std::string(to_string(method))] = {
        {"count", mm.count},
        {"gold", mm.gold},
        {"correct", mm.correct},
        {"accuracy", optional_number(mm.accuracy)}};
  }
  json j = {{"units", m.units},
            {"gold_units", m.gold},
            {"by_method", by_method},
            {"easy", {{"proportion", m.easy_proportion},
                      {"accuracy", optional_number(m.easy_accuracy)}}},
            {"iterations", m.iterations},
            {"trace", m.trace}};
  if (m.accuracy) j["accuracy"] = *m.accuracy;
  return j;
}

json metrics_json(const Metrics& m, const RunResult& run) {
  json j = metrics_json(m);
  j["timing"] = {{"total_seconds", run.seconds}};
  return j;
}

json easy_stats_json(const EasyStats& s) {
  json reasons = json::object();
  for (std::size_t i = 0; i < kHardReasonCount; ++i) {
    reasons[std::string(to_string(static_cast<HardReason>(i)))] =
        s.reason_histogram[i];
  }
  return {{"units", s.total},
          {"easy", s.easy},
          {"proportion", s.proportion},
          {"accuracy", optional_number(s.accuracy)},
          {"gold_easy", s.gold_easy},
          {"hard_reasons", reasons}};
}

json subgraph_json(const Subgraph& sub) {
  json vars = json::array();
  for (Subgraph::Index v = 0; v < sub.variable_count(); ++v) {
    json words = json::array();
    for (auto fi : sub.word_factors_of(v)) {
      auto w = sub.word_factors()[fi].weight;
      words.push_back({{"feature", sub.word_weight_features()[w]},
                       {"weight", sub.word_weights()[w]}});
    }
    json rels = json::array();
    for (auto ri : sub.relations_of(v)) {
      const auto& r = sub.relation_factors()[ri];
      auto other = r.a == v ? r.b : r.a;
      rels.push_back({{"unit", sub.unit(other)},
                      {"kind", std::string(to_string(r.kind))},
                      {"weight", sub.relation_weight(r.kind)}});
    }
    int ev = sub.evidence(v);
    vars.push_back({{"unit", sub.unit(v)},
                    {"evidence", ev < 0 ? json(nullptr)
                                        : json(std::string(to_string(
                                              static_cast<Polarity>(ev))))},
                    {"word_factors", words},
                    {"relations", rels}});
  }
  return {{"target", sub.unit(sub.target())},
          {"variables", vars},
          {"relation_weights",
           {{"similar", sub.relation_weight(RelationKind::kSimilar)},
            {"opposite", sub.relation_weight(RelationKind::kOpposite)}}}};
}

json inspect_json(const GradualInference& engine, UnitId unit) {
  const auto& units = engine.prepared().units;
  if (unit >= units.size()) {
    throw InputError("unit " + std::to_string(unit) + " does not exist (corpus has " +
                     std::to_string(units.size()) + " units)");
  }
  const auto& graph = engine.graph();
  const auto& stats = engine.stats();
  const AspectUnit& au = units[unit];
  const Corpus& corpus = engine.corpus();

  json words = json::array();
  for (FeatureId f : graph.word_features_of(unit)) {
    json jf = {{"id", f},
               {"text", graph.features().feature(f).text()},
               {"bearers", graph.bearers(f).size()},
               {"labeled", stats.n(f)},
               {"weight", graph.word_weight(f)}};
    jf["p"] = stats.observed(f) ? json(stats.p(f)) : json(nullptr);
    words.push_back(jf);
  }
  json rels = json::array();
  for (std::size_t ri : graph.relations_of(unit)) {
    const auto& r = graph.relation(ri);
    UnitId other = r.other(unit);
    const auto& lab = engine.labels()[other];
    rels.push_back({{"other", other},
                    {"kind", std::string(to_string(r.kind))},
                    {"rule", r.rule},
                    {"other_label", lab ? json(std::string(to_string(*lab)))
                                        : json(nullptr)},
                    {"accuracy", stats.r(r.kind)}});
  }
  const auto& decision = engine.prepared().easy.decisions[unit];
  json reasons = json::array();
  for (HardReason r : decision.reasons) reasons.push_back(std::string(to_string(r)));

  json j = {{"unit_id", unit},
            {"review_id", corpus.review_of(au).id},
            {"sentence_id", corpus.sentence_of(au).id},
            {"aspect_id", corpus.aspect_of(au).id},
            {"text", corpus.sentence_of(au).text},
            {"easy", decision.easy()},
            {"hard_reasons", reasons},
            {"word_features", words},
            {"relations", rels}};
  const auto& label = engine.labels()[unit];
  j["label"] = label ? json(std::string(to_string(*label))) : json(nullptr);
  if (!label) {
    ObservedEvidence ev = engine.observed(unit);
    SupportResult support = evidential_support(ev, engine.config().uncertainty);
    j["support"] = support.score;
    j["support_mass"] = mass_json(support.mass);
    try {
      j["certainty_mass"] =
          mass_json(certainty_masses(ev, engine.config().uncertainty));
    } catch (const TotalConflictError&) {
      j["certainty_mass"] = nullptr;
    }
    RankKey key = engine.rank_key(unit);
    j["rank_key"] = {{"conflict", key.conflict},
                     {"pignistic_entropy", key.pignistic_entropy}};
    if (support.score > 0.0) j["subgraph"] = subgraph_json(engine.subgraph(unit));
  }
  return j;
}

json corpus_json(const Corpus& corpus) {
  json reviews = json::array();
  for (const auto& review : corpus.reviews) {
    json sentences = json::array();
    for (const auto& s : review.sentences) {
      json aspects = json::array();
      for (const auto& a : s.aspects) {
        json ja = {{"id", a.id}};
        if (a.term) ja["term"] = *a.term;
        if (a.category) ja["category"] = *a.category;
        if (a.term_span) ja["term_span"] = {a.term_span->begin, a.term_span->end};
        ja["gold"] = a.gold ? json(std::string(to_string(*a.gold))) : json(nullptr);
        aspects.push_back(std::move(ja));
      }
      sentences.push_back({{"id", s.id}, {"text", s.text}, {"aspects", aspects}});
    }
    reviews.push_back({{"id", review.id}, {"sentences", sentences}});
  }
  return {{"reviews", reviews}};
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "size,total_seconds,seconds_per_label\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.9f\n", r.size, r.total_seconds,
                  r.seconds_per_label);
    out << buf;
  }
}

}  // namespace gml
