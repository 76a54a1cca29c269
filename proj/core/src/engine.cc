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

#include "gml/engine.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "gml/errors.h"
#include "gml/numeric.h"

namespace gml {

void EngineConfig::validate() const {
  if (k < 1 || k > m) {
    throw InputError("k must satisfy 1 <= k <= m (got m=" + std::to_string(m) +
                     ", k=" + std::to_string(k) + ")");
  }
  if (hops == 0) throw InputError("hops must be positive");
  if (subgraph_cap == 0) throw InputError("subgraph_cap must be positive");
  if (kgram_max == 0) throw InputError("kgram_max must be positive");
  if (!(sim_threshold >= -1.0 && sim_threshold <= 1.0)) {
    throw InputError("sim_threshold must be in [-1, 1]");
  }
  uncertainty.validate();
  inference.validate();
  if (!(init.similar >= 0.0) || !(init.opposite <= 0.0)) {
    throw InputError("initial similar weight must be >= 0 and opposite <= 0");
  }
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GML_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Prepared prepare(const Corpus& corpus, const Resources& resources,
                 const EngineConfig& config, bool require_evidence) {
  Prepared p;
  p.units = enumerate_aspect_units(corpus);
  const bool has_category =
      std::any_of(p.units.begin(), p.units.end(),
                  [](const AspectUnit& u) { return u.mode == AspectMode::kCategory; });
  if (has_category && !resources.embeddings) {
    throw InputError(
        "the corpus has aspect-category units but no embeddings were given; "
        "pass --embeddings with a word-vector file so categories can be "
        "matched to clauses");
  }
  p.table = analyze_sentences(corpus, resources.lexicon, resources.connectives,
                              config.negation_window);
  SpanOptions span_options;
  span_options.sim_threshold = config.sim_threshold;
  span_options.embeddings = resources.embeddings ? &*resources.embeddings : nullptr;
  span_options.targets = resources.targets;
  p.spans = resolve_opinion_spans(corpus, p.units, p.table, span_options);
  p.easy = require_evidence
               ? label_easy_instances(corpus, p.units, p.spans, p.table,
                                      resources.connectives, config.negation_window)
               : classify_all(corpus, p.units, p.spans, p.table,
                              resources.connectives, config.negation_window);

  p.features = std::make_unique<FeatureIndex>();
  p.unit_features.reserve(p.units.size());
  for (const auto& u : p.units) {
    const Sentence& s = corpus.sentence_of(u);
    p.unit_features.push_back(extract_word_features(
        u.unit_id, s.tokens, p.table[u.review][u.sentence].hits,
        p.spans[u.unit_id].tokens, config.kgram_max, *p.features));
  }
  p.relations = extract_relational_features(corpus, p.units, p.spans, p.table);
  return p;
}

// --- GradualInference -------------------------------------------------------

GradualInference::GradualInference(const Corpus& corpus, const Resources& resources,
                                   const EngineConfig& config)
    : corpus_(&corpus), config_(config) {
  config_.validate();
  prepared_ = prepare(corpus, resources, config_);
  graph_ = build_graph(prepared_.units.size(), prepared_.easy.evidence,
                       *prepared_.features, prepared_.unit_features,
                       prepared_.relations, config_.init);
  labels_ = graph_.label_map();
  stats_ = feature_statistics(*prepared_.features, prepared_.relations, labels_);
  threads_ = resolve_threads(config_.threads);

  const std::size_t n = prepared_.units.size();
  records_.resize(n);
  for (const auto& u : prepared_.units) {
    UnitRecord& r = records_[u.unit_id];
    r.unit_id = u.unit_id;
    r.review_id = corpus.review_of(u).id;
    r.sentence_id = corpus.sentence_of(u).id;
    r.aspect_id = corpus.aspect_of(u).id;
    if (labels_[u.unit_id]) {
      r.predicted = *labels_[u.unit_id];
      r.probability = r.predicted == Polarity::kPositive ? 1.0 : 0.0;
      r.entropy = 0.0;
      r.method = LabelMethod::kEasy;
    }
  }

  word_mass_.assign(n, Mass::vacuous(Frame::kSupport));
  observed_relations_.assign(n, {0, 0});
  support_.assign(n, 0.0);
  dirty_mark_.assign(n, 0);
  for (UnitId u = 0; u < n; ++u) {
    if (labels_[u]) continue;
    for (std::size_t ri : graph_.relations_of(u)) {
      const auto& r = graph_.relation(ri);
      if (labels_[r.other(u)]) ++observed_relations_[u][static_cast<int>(r.kind)];
    }
    for (int k = 0; k < 2; ++k) {
      if (observed_relations_[u][k] > 0) relation_holders_[k].push_back(u);
    }
    refresh_word_mass(u);
    refresh_support(u);
  }
}

void GradualInference::refresh_word_mass(UnitId u) {
  Mass m = Mass::vacuous(Frame::kSupport);
  try {
    for (FeatureId f : graph_.word_features_of(u)) {
      if (stats_.observed(f)) {
        m = combine(m, word_support_mass(stats_.p(f), config_.uncertainty.d_f));
      }
    }
  } catch (const TotalConflictError&) {
    m = Mass{Frame::kSupport, 0.0, 0.0, 0.0, 1.0};
  }
  word_mass_[u] = m;
}

void GradualInference::refresh_support(UnitId u) {
  if (labels_[u]) {
    support_[u] = 0.0;
    return;
  }
  Mass m = word_mass_[u];
  if (m.conflict >= 1.0) {
    support_[u] = 0.0;
    return;
  }
  try {
    for (RelationKind kind : {RelationKind::kSimilar, RelationKind::kOpposite}) {
      const std::uint32_t c = observed_relations_[u][static_cast<int>(kind)];
      if (c == 0) continue;
      Mass rm = relation_support_mass(stats_.r(kind), config_.uncertainty.d_fp);
      for (std::uint32_t i = 0; i < c; ++i) m = combine(m, rm);
    }
  } catch (const TotalConflictError&) {
    support_[u] = 0.0;
    return;
  }
  support_[u] = m.a;
}

ObservedEvidence GradualInference::observed(UnitId u) const {
  return observe(stats_, graph_.word_features_of(u), graph_.relations(),
                 graph_.relations_of(u), u, labels_,
                 {graph_.relation_weight(RelationKind::kSimilar),
                  graph_.relation_weight(RelationKind::kOpposite)});
}

std::vector<double> GradualInference::recompute_supports() const {
  std::vector<double> out(support_.size(), 0.0);
  for (UnitId u = 0; u < out.size(); ++u) {
    if (!labels_[u]) out[u] = evidential_support(observed(u), config_.uncertainty).score;
  }
  return out;
}

Subgraph GradualInference::subgraph(UnitId u) const {
  SubgraphOptions opts;
  opts.hops = config_.hops;
  opts.cap = config_.subgraph_cap;
  opts.seed = mix_seed(config_.seed, iteration_);
  return extract_subgraph(graph_, u, opts);
}

RankKey GradualInference::rank_key(UnitId u) const {
  try {
    return conflict_rank_key(u, certainty_masses(observed(u), config_.uncertainty));
  } catch (const TotalConflictError&) {
    return max_uncertainty_key(u);
  }
}

void GradualInference::label(UnitId u, Polarity value, double probability,
                             LabelMethod method) {
  const auto changed =
      update_statistics(stats_, u, value, graph_.word_features_of(u),
                        graph_.relations(), graph_.relations_of(u), labels_);
  graph_.label(u, value, probability, iteration_, method);
  labels_[u] = value;
  support_[u] = 0.0;

  UnitRecord& r = records_[u];
  r.predicted = value;
  r.probability = probability;
  r.entropy = entropy(probability);
  r.method = method;
  r.iteration = iteration_;

  // Units whose support inputs moved: bearers of the new label's word
  // features, its relational neighbours, and holders of any relation of a
  // kind whose accuracy changed.
  std::vector<UnitId> dirty;
  auto mark = [&](UnitId v) {
    if (labels_[v] || dirty_mark_[v]) return;
    dirty_mark_[v] = 1;
    dirty.push_back(v);
  };
  for (FeatureId f : graph_.word_features_of(u)) {
    for (UnitId b : graph_.bearers(f)) mark(b);
  }
  for (UnitId b : dirty) refresh_word_mass(b);
  for (std::size_t ri : graph_.relations_of(u)) {
    const auto& rel = graph_.relation(ri);
    UnitId o = rel.other(u);
    if (labels_[o]) continue;
    const int k = static_cast<int>(rel.kind);
    if (observed_relations_[o][k]++ == 0) relation_holders_[k].push_back(o);
    mark(o);
  }
  for (int k = 0; k < 2; ++k) {
    if (!changed[k]) continue;
    auto& holders = relation_holders_[k];
    std::erase_if(holders, [&](UnitId v) { return labels_[v].has_value(); });
    for (UnitId v : holders) mark(v);
  }
  for (UnitId v : dirty) {
    refresh_support(v);
    dirty_mark_[v] = 0;
  }
}

StepRecord GradualInference::fallback_step() {
  UnitId target = 0;
  while (labels_[target]) ++target;
  const AspectUnit& unit = prepared_.units[target];
  const auto& hits = prepared_.table[unit.review][unit.sentence].hits;
  FallbackLabel fb = fallback_label(hits, prepared_.spans[target].tokens);
  double p = sigmoid(fb.score);
  label(target, fb.polarity, p, LabelMethod::kFallback);
  StepRecord rec;
  rec.iteration = iteration_;
  rec.unit = target;
  rec.label = fb.polarity;
  rec.probability = p;
  rec.entropy = entropy(p);
  rec.method = LabelMethod::kFallback;
  ++iteration_;
  return rec;
}

void GradualInference::infer_candidates(std::vector<Candidate>& candidates) const {
  auto work = [&](std::size_t i) {
    Candidate& c = candidates[i];
    c.sub = subgraph(c.unit);
    InferenceConfig ic = config_.inference;
    ic.seed = mix_seed(mix_seed(config_.seed, iteration_), c.unit);
    learn_weights(c.sub, ic);
    c.marginal = infer_marginal(c.sub, ic);
  };
  const std::size_t workers = std::min(threads_, candidates.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < candidates.size(); ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < candidates.size(); i += workers) work(i);
    });
  }
  for (auto& t : pool) t.join();
}

StepRecord GradualInference::step() {
  if (done()) throw std::logic_error("step: every unit is already labeled");

  // Top-m by support (descending, then unit id), among supported units.
  // Labeling zeroes a unit's support, so positive support implies unlabeled.
  std::vector<UnitId> pool;
  const double* support = support_.data();
  const auto n = static_cast<UnitId>(support_.size());
  for (UnitId u = 0; u < n; ++u) {
    if (support[u] > 0.0) pool.push_back(u);
  }
  if (pool.empty()) return fallback_step();
  auto by_support = [this](UnitId x, UnitId y) {
    if (support_[x] != support_[y]) return support_[x] > support_[y];
    return x < y;
  };
  const std::size_t m = std::min(config_.m, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m),
                    pool.end(), by_support);
  pool.resize(m);

  std::vector<RankKey> keys;
  keys.reserve(m);
  for (UnitId u : pool) keys.push_back(rank_key(u));
  std::sort(keys.begin(), keys.end());
  const std::size_t k = std::min(config_.k, keys.size());

  std::vector<Candidate> candidates(k);
  for (std::size_t i = 0; i < k; ++i) candidates[i].unit = keys[i].unit;
  infer_candidates(candidates);

  // Minimal entropy; earlier rank wins ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < k; ++i) {
    if (candidates[i].marginal.entropy < candidates[best].marginal.entropy) best = i;
  }
  const Candidate& chosen = candidates[best];
  const double p = chosen.marginal.probability;
  const Polarity value = p >= 0.5 ? Polarity::kPositive : Polarity::kNegative;
  write_back_weights(chosen.sub, graph_);
  label(chosen.unit, value, p, LabelMethod::kInferred);

  StepRecord rec;
  rec.iteration = iteration_;
  rec.unit = chosen.unit;
  rec.label = value;
  rec.probability = p;
  rec.entropy = chosen.marginal.entropy;
  rec.method = LabelMethod::kInferred;
  for (const auto& c : candidates) rec.candidates.push_back(c.unit);
  ++iteration_;
  return rec;
}

void GradualInference::run_to_completion() {
  while (!done()) step();
}

RunResult GradualInference::result() const {
  RunResult out;
  out.records = records_;
  out.easy = prepared_.easy.stats;
  out.iterations = iteration_;
  return out;
}

RunResult run(const Corpus& corpus, const Resources& resources,
              const EngineConfig& config) {
  auto start = std::chrono::steady_clock::now();
  GradualInference engine(corpus, resources, config);
  engine.run_to_completion();
  RunResult out = engine.result();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

// --- evaluation -------------------------------------------------------------

Metrics evaluate(std::span<const UnitRecord> records, const Corpus& corpus) {
  const auto units = enumerate_aspect_units(corpus);
  std::vector<const UnitRecord*> by_unit(units.size(), nullptr);
  std::vector<std::string> problems;
  auto note = [&problems](std::string id) {
    if (problems.size() < 10) problems.push_back(std::move(id));
  };
  std::size_t problem_count = 0;
  for (const auto& r : records) {
    if (r.unit_id >= units.size() || by_unit[r.unit_id] != nullptr) {
      note(std::to_string(r.unit_id));
      ++problem_count;
      continue;
    }
    const AspectUnit& u = units[r.unit_id];
    if ((!r.review_id.empty() && r.review_id != corpus.review_of(u).id) ||
        (!r.sentence_id.empty() && r.sentence_id != corpus.sentence_of(u).id) ||
        (!r.aspect_id.empty() && r.aspect_id != corpus.aspect_of(u).id)) {
      note(std::to_string(r.unit_id));
      ++problem_count;
      continue;
    }
    by_unit[r.unit_id] = &r;
  }
  for (UnitId u = 0; u < units.size(); ++u) {
    if (by_unit[u] == nullptr && problems.size() < 10 &&
        std::find(problems.begin(), problems.end(), std::to_string(u)) ==
            problems.end()) {
      note(std::to_string(u));
    }
    if (by_unit[u] == nullptr) ++problem_count;
  }
  if (problem_count > 0) {
    std::string msg = "predictions do not match the corpus units (" +
                      std::to_string(problem_count) + " mismatched; first ids:";
    for (const auto& id : problems) msg += " " + id;
    throw InputError(msg + ")");
  }

  Metrics m;
  m.units = units.size();
  std::size_t correct = 0;
  std::size_t easy_count = 0;
  // Labels in the order they were made: easy first, then by iteration.
  std::vector<std::pair<std::size_t, bool>> timeline;  // (iteration, correct)
  std::size_t easy_gold = 0;
  std::size_t easy_correct = 0;
  for (const auto& u : units) {
    const UnitRecord& r = *by_unit[u.unit_id];
    auto& mm = m.by_method[static_cast<std::size_t>(r.method)];
    ++mm.count;
    if (r.method == LabelMethod::kEasy) ++easy_count;
    if (r.iteration) m.iterations = std::max(m.iterations, *r.iteration + 1);
    const auto& gold = corpus.aspect_of(u).gold;
    if (!gold) continue;
    bool ok = *gold == r.predicted;
    ++m.gold;
    ++mm.gold;
    if (ok) {
      ++correct;
      ++mm.correct;
    }
    if (r.iteration) {
      timeline.emplace_back(*r.iteration, ok);
    } else {
      ++easy_gold;
      if (ok) ++easy_correct;
    }
  }
  if (m.gold > 0) m.accuracy = static_cast<double>(correct) / m.gold;
  for (auto& mm : m.by_method) {
    if (mm.gold > 0) mm.accuracy = static_cast<double>(mm.correct) / mm.gold;
  }
  m.easy_proportion =
      m.units == 0 ? 0.0 : static_cast<double>(easy_count) / m.units;
  m.easy_accuracy = m.by_method[static_cast<std::size_t>(LabelMethod::kEasy)].accuracy;

  std::sort(timeline.begin(), timeline.end());
  std::size_t seen = easy_gold;
  std::size_t right = easy_correct;
  std::size_t next = 0;
  for (std::size_t t = 0; t < m.iterations; ++t) {
    while (next < timeline.size() && timeline[next].first == t) {
      ++seen;
      if (timeline[next].second) ++right;
      ++next;
    }
    if (m.gold > 0) {
      m.trace.push_back(seen == 0 ? 0.0 : static_cast<double>(right) / seen);
    }
  }
  return m;
}

// --- benchmarking -----------------------------------------------------------

std::vector<BenchRow> bench_scaling(std::span<const std::size_t> sizes,
                                    const EngineConfig& config,
                                    SyntheticParams params) {
  if (sizes.empty()) throw InputError("bench: no sizes given");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw InputError("bench: size 0 is not a workload");
    if (i > 0 && sizes[i] <= sizes[i - 1]) {
      throw InputError("bench: sizes must be strictly ascending");
    }
  }
  Resources resources;
  resources.lexicon = synthetic_lexicon();
  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    params.n_units = n;
    Corpus corpus = generate_synthetic(params);
    RunResult r = run(corpus, resources, config);
    BenchRow row;
    row.size = n;
    row.total_seconds = r.seconds;
    row.seconds_per_label = r.iterations == 0 ? 0.0 : r.seconds / r.iterations;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gml
