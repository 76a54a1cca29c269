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

#include "gml/inference.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "gml/errors.h"

namespace gml {
namespace {

using Index = Subgraph::Index;

constexpr std::uint64_t kLearnStream = 0x6c6561726eULL;
constexpr std::uint64_t kInferStream = 0x696e666572ULL;

// Conditional logits over a fixed set of variables, with each variable's
// word-weight sum cached; refresh() after the word weights change. Only
// `factors` enter the word sums, so variables they do not cover read as 0.
class Kernel {
 public:
  Kernel(const Subgraph& sub, std::vector<Subgraph::WordFactor> factors,
         std::span<const Index> vars)
      : sub_(sub), factors_(std::move(factors)), word_sum_(sub.variable_count()) {
    offsets_.assign(sub.variable_count() + 1, 0);
    for (Index v : vars) offsets_[v + 1] = static_cast<Index>(sub.relations_of(v).size());
    for (std::size_t v = 0; v < sub.variable_count(); ++v) offsets_[v + 1] += offsets_[v];
    neighbours_.resize(offsets_.back());
    for (Index v : vars) {
      Index at = offsets_[v];
      for (Index ri : sub.relations_of(v)) {
        const auto& r = sub.relation_factors()[ri];
        neighbours_[at++] = {r.a == v ? r.b : r.a, r.kind};
      }
    }
    refresh();
  }

  void refresh() {
    std::fill(word_sum_.begin(), word_sum_.end(), 0.0);
    const auto weights = sub_.word_weights();
    for (const auto& f : factors_) word_sum_[f.var] += weights[f.weight];
    relation_weight_ = {sub_.relation_weight(RelationKind::kSimilar),
                        sub_.relation_weight(RelationKind::kOpposite)};
  }

  std::span<const Subgraph::WordFactor> factors() const { return factors_; }

  double logit(Index v, std::span<const std::uint8_t> state) const {
    double l = word_sum_[v];
    for (Index i = offsets_[v]; i < offsets_[v + 1]; ++i) {
      const Neighbour& n = neighbours_[i];
      double w = relation_weight_[static_cast<std::size_t>(n.kind)];
      l += state[n.other] ? w : -w;
    }
    return l;
  }

  double probability(Index v, std::span<const std::uint8_t> state) const {
    return sigmoid(logit(v, state));
  }

  // Swendsen-Wang move over `vars` (free variables whose relational
  // neighbours are in `vars` or evidence): bond each satisfied relational
  // factor with probability 1 - e^-|w|, then redraw every bond cluster as a
  // block from its word-factor field. Clusters bonded to evidence stay put.
  void cluster_move(std::span<const Index> vars, std::vector<std::uint8_t>& state,
                    Rng& rng) {
    parent_.resize(state.size());
    frozen_.assign(state.size(), 0);
    flip_gain_.assign(state.size(), 0.0);
    for (Index v : vars) parent_[v] = v;
    const double bond[2] = {-std::expm1(-std::abs(relation_weight_[0])),
                            -std::expm1(-std::abs(relation_weight_[1]))};
    for (Index v : vars) {
      for (Index i = offsets_[v]; i < offsets_[v + 1]; ++i) {
        const Neighbour& n = neighbours_[i];
        const bool evidence = !sub_.is_free(n.other);
        if (!evidence && n.other < v) continue;  // each pair once
        const auto k = static_cast<std::size_t>(n.kind);
        const bool equal = state[v] == state[n.other];
        const bool satisfied = relation_weight_[k] >= 0.0 ? equal : !equal;
        if (!satisfied || !rng.bernoulli(bond[k])) continue;
        if (evidence) {
          frozen_[find(v)] = 1;
        } else {
          Index a = find(v), b = find(n.other);
          if (a != b) {
            parent_[a] = b;
            frozen_[b] |= frozen_[a];
          }
        }
      }
    }
    for (Index v : vars) {
      flip_gain_[find(v)] += state[v] ? -word_sum_[v] : word_sum_[v];
    }
    for (Index v : vars) {
      if (parent_[v] == v && !frozen_[v] && rng.bernoulli(sigmoid(flip_gain_[v]))) {
        frozen_[v] = 2;
      }
    }
    for (Index v : vars) {
      if (frozen_[find(v)] == 2) state[v] ^= 1;
    }
  }

 private:
  Index find(Index v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }

  struct Neighbour {
    Index other;
    RelationKind kind;
  };
  const Subgraph& sub_;
  std::vector<Subgraph::WordFactor> factors_;
  std::vector<double> word_sum_;
  std::vector<Index> offsets_;
  std::vector<Neighbour> neighbours_;
  std::array<double, 2> relation_weight_{};
  std::vector<Index> parent_;
  std::vector<std::uint8_t> frozen_;  // on cluster roots: 1 bonded to evidence, 2 flip
  std::vector<double> flip_gain_;
};

void sweep(const Kernel& kernel, std::span<const Index> vars,
           std::vector<std::uint8_t>& state, Rng& rng) {
  for (Index v : vars) state[v] = rng.bernoulli(kernel.probability(v, state)) ? 1 : 0;
}

// Evidence takes its value; free variables in `sampled` start at a fair coin
// flip. Other free variables start at 0: their state is never read.
std::vector<std::uint8_t> initial_state(const Subgraph& sub,
                                        std::span<const Index> sampled, Rng& rng) {
  std::vector<std::uint8_t> state(sub.variable_count(), 0);
  for (Index v = 0; v < state.size(); ++v) {
    if (!sub.is_free(v)) state[v] = static_cast<std::uint8_t>(sub.evidence(v));
  }
  for (Index v : sampled) {
    if (sub.is_free(v)) state[v] = rng.bernoulli(0.5) ? 1 : 0;
  }
  return state;
}

// Expected number of agreeing pairs of each relation kind under `state`, with
// free endpoints replaced by their conditional probability `p`.
std::array<double, 2> relation_agreement(const Subgraph& sub,
                                         std::span<const std::uint8_t> state,
                                         std::span<const double> p,
                                         bool clamp_evidence) {
  std::array<double, 2> out{};
  auto free = [&](Index v) { return !clamp_evidence || sub.is_free(v); };
  for (const auto& r : sub.relation_factors()) {
    double agree;
    if (free(r.a)) {
      agree = state[r.b] ? p[r.a] : 1.0 - p[r.a];
    } else if (free(r.b)) {
      agree = state[r.a] ? p[r.b] : 1.0 - p[r.b];
    } else {
      agree = state[r.a] == state[r.b] ? 1.0 : 0.0;
    }
    out[static_cast<std::size_t>(r.kind)] += agree;
  }
  return out;
}

}  // namespace

void InferenceConfig::validate() const {
  if (burn_in_sweeps == 0 || sample_sweeps == 0 || learning_epochs == 0 ||
      cd_sweeps == 0) {
    throw InputError("inference sweep and epoch counts must be positive");
  }
  if (!(weight_clamp > 0.0)) throw InputError("weight_clamp must be > 0");
  if (!(step_size > 0.0)) throw InputError("step_size must be > 0");
  if (!(l2 >= 0.0)) throw InputError("l2 must be >= 0");
}

void learn_weights(Subgraph& sub, const InferenceConfig& config) {
  if (sub.word_factors().empty() && sub.relation_factors().empty()) return;

  // Only variables with relational factors are sampled. Statistics use
  // conditional probabilities, so the state of a variable with word factors
  // alone is never read, and its conditional is the same in both chains: a
  // free one contributes nothing to the gradient and is skipped entirely.
  std::vector<Index> linked_free;
  std::vector<Index> linked;
  std::vector<Index> isolated_evidence;
  std::vector<std::uint8_t> active(sub.variable_count(), 0);
  for (Index v = 0; v < sub.variable_count(); ++v) {
    if (sub.relations_of(v).empty()) {
      if (sub.is_free(v)) continue;
      isolated_evidence.push_back(v);
    } else {
      linked.push_back(v);
      if (sub.is_free(v)) linked_free.push_back(v);
    }
    active[v] = 1;
  }
  std::vector<Subgraph::WordFactor> factors;
  for (const auto& f : sub.word_factors()) {
    if (active[f.var]) factors.push_back(f);
  }
  const bool learn_similar = sub.has_relation_kind(RelationKind::kSimilar);
  const bool learn_opposite = sub.has_relation_kind(RelationKind::kOpposite);

  Rng rng(mix_seed(config.seed, kLearnStream));
  Kernel kernel(sub, std::move(factors), linked);
  std::vector<std::uint8_t> clamped = initial_state(sub, linked, rng);
  std::vector<std::uint8_t> free_chain;
  // Conditional P(v = 1) in the clamped chain (evidence keeps its value) and
  // in the free chain.
  std::vector<double> p_clamped(sub.variable_count());
  std::vector<double> p_free(sub.variable_count());
  std::vector<double> grad(sub.word_weights().size());
  const double clamp = config.weight_clamp;

  for (std::size_t epoch = 0; epoch < config.learning_epochs; ++epoch) {
    for (std::size_t s = 0; s < config.cd_sweeps; ++s) {
      sweep(kernel, linked_free, clamped, rng);
    }
    free_chain = clamped;
    for (std::size_t s = 0; s < config.cd_sweeps; ++s) {
      sweep(kernel, linked, free_chain, rng);
    }

    for (Index v : isolated_evidence) {
      p_free[v] = kernel.probability(v, clamped);
      p_clamped[v] = static_cast<double>(sub.evidence(v));
    }
    for (Index v : linked) {
      p_clamped[v] = sub.is_free(v) ? kernel.probability(v, clamped)
                                    : static_cast<double>(sub.evidence(v));
      p_free[v] = kernel.probability(v, free_chain);
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const auto& f : kernel.factors()) {
      grad[f.weight] += p_clamped[f.var] - p_free[f.var];
    }
    auto rel_pos = relation_agreement(sub, clamped, p_clamped, /*clamp_evidence=*/true);
    auto rel_neg = relation_agreement(sub, free_chain, p_free, /*clamp_evidence=*/false);

    auto weights = sub.word_weights();
    for (std::size_t i = 0; i < weights.size(); ++i) {
      double g = grad[i] - config.l2 * weights[i];
      weights[i] = std::clamp(weights[i] + config.step_size * g, -clamp, clamp);
    }
    if (learn_similar) {
      double w = sub.relation_weight(RelationKind::kSimilar);
      double g = rel_pos[0] - rel_neg[0] - config.l2 * w;
      sub.set_relation_weight(RelationKind::kSimilar,
                              std::clamp(w + config.step_size * g, 0.0, clamp));
    }
    if (learn_opposite) {
      double w = sub.relation_weight(RelationKind::kOpposite);
      double g = rel_pos[1] - rel_neg[1] - config.l2 * w;
      sub.set_relation_weight(RelationKind::kOpposite,
                              std::clamp(w + config.step_size * g, -clamp, 0.0));
    }
    kernel.refresh();
  }
}

MarginalResult infer_marginal(const Subgraph& sub, const InferenceConfig& config) {
  MarginalResult result;
  result.word_weights.assign(sub.word_weights().begin(), sub.word_weights().end());
  result.relation_weights = {sub.relation_weight(RelationKind::kSimilar),
                             sub.relation_weight(RelationKind::kOpposite)};
  const Index target = sub.target();

  if (!sub.is_free(target)) {
    result.probability = static_cast<double>(sub.evidence(target));
    result.entropy = 0.0;
    return result;
  }

  // Free variables connected to the target through relational factors.
  std::vector<Index> component{target};
  std::vector<bool> seen(sub.variable_count(), false);
  seen[target] = true;
  for (std::size_t head = 0; head < component.size(); ++head) {
    for (Index ri : sub.relations_of(component[head])) {
      const auto& r = sub.relation_factors()[ri];
      Index other = r.a == component[head] ? r.b : r.a;
      if (!seen[other] && sub.is_free(other)) {
        seen[other] = true;
        component.push_back(other);
      }
    }
  }

  Rng rng(mix_seed(config.seed, kInferStream));
  std::vector<std::uint8_t> state = initial_state(sub, component, rng);
  std::vector<Subgraph::WordFactor> factors;
  for (const auto& f : sub.word_factors()) {
    if (seen[f.var]) factors.push_back(f);
  }
  Kernel kernel(sub, std::move(factors), component);

  if (component.size() == 1) {
    // The target's conditional does not depend on any sampled variable.
    result.probability = kernel.probability(target, state);
  } else {
    // Each sweep is a cluster move followed by single-site updates.
    for (std::size_t s = 0; s < config.burn_in_sweeps; ++s) {
      kernel.cluster_move(component, state, rng);
      sweep(kernel, component, state, rng);
    }
    double sum = 0.0;
    for (std::size_t s = 0; s < config.sample_sweeps; ++s) {
      kernel.cluster_move(component, state, rng);
      for (Index v : component) {
        double p = kernel.probability(v, state);
        if (v == target) sum += p;
        state[v] = rng.bernoulli(p) ? 1 : 0;
      }
    }
    result.probability = sum / static_cast<double>(config.sample_sweeps);
  }
  result.probability = std::clamp(result.probability, 0.0, 1.0);
  result.entropy = entropy(result.probability);
  return result;
}

double exact_marginal(const Subgraph& sub, std::size_t max_free) {
  const Index target = sub.target();
  if (!sub.is_free(target)) return static_cast<double>(sub.evidence(target));

  std::vector<Index> free_vars;
  std::vector<std::uint8_t> assignment(sub.variable_count());
  for (Index v = 0; v < sub.variable_count(); ++v) {
    if (sub.is_free(v)) {
      free_vars.push_back(v);
    } else {
      assignment[v] = static_cast<std::uint8_t>(sub.evidence(v));
    }
  }
  if (free_vars.size() > max_free) {
    throw std::length_error("exact_marginal: " + std::to_string(free_vars.size()) +
                            " free variables exceed the limit of " +
                            std::to_string(max_free));
  }

  // Log-sum-exp over all assignments, split by the target's value.
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double log_total = neg_inf;
  double log_positive = neg_inf;
  auto accumulate = [](double acc, double x) {
    if (acc == -std::numeric_limits<double>::infinity()) return x;
    double hi = std::max(acc, x);
    return hi + std::log(std::exp(acc - hi) + std::exp(x - hi));
  };
  const std::uint64_t count = std::uint64_t{1} << free_vars.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (std::size_t i = 0; i < free_vars.size(); ++i) {
      assignment[free_vars[i]] = (mask >> i) & 1u;
    }
    double score = sub.log_score(assignment);
    log_total = accumulate(log_total, score);
    if (assignment[target]) log_positive = accumulate(log_positive, score);
  }
  return std::exp(log_positive - log_total);
}

}  // namespace gml
