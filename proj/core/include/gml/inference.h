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

#ifndef GML_INFERENCE_H_
#define GML_INFERENCE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "gml/factor_graph.h"
#include "gml/numeric.h"

namespace gml {

struct InferenceConfig {
  std::size_t burn_in_sweeps = 100;
  std::size_t sample_sweeps = 1000;
  std::size_t learning_epochs = 5;
  // Gibbs sweeps per chain per learning epoch (the "k" of CD-k).
  std::size_t cd_sweeps = 1;
  double step_size = 0.01;
  double l2 = 0.01;
  double weight_clamp = 10.0;
  std::uint64_t seed = 0;

  // Throws InputError on non-positive counts or clamp.
  void validate() const;
};

struct MarginalResult {
  double probability = 0.5;
  double entropy = 0.0;
  std::vector<double> word_weights;
  std::array<double, 2> relation_weights{};
};

// Contrastive-divergence estimate of the maximum marginal likelihood weights:
// each epoch contrasts sufficient statistics of an evidence-clamped chain with
// a free chain started from it, then takes an L2-regularised gradient step.
// Word weights are learned individually; relational weights are tied per kind
// and kept at sign (similar >= 0 >= opposite). Deterministic given the seed.
void learn_weights(Subgraph& sub, const InferenceConfig& config);

// Target marginal by Gibbs sampling with evidence clamped: the average over
// post-burn-in sweeps of P(target = 1 | current neighbours), i.e. the
// Rao-Blackwellised frequency of target = 1. Only the target's component (free
// variables reachable through relational factors) is sampled; the rest of the
// subgraph is independent of the target. Each sweep starts with a
// Swendsen-Wang cluster move, so strongly tied variables change together.
MarginalResult infer_marginal(const Subgraph& sub, const InferenceConfig& config);

inline constexpr std::size_t kMaxExactFreeVariables = 15;

// Target marginal by enumerating every assignment of the free variables.
// Throws std::length_error when more than `max_free` variables are free.
double exact_marginal(const Subgraph& sub,
                      std::size_t max_free = kMaxExactFreeVariables);

}  // namespace gml

#endif  // GML_INFERENCE_H_
