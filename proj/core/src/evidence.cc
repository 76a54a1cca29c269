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

#include "gml/evidence.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <stdexcept>
#include <string>

#include "gml/errors.h"
#include "gml/numeric.h"

namespace gml {
namespace {

void check_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error(std::string(what) + " must be in (0, 1), got " +
                            std::to_string(x));
  }
}

void check_discount(double d) {
  if (!(d > 0.0 && d <= 1.0)) {
    throw std::domain_error("uncertainty must be in (0, 1], got " +
                            std::to_string(d));
  }
}

Mass split(Frame frame, double x, double d) {
  return Mass{frame, (1.0 - d) * x, (1.0 - d) * (1.0 - x), d, 0.0};
}

}  // namespace

double Mass::pignistic_entropy() const {
  return entropy(std::clamp(a + both / 2.0, 0.0, 1.0));
}

Mass word_support_mass(double p, double d) {
  check_open_unit(p, "P(f)");
  check_discount(d);
  return split(Frame::kSupport, std::max(p, 1.0 - p), d);
}

Mass relation_support_mass(double accuracy, double d) {
  check_open_unit(accuracy, "relation accuracy");
  check_discount(d);
  return split(Frame::kSupport, accuracy, d);
}

Mass word_certainty_mass(double p, double d) {
  check_open_unit(p, "P(f)");
  check_discount(d);
  return split(Frame::kCertainty, p, d);
}

Mass relation_certainty_mass(double weight, Polarity labeled_endpoint, double d) {
  check_discount(d);
  double p = sigmoid(weight);
  if (labeled_endpoint == Polarity::kNegative) p = 1.0 - p;
  return split(Frame::kCertainty, p, d);
}

Mass combine(const Mass& m1, const Mass& m2) {
  if (m1.frame != m2.frame) {
    throw std::invalid_argument("combine: masses are over different frames");
  }
  const double k = m1.a * m2.b + m1.b * m2.a;
  const double norm = 1.0 - k;
  if (!(norm > 0.0)) throw TotalConflictError("combine: total conflict (K = 1)");
  Mass out;
  out.frame = m1.frame;
  out.a = (m1.a * m2.a + m1.a * m2.both + m1.both * m2.a) / norm;
  out.b = (m1.b * m2.b + m1.b * m2.both + m1.both * m2.b) / norm;
  out.both = m1.both * m2.both / norm;
  out.conflict = 1.0 - (1.0 - m1.conflict) * (1.0 - m2.conflict) * (1.0 - k);
  return out;
}

void UncertaintyParams::validate() const {
  for (auto [name, v] : {std::pair{"d_f", d_f}, std::pair{"d_fp", d_fp},
                         std::pair{"d_f_star", d_f_star},
                         std::pair{"d_fp_star", d_fp_star}}) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw InputError(std::string(name) + " must be in (0, 1], got " +
                       std::to_string(v));
    }
  }
}

ObservedEvidence observe(const FeatureStats& stats,
                         std::span<const FeatureId> unit_features,
                         std::span<const RelationalFeature> relations,
                         std::span<const std::size_t> unit_relations, UnitId unit,
                         const LabelMap& labels,
                         std::array<double, 2> relation_weights) {
  ObservedEvidence ev;
  for (FeatureId f : unit_features) {
    if (stats.observed(f)) ev.word_p.push_back(stats.p(f));
  }
  for (std::size_t ri : unit_relations) {
    const auto& r = relations[ri];
    const auto& other = labels[r.other(unit)];
    if (!other) continue;
    ev.relations.push_back({r.kind, stats.r(r.kind),
                            relation_weights[static_cast<std::size_t>(r.kind)],
                            *other});
  }
  return ev;
}

SupportResult evidential_support(const ObservedEvidence& evidence,
                                 const UncertaintyParams& params) {
  SupportResult out;
  try {
    for (double p : evidence.word_p) {
      out.mass = combine(out.mass, word_support_mass(p, params.d_f));
    }
    for (const auto& r : evidence.relations) {
      out.mass = combine(out.mass, relation_support_mass(r.accuracy, params.d_fp));
    }
  } catch (const TotalConflictError&) {
    out.total_conflict = true;
    out.mass = Mass::vacuous(Frame::kSupport);
    out.score = 0.0;
    return out;
  }
  out.score = out.mass.a;
  return out;
}

Mass certainty_masses(const ObservedEvidence& evidence,
                      const UncertaintyParams& params) {
  Mass m = Mass::vacuous(Frame::kCertainty);
  for (double p : evidence.word_p) {
    m = combine(m, word_certainty_mass(p, params.d_f_star));
  }
  for (const auto& r : evidence.relations) {
    m = combine(m, relation_certainty_mass(r.weight, r.other, params.d_fp_star));
  }
  return m;
}

RankKey conflict_rank_key(UnitId unit, const Mass& certainty) {
  return RankKey{certainty.conflict, certainty.pignistic_entropy(), unit};
}

RankKey max_uncertainty_key(UnitId unit) {
  return RankKey{1.0, std::log(2.0), unit};
}

}  // namespace gml
