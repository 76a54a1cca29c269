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

#ifndef GML_REPORT_H_
#define GML_REPORT_H_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gml/engine.h"

namespace gml {

// One JSON object per line, ordered by unit id.
void write_predictions(std::ostream& out, std::span<const UnitRecord> records);
// Throws InputError naming the line of a malformed record.
std::vector<UnitRecord> parse_predictions(std::string_view text);

// Run metrics; wall-clock timing is kept under the "timing" key only.
nlohmann::json metrics_json(const Metrics& metrics);
nlohmann::json metrics_json(const Metrics& metrics, const RunResult& run);
nlohmann::json easy_stats_json(const EasyStats& stats);

// Features, support, masses and subgraph of one unit at the engine's current
// state.
nlohmann::json inspect_json(const GradualInference& engine, UnitId unit);
nlohmann::json subgraph_json(const Subgraph& sub);

// Corpus document in the loader's schema (tokens are re-derived on load).
nlohmann::json corpus_json(const Corpus& corpus);

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

}  // namespace gml

#endif  // GML_REPORT_H_
