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

#ifndef GML_TOOLS_CLI_H_
#define GML_TOOLS_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gml/engine.h"

namespace gml::cli {

struct Settings {
  EngineConfig engine;
  SyntheticParams synthetic;
  std::filesystem::path corpus;
  std::filesystem::path lexicon;
  std::filesystem::path connectives;
  std::filesystem::path embeddings;
  std::filesystem::path out;
  bool normalize_lexicon = false;
  double min_strength = Lexicon::kDefaultMinStrength;
};

// Applies a flat key=value config file ('#' comments). Throws InputError on an
// unknown key or a malformed value, naming the line.
void apply_config(Settings& settings, std::string_view text);

// Sets one key; returns false when the key is unknown. Throws InputError on a
// malformed value.
bool apply_setting(Settings& settings, std::string_view key, std::string_view value);

// Runs the `gml` command line. Returns 0 on success, 2 on usage or input
// errors and 1 on internal errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gml::cli

#endif  // GML_TOOLS_CLI_H_
