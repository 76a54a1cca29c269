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

#include "cli.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>

#include "gml/errors.h"
#include "gml/report.h"

namespace gml::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw InputError("invalid value '" + std::string(value) + "' for " +
                     std::string(key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InputError("invalid boolean '" + std::string(value) + "' for " +
                   std::string(key));
}

std::vector<std::size_t> parse_sizes(std::string_view text) {
  std::vector<std::size_t> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = trim(text.substr(0, comma));
    out.push_back(parse_number<std::size_t>("--sizes", item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void require_file(const std::filesystem::path& path, std::string_view flag) {
  if (path.empty()) {
    throw InputError(std::string(flag) + " is required");
  }
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw InputError(std::string(flag) + ": file not found: " + path.string());
  }
}

// Options shared by every subcommand; values stay unset unless given.
struct Flags {
  std::string corpus, lexicon, connectives, embeddings, config, out, predictions,
      sizes;
  std::uint64_t seed = 0;
  std::size_t m = 0, k = 0, unit = 0, n = 0;
  double df = 0, dfp = 0;
  std::vector<std::pair<CLI::Option*, std::function<void(Settings&)>>> setters;

  template <typename T>
  void add(CLI::App* app, const std::string& name, T& target, const std::string& help,
           std::function<void(Settings&)> apply) {
    setters.emplace_back(app->add_option(name, target, help), std::move(apply));
  }

  void apply(Settings& s) const {
    for (const auto& [opt, fn] : setters) {
      if (opt->count() > 0) fn(s);
    }
  }
};

void add_resource_flags(CLI::App* app, Flags& f, bool lexicon) {
  f.add(app, "--corpus", f.corpus, "corpus JSON file",
        [&f](Settings& s) { s.corpus = f.corpus; });
  if (lexicon) {
    f.add(app, "--lexicon", f.lexicon, "sentiment lexicon TSV",
          [&f](Settings& s) { s.lexicon = f.lexicon; });
    f.add(app, "--connectives", f.connectives, "connective lists (INI)",
          [&f](Settings& s) { s.connectives = f.connectives; });
    f.add(app, "--embeddings", f.embeddings, "word vectors (text format)",
          [&f](Settings& s) { s.embeddings = f.embeddings; });
  }
}

void add_engine_flags(CLI::App* app, Flags& f) {
  f.add(app, "--seed", f.seed, "random seed", [&f](Settings& s) {
    s.engine.seed = f.seed;
    s.synthetic.seed = f.seed;
  });
  f.add(app, "--m", f.m, "candidates by evidential support",
        [&f](Settings& s) { s.engine.m = f.m; });
  f.add(app, "--k", f.k, "candidates inferred per iteration",
        [&f](Settings& s) { s.engine.k = f.k; });
  f.add(app, "--df", f.df, "word-feature uncertainty (support and certainty)",
        [&f](Settings& s) {
          s.engine.uncertainty.d_f = f.df;
          s.engine.uncertainty.d_f_star = f.df;
        });
  f.add(app, "--dfp", f.dfp, "relational-feature uncertainty (support and certainty)",
        [&f](Settings& s) {
          s.engine.uncertainty.d_fp = f.dfp;
          s.engine.uncertainty.d_fp_star = f.dfp;
        });
}

Resources load_resources(const Settings& s) {
  require_file(s.lexicon, "--lexicon");
  Resources r;
  r.lexicon = load_lexicon(s.lexicon, s.normalize_lexicon, s.min_strength);
  for (const auto& w : r.lexicon.warnings()) std::cerr << "warning: " << w << '\n';
  if (!s.connectives.empty()) {
    require_file(s.connectives, "--connectives");
    r.connectives = load_connectives(s.connectives);
  }
  if (!s.embeddings.empty()) {
    require_file(s.embeddings, "--embeddings");
    r.embeddings = load_embeddings(s.embeddings);
  }
  return r;
}

Corpus load_corpus_flag(const Settings& s) {
  require_file(s.corpus, "--corpus");
  return load_corpus(s.corpus);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
  if (!f) throw InputError("cannot write " + path.string());
}

// Writes to --out when given, else to `out`.
void emit(const Settings& s, std::ostream& out, const std::string& text) {
  if (s.out.empty()) {
    out << text;
  } else {
    write_text(s.out, text);
  }
}

int cmd_label(const Settings& s, std::ostream& out) {
  Corpus corpus = load_corpus_flag(s);
  Resources resources = load_resources(s);
  if (s.out.empty()) throw InputError("--out is required (output directory)");
  RunResult result = run(corpus, resources, s.engine);
  Metrics metrics = evaluate(result.records, corpus);

  std::filesystem::create_directories(s.out);
  std::ostringstream preds;
  write_predictions(preds, result.records);
  write_text(s.out / "predictions.jsonl", preds.str());
  write_text(s.out / "metrics.json", metrics_json(metrics, result).dump(2) + "\n");
  out << "labeled " << result.records.size() << " units (" << result.easy.easy
      << " easy, " << result.iterations << " gradual) -> " << s.out.string() << '\n';
  return 0;
}

int cmd_evaluate(const Settings& s, const std::string& predictions,
                 std::ostream& out) {
  if (predictions.empty()) throw InputError("--predictions is required");
  require_file(predictions, "--predictions");
  Corpus corpus = load_corpus_flag(s);
  auto records = parse_predictions(read_file(predictions));
  Metrics metrics = evaluate(records, corpus);
  emit(s, out, metrics_json(metrics).dump(2) + "\n");
  return 0;
}

int cmd_bench(const Settings& s, const std::string& sizes, std::ostream& out) {
  if (sizes.empty()) throw InputError("--sizes is required (e.g. 1000,2000,4000)");
  auto list = parse_sizes(sizes);
  s.engine.validate();
  auto rows = bench_scaling(list, s.engine, s.synthetic);
  std::ostringstream csv;
  write_bench_csv(csv, rows);
  emit(s, out, csv.str());
  return 0;
}

int cmd_easy_stats(const Settings& s, std::ostream& out) {
  Corpus corpus = load_corpus_flag(s);
  Resources resources = load_resources(s);
  s.engine.validate();
  Prepared p = prepare(corpus, resources, s.engine, /*require_evidence=*/false);
  emit(s, out, easy_stats_json(p.easy.stats).dump(2) + "\n");
  return 0;
}

int cmd_inspect(const Settings& s, std::size_t unit, std::ostream& out) {
  Corpus corpus = load_corpus_flag(s);
  Resources resources = load_resources(s);
  GradualInference engine(corpus, resources, s.engine);
  emit(s, out, inspect_json(engine, static_cast<UnitId>(unit)).dump(2) + "\n");
  return 0;
}

int cmd_generate(const Settings& s, std::ostream& out) {
  Corpus corpus = generate_synthetic(s.synthetic);
  emit(s, out, corpus_json(corpus).dump(1) + "\n");
  return 0;
}

}  // namespace

bool apply_setting(Settings& s, std::string_view key, std::string_view value) {
  auto num = [&](auto& field) {
    field = parse_number<std::remove_reference_t<decltype(field)>>(key, value);
  };
  auto& e = s.engine;
  if (key == "m") num(e.m);
  else if (key == "k") num(e.k);
  else if (key == "seed") { num(e.seed); s.synthetic.seed = e.seed; }
  else if (key == "d_f") num(e.uncertainty.d_f);
  else if (key == "d_fp") num(e.uncertainty.d_fp);
  else if (key == "d_f_star") num(e.uncertainty.d_f_star);
  else if (key == "d_fp_star") num(e.uncertainty.d_fp_star);
  else if (key == "burn_in_sweeps") num(e.inference.burn_in_sweeps);
  else if (key == "sample_sweeps") num(e.inference.sample_sweeps);
  else if (key == "learning_epochs") num(e.inference.learning_epochs);
  else if (key == "cd_sweeps") num(e.inference.cd_sweeps);
  else if (key == "step_size") num(e.inference.step_size);
  else if (key == "l2") num(e.inference.l2);
  else if (key == "weight_clamp") num(e.inference.weight_clamp);
  else if (key == "init_word") num(e.init.word);
  else if (key == "init_similar") num(e.init.similar);
  else if (key == "init_opposite") num(e.init.opposite);
  else if (key == "sim_threshold") num(e.sim_threshold);
  else if (key == "kgram_max") num(e.kgram_max);
  else if (key == "negation_window") num(e.negation_window);
  else if (key == "hops") num(e.hops);
  else if (key == "subgraph_cap") num(e.subgraph_cap);
  else if (key == "threads") num(e.threads);
  else if (key == "normalize_lexicon") s.normalize_lexicon = parse_bool(key, value);
  else if (key == "min_strength") num(s.min_strength);
  else if (key == "n_units") num(s.synthetic.n_units);
  else if (key == "easy_fraction") num(s.synthetic.easy_fraction);
  else if (key == "relation_density") num(s.synthetic.relation_density);
  else if (key == "noise") num(s.synthetic.noise);
  else if (key == "corpus") s.corpus = std::string(value);
  else if (key == "lexicon") s.lexicon = std::string(value);
  else if (key == "connectives") s.connectives = std::string(value);
  else if (key == "embeddings") s.embeddings = std::string(value);
  else if (key == "out") s.out = std::string(value);
  else return false;
  return true;
}

void apply_config(Settings& s, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    auto where = "config line " + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw InputError(where + ": expected key=value");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    try {
      if (!apply_setting(s, key, value)) {
        throw InputError("unknown key '" + std::string(key) + "'");
      }
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gradual machine learning for aspect-level sentiment analysis", "gml"};
  app.require_subcommand(1);

  Flags f;
  auto* label = app.add_subcommand("label", "label every aspect unit of a corpus");
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "score a predictions file against gold labels");
  auto* bench = app.add_subcommand("bench", "runtime on synthetic workloads (CSV)");
  auto* easy = app.add_subcommand("easy-stats", "easy-instance proportion and accuracy");
  auto* inspect = app.add_subcommand("inspect", "features, masses and subgraph of a unit");
  auto* generate = app.add_subcommand("generate", "write a synthetic corpus");

  for (auto* sub : {label, evaluate_cmd, bench, easy, inspect, generate}) {
    sub->add_option("--config", f.config, "key=value config file");
    f.add(sub, "--out", f.out, "output path",
          [&f](Settings& s) { s.out = f.out; });
  }
  for (auto* sub : {label, easy, inspect}) {
    add_resource_flags(sub, f, true);
    add_engine_flags(sub, f);
  }
  add_resource_flags(evaluate_cmd, f, false);
  evaluate_cmd->add_option("--predictions", f.predictions, "predictions JSONL");
  add_engine_flags(bench, f);
  bench->add_option("--sizes", f.sizes, "comma-separated ascending unit counts");
  inspect->add_option("--unit", f.unit, "unit id")->required();
  f.add(generate, "--seed", f.seed, "random seed",
        [&f](Settings& s) { s.synthetic.seed = f.seed; });
  f.add(generate, "--n", f.n, "number of aspect units",
        [&f](Settings& s) { s.synthetic.n_units = f.n; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Settings s;
    if (!f.config.empty()) {
      require_file(f.config, "--config");
      apply_config(s, read_file(f.config));
    }
    f.apply(s);

    if (label->parsed()) return cmd_label(s, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(s, f.predictions, out);
    if (bench->parsed()) return cmd_bench(s, f.sizes, out);
    if (easy->parsed()) return cmd_easy_stats(s, out);
    if (inspect->parsed()) return cmd_inspect(s, f.unit, out);
    if (generate->parsed()) return cmd_generate(s, out);
    err << "gml: no subcommand given\n";
    return 2;
  } catch (const InputError& e) {
    err << "gml: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "gml: internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace gml::cli
