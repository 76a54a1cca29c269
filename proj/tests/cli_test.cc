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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "gml/errors.h"
#include "gml/report.h"

namespace gml::cli {
namespace {

namespace fs = std::filesystem;

std::string res(const std::string& name) {
  return (fs::path(GML_RESOURCE_DIR) / name).string();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gml_cli_" + std::string(::testing::UnitTest::GetInstance()
                                         ->current_test_info()
                                         ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int gml(std::vector<std::string> args) {
    args.insert(args.begin(), "gml");
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  std::vector<std::string> running(std::string sub) {
    return {std::move(sub), "--corpus", res("running_example.json"), "--lexicon",
            res("lexicon.tsv"), "--embeddings", res("embeddings.txt")};
  }

  fs::path write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, LabelWritesPredictionsAndMetrics) {
  auto args = running("label");
  args.insert(args.end(), {"--out", (dir_ / "run").string()});
  ASSERT_EQ(gml(args), 0) << err_.str();
  auto preds = parse_predictions(read_file(dir_ / "run" / "predictions.jsonl"));
  EXPECT_EQ(preds.size(), 4u);
  auto metrics = nlohmann::json::parse(read_file(dir_ / "run" / "metrics.json"));
  EXPECT_EQ(metrics["accuracy"], 1.0);
  EXPECT_TRUE(metrics.contains("timing"));

  // evaluate reproduces the metrics apart from timing.
  ASSERT_EQ(gml({"evaluate", "--corpus", res("running_example.json"), "--predictions",
                 (dir_ / "run" / "predictions.jsonl").string()}),
            0)
      << err_.str();
  metrics.erase("timing");
  EXPECT_EQ(nlohmann::json::parse(out_.str()), metrics);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(gml({}), 2);
  EXPECT_EQ(gml({"frobnicate"}), 2);
  EXPECT_EQ(gml({"label", "--bogus"}), 2);
  EXPECT_EQ(gml({"inspect", "--corpus", res("running_example.json")}), 2);
  EXPECT_EQ(gml({"help"}), 2);
  EXPECT_EQ(gml({"--help"}), 0);
}

TEST_F(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(gml({"label", "--corpus", res("running_example.json")}), 2);
  EXPECT_NE(err_.str().find("--lexicon"), std::string::npos);
  auto missing = running("label");
  missing[2] = (dir_ / "nope.json").string();
  missing.insert(missing.end(), {"--out", dir_.string()});
  EXPECT_EQ(gml(missing), 2);
  EXPECT_NE(err_.str().find("not found"), std::string::npos);

  auto no_emb = running("label");
  no_emb.resize(5);
  no_emb.insert(no_emb.end(), {"--out", dir_.string()});
  EXPECT_EQ(gml(no_emb), 2);
  EXPECT_NE(err_.str().find("embeddings"), std::string::npos);

  auto bad_k = running("label");
  bad_k.insert(bad_k.end(), {"--out", dir_.string(), "--k", "50"});
  EXPECT_EQ(gml(bad_k), 2);

  EXPECT_EQ(gml({"bench", "--sizes", "20,10"}), 2);
  EXPECT_EQ(gml({"bench", "--sizes", "ten"}), 2);
}

TEST_F(Cli, EvaluateMismatchExitsTwo) {
  fs::path preds = write("p.jsonl",
                         R"({"unit_id":0,"predicted":"positive","method":"easy"})"
                         "\n");
  EXPECT_EQ(gml({"evaluate", "--corpus", res("running_example.json"), "--predictions",
                 preds.string()}),
            2);
  EXPECT_NE(err_.str().find("mismatched"), std::string::npos);
}

TEST_F(Cli, InternalErrorsExitOne) {
  fs::path file = write("plain", "x");
  auto args = running("label");
  args.insert(args.end(), {"--out", (file / "sub").string()});
  EXPECT_EQ(gml(args), 1) << err_.str();
}

TEST_F(Cli, ConfigRejectsUnknownKeys) {
  fs::path cfg = write("gml.conf", "m = 20\nwarp = 9\n");
  auto args = running("easy-stats");
  args.insert(args.end(), {"--config", cfg.string()});
  EXPECT_EQ(gml(args), 2);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos);
  EXPECT_NE(err_.str().find("warp"), std::string::npos);
}

TEST(Config, FileValuesAndComments) {
  Settings s;
  apply_config(s, "# tuning\nm = 40\nk=5\n\nd_f = 0.3\nnormalize_lexicon = yes\n");
  EXPECT_EQ(s.engine.m, 40u);
  EXPECT_EQ(s.engine.k, 5u);
  EXPECT_EQ(s.engine.uncertainty.d_f, 0.3);
  EXPECT_TRUE(s.normalize_lexicon);
  EXPECT_THROW(apply_config(s, "m 3\n"), InputError);
  EXPECT_THROW(apply_config(s, "m = three\n"), InputError);
  EXPECT_THROW(apply_config(s, "normalize_lexicon = maybe\n"), InputError);
  EXPECT_FALSE(apply_setting(s, "nope", "1"));
}

TEST_F(Cli, FlagsOverrideConfig) {
  fs::path cfg = write("gml.conf", "k = 50\nm = 60\n");
  auto args = running("label");
  args.insert(args.end(), {"--config", cfg.string(), "--out", (dir_ / "o").string()});
  EXPECT_EQ(gml(args), 0) << err_.str();
  // k=50 > m would fail validation; the flag lowers m below it.
  args.insert(args.end(), {"--m", "10"});
  EXPECT_EQ(gml(args), 2);
}

TEST_F(Cli, EasyStatsAndInspect) {
  ASSERT_EQ(gml(running("easy-stats")), 0) << err_.str();
  auto stats = nlohmann::json::parse(out_.str());
  EXPECT_EQ(stats["easy"], 3);
  EXPECT_EQ(stats["proportion"], 0.75);

  auto args = running("inspect");
  args.insert(args.end(), {"--unit", "1"});
  ASSERT_EQ(gml(args), 0) << err_.str();
  auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["sentence_id"], "s12");
  args.back() = "9";
  EXPECT_EQ(gml(args), 2);
}

TEST_F(Cli, GenerateThenLabel) {
  fs::path corpus = dir_ / "synth.json";
  ASSERT_EQ(gml({"generate", "--n", "60", "--seed", "2", "--out", corpus.string()}), 0)
      << err_.str();
  EXPECT_EQ(enumerate_aspect_units(load_corpus(corpus)).size(), 60u);
  ASSERT_EQ(gml({"bench", "--sizes", "30,60"}), 0) << err_.str();
  EXPECT_EQ(out_.str().rfind("size,total_seconds,seconds_per_label\n", 0), 0u);
}

}  // namespace
}  // namespace gml::cli
