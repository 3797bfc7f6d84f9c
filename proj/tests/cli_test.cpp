// Copyright 2026 The mmfd Authors
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

#include <gtest/gtest.h>

#include <sstream>

#include "mmfd/cli.hpp"
#include "mmfd/error.hpp"
#include "mmfd/synth.hpp"
#include "test_support.hpp"

namespace mmfd {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// A small synthetic corpus with a config written next to it.
fs::path small_project(const testing::TempDir& dir, nlohmann::json overrides = nlohmann::json::object()) {
  SyntheticCorpusOptions options;
  options.misinformation = 40;
  options.other = 20;
  options.seed = 5;
  write_synthetic_corpus(dir.path(), options);
  nlohmann::json config = {
      {"manifest", "manifest.jsonl"},
      {"output_dir", "out"},
      {"gender_dictionary", "genders.tsv"},
      {"adapters",
       {{"translator", "dictionary"},
        {"translation_dictionary", "translations.tsv"},
        {"translation_cache", "translation_cache.tsv"}}},
      {"encoders", {{"text", {{"name", "hash"}, {"dim", 16}}}, {"image", {{"name", "histogram"}, {"dim", 8}}}}},
      {"hyperparams", {{"epochs", 10}}},
  };
  config.merge_patch(overrides);
  testing::write_text(dir / "config.json", config.dump(2));
  return dir / "config.json";
}

TEST(Cli, IngestCountsAndRejects) {
  testing::TempDir dir;
  auto bad = testing::tweet_json("4");
  bad.erase("user");
  testing::write_text(dir / "m.jsonl", testing::tweet_json("1").dump() + "\n" + testing::tweet_json("2").dump() +
                                           "\n" + testing::tweet_json("3", "true").dump() + "\n" + bad.dump() + "\n");
  testing::write_text(dir / "config.json", R"({"manifest": "m.jsonl", "output_dir": "out"})");
  const auto r = invoke({"ingest", "--config", (dir / "config.json").string()});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("3 records (2 misinformation / 1 other)"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir / "out" / "dataset.jsonl"));
  EXPECT_NE(testing::read_text(dir / "m.jsonl.rejects").find("4\t"), std::string::npos);
}

TEST(Cli, MissingManifestIsInputError) {
  testing::TempDir dir;
  testing::write_text(dir / "config.json", R"({"manifest": "nowhere.jsonl"})");
  const auto r = invoke({"all", "--config", (dir / "config.json").string()});
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_NE(r.err.find("nowhere.jsonl"), std::string::npos) << r.err;
}

TEST(Cli, BadConfigIsInputError) {
  testing::TempDir dir;
  testing::write_text(dir / "config.json", R"({"manifest": "m.jsonl", "colour": "blue"})");
  EXPECT_EQ(invoke({"ingest", "--config", (dir / "config.json").string()}).code, cli::kExitInputError);
  EXPECT_EQ(invoke({"ingest"}).code, cli::kExitInputError);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitInputError);
}

TEST(Cli, ConfigRoundTrip) {
  testing::TempDir dir;
  const auto path = small_project(dir);
  const auto config = cli::load_config(path);
  EXPECT_EQ(config.manifest, dir / "manifest.jsonl");
  EXPECT_EQ(config.text_encoder.dim, 16u);
  EXPECT_EQ(config.hyperparams.epochs, 10u);
  const auto again = cli::config_from_json(cli::to_json(config), dir.path());
  EXPECT_EQ(cli::to_json(again), cli::to_json(config));
}

TEST(Cli, FullRunWithUnreachableBotService) {
  testing::TempDir dir;
  const auto config = small_project(
      dir, {{"adapters", {{"bot", {{"enabled", true}, {"endpoint", "http://127.0.0.1:9/score"}, {"timeout_ms", 200}}}}}});
  const auto r = invoke({"all", "--config", config.string()});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("bot_score: 0/60 fetched"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("15 results, 0 failed"), std::string::npos) << r.out;
  for (const char* f : {"dataset.jsonl", "enrichments.jsonl", "features.bin", "report.txt", "report.csv",
                        "propagation.txt", "propagation.csv"})
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
}

TEST(Cli, WarmTranslationCacheAndStableReports) {
  testing::TempDir dir;
  const auto config = small_project(dir);
  const auto first = invoke({"all", "--config", config.string()});
  ASSERT_EQ(first.code, cli::kExitOk) << first.err;
  EXPECT_EQ(first.out.find("external calls: translation=0 "), std::string::npos) << first.out;
  const auto csv = testing::read_text(dir / "out" / "report.csv");
  const auto second = invoke({"all", "--config", config.string(), "--threads", "3"});
  ASSERT_EQ(second.code, cli::kExitOk) << second.err;
  EXPECT_NE(second.out.find("external calls: translation=0 "), std::string::npos) << second.out;
  EXPECT_EQ(testing::read_text(dir / "out" / "report.csv"), csv);
}

TEST(Cli, CustomExperimentsAndFailures) {
  testing::TempDir dir;
  const auto config = small_project(dir);
  testing::write_text(dir / "tri.json", R"({"experiments": [
      {"name": "a", "modalities": ["text", "image", "social"], "backend_combo": ["linear"]},
      {"name": "b", "modalities": ["text", "image", "social"], "backend_combo": ["mlp"]},
      {"name": "c", "modalities": ["text", "image", "social"], "backend_combo": ["linear", "mlp"]},
      {"name": "d", "modalities": ["text", "image", "social"], "backend_combo": ["mlp", "linear", "mlp"]}]})");
  const auto ok = invoke({"all", "--config", config.string(), "--experiments", (dir / "tri.json").string()});
  ASSERT_EQ(ok.code, cli::kExitOk) << ok.err;
  const auto csv = testing::read_text(dir / "out" / "report.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);

  testing::write_text(dir / "bad.json", R"([
      {"name": "a", "modalities": ["text"], "backend_combo": ["linear"]},
      {"name": "z", "modalities": ["text"], "backend_combo": ["svm"]}])");
  const auto partial = invoke({"run", "--config", config.string(), "--experiments", (dir / "bad.json").string()});
  EXPECT_EQ(partial.code, cli::kExitPartialFailure);
  EXPECT_NE(testing::read_text(dir / "out" / "report.txt").find("svm"), std::string::npos);
}

TEST(Cli, SynthWritesRunnableProject) {
  testing::TempDir dir;
  const auto r = invoke({"synth", "--out", (dir / "p").string(), "--seed", "3"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("1529 records"), std::string::npos);
  EXPECT_NO_THROW(cli::load_config(dir / "p" / "config.json").validate());
}

}  // namespace
}  // namespace mmfd
