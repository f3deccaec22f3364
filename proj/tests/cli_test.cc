// Copyright 2026 The Scenetext Authors.
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

#include "scenetext/cli.h"

#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "test_util.h"

namespace scenetext {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "scenetext");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::Rng rng(4);
    corpus_ = (dir_.path() / "corpus.jsonl").string();
    testing::WriteFile(corpus_, testing::RandomCorpus(rng, 120));
    pred_ = (dir_.path() / "pred.jsonl").string();
    gold_ = (dir_.path() / "gold.jsonl").string();
    testing::WriteFile(pred_,
                       "{\"example_id\":\"a\",\"prediction\":\"stop\"}\n"
                       "{\"example_id\":\"b\",\"prediction\":\"go\"}\n");
    testing::WriteFile(
        gold_,
        R"({"example_id":"a","answers":["stop","stop","stop","stop","stop","stop","stop","stop","stop","stop"]})"
        "\n"
        R"({"example_id":"b","answers":["go","go","go","x","x","x","x","x","x","x"]})"
        "\n");
  }
  std::string P(const std::string& name) { return (dir_.path() / name).string(); }

  testing::TempDir dir_;
  std::string corpus_, pred_, gold_;
};

TEST_F(Cli, EveryCommandEmitsParseableJson) {
  const std::vector<std::vector<std::string>> commands = {
      {"validate", "--in", corpus_, "--json"},
      {"stats", "--in", corpus_, "--json"},
      {"build-pretrain", "--in", corpus_, "--out-dir", P("pre"), "--objective",
       "splitocr", "--seed", "7", "--json"},
      {"build-pretrain", "--in", corpus_, "--out-dir", P("pre2"), "--stages",
       "splitocr,cap", "--shards", "2", "--compress", "--json"},
      {"build-finetune", "--in", corpus_, "--out", P("ft.jsonl"), "--task",
       "caption", "--json"},
      {"subsample", "--in", corpus_, "--out", P("sub.jsonl"), "--fraction",
       "0.5", "--json"},
      {"evaluate", "--task", "vqa_anls", "--pred", pred_, "--gold", gold_,
       "--per-item", "--json"},
  };
  for (const auto& cmd : commands) {
    const CliResult r = Invoke(cmd);
    ASSERT_EQ(r.code, kExitOk) << cmd[0] << "\n" << r.err;
    EXPECT_NO_THROW(nlohmann::json::parse(r.out).is_object()) << cmd[0] << ": " << r.out;
    EXPECT_FALSE(r.err.empty());
  }
  EXPECT_TRUE(fs::exists(dir_.path() / "pre" / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir_.path() / "pre2" / "stage1_cap"));
}

TEST_F(Cli, EvaluateReportsAccuracy) {
  const CliResult r =
      Invoke({"evaluate", "--task", "vqa", "--pred", pred_, "--gold", gold_, "--json"});
  ASSERT_EQ(r.code, kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["aggregate"]["accuracy"].get<double>(), 0.95, 1e-12);
  EXPECT_NE(r.err.find("accuracy"), std::string::npos);
}

TEST_F(Cli, ManifestRecordsEffectiveDefaults) {
  const CliResult r = Invoke({"build-pretrain", "--in", corpus_, "--out-dir",
                           P("d"), "--objective", "ocr", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto cfg = nlohmann::json::parse(r.out)["config"];
  for (const char* key : {"seed", "fraction", "shards", "passes",
                          "overlap_threshold", "format", "resolution", "compress"}) {
    EXPECT_TRUE(cfg.contains(key)) << key;
  }
  EXPECT_EQ(cfg["overlap_threshold"], 0.5);
  EXPECT_EQ(cfg["format"]["ocr_prompt"], "read:");
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(Invoke({"build-pretrain", "--in", corpus_, "--out-dir", P("x"),
                 "--objective", "bogus"}).code,
            kExitUsage);
  EXPECT_EQ(Invoke({"validate", "--in", corpus_, "--frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"launch"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"build-pretrain", "--in", corpus_, "--out-dir", P("x"),
                 "--objective", "ocr", "--stages", "ocr,cap"}).code,
            kExitUsage);
  EXPECT_EQ(Invoke({"subsample", "--in", corpus_, "--out", P("s"), "--fraction",
                 "0"}).code,
            kExitUsage);
  const CliResult r = Invoke({"evaluate", "--task", "vqa"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST_F(Cli, RuntimeFailuresExitOne) {
  EXPECT_EQ(Invoke({"validate", "--in", P("missing.jsonl")}).code, kExitFailure);
  EXPECT_EQ(Invoke({"build-pretrain", "--in", P("missing.jsonl"), "--out-dir",
                 P("y"), "--objective", "ocr"}).code,
            kExitFailure);
  testing::WriteFile(P("orphan.jsonl"),
                     "{\"example_id\":\"zzz\",\"prediction\":\"x\"}\n");
  const CliResult r =
      Invoke({"evaluate", "--task", "vqa", "--pred", P("orphan.jsonl"), "--gold", gold_});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("zzz"), std::string::npos);
}

TEST_F(Cli, NoOcrInputFlag) {
  ASSERT_EQ(Invoke({"build-finetune", "--in", corpus_, "--out", P("v.jsonl"),
                 "--task", "vqa", "--no-ocr-input"}).code,
            kExitOk);
  std::istringstream in(testing::ReadFile(P("v.jsonl")));
  for (std::string l; std::getline(in, l);) {
    const auto j = nlohmann::json::parse(l);
    EXPECT_EQ(j["ocr_included"], false);
    EXPECT_EQ(j["input_text"].get<std::string>().find("OCR:"), std::string::npos);
  }
}

}  // namespace
}  // namespace scenetext
