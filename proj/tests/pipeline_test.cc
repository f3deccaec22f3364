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

#include "scenetext/pipeline.h"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "scenetext/errors.h"
#include "test_util.h"

namespace scenetext {
namespace {

namespace fs = std::filesystem;

TEST(Subsample, FractionOneIsIdentity) {
  testing::Rng rng(1);
  const std::string corpus = testing::RandomCorpus(rng, 200);
  std::istringstream in(corpus);
  std::ostringstream out;
  const SubsampleSummary s = SubsampleStream(in, out, 1.0, 7);
  EXPECT_EQ(out.str(), corpus);
  EXPECT_EQ(s.kept, 200u);
}

TEST(Subsample, NestedAndOrderIndependent) {
  std::vector<std::string> ids;
  for (int i = 0; i < 20000; ++i) ids.push_back("id" + std::to_string(i));
  const double fractions[] = {0.01, 0.03, 0.1, 0.3};
  std::set<std::string> prev;
  for (double f : fractions) {
    std::set<std::string> kept;
    for (const auto& id : ids) {
      if (KeepRecord(id, f, 42)) kept.insert(id);
    }
    for (const auto& id : prev) EXPECT_TRUE(kept.count(id)) << id;
    EXPECT_NEAR(static_cast<double>(kept.size()), f * ids.size(),
                4 * std::sqrt(ids.size() * f * (1 - f)));
    prev = std::move(kept);
  }
}

TEST(Subsample, StreamOrderDoesNotChangeSelection) {
  testing::Rng rng(2);
  std::istringstream in(testing::RandomCorpus(rng, 300));
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  auto run = [](const std::vector<std::string>& ls) {
    std::string text;
    for (const auto& l : ls) text += l + "\n";
    std::istringstream i(text);
    std::ostringstream o;
    SubsampleStream(i, o, 0.3, 5);
    std::multiset<std::string> kept;
    std::istringstream r(o.str());
    for (std::string l; std::getline(r, l);) kept.insert(l);
    return kept;
  };
  const auto forward = run(lines);
  std::reverse(lines.begin(), lines.end());
  EXPECT_EQ(run(lines), forward);
}

TEST(Subsample, RejectsBadFraction) {
  std::istringstream in("");
  std::ostringstream out;
  EXPECT_THROW(SubsampleStream(in, out, 0.0, 1), ConfigError);
  EXPECT_THROW(SubsampleStream(in, out, 1.5, 1), ConfigError);
  EXPECT_THROW(CheckFraction(-0.1), ConfigError);
}

TEST(Stats, Examples) {
  EXPECT_EQ(ComputeStats({}).record_count, 0u);
  EXPECT_EQ(ComputeStats({}).empty_ocr_fraction(), 0.0);

  std::vector<Record> records(3);
  for (int i = 0; i < 3; ++i) records[i].image_id = "r" + std::to_string(i);
  records[0].ocr = {OcrToken{"A", BBox{0, 0, 1, 1}, 1.0}};
  records[1].ocr = {OcrToken{"B", BBox{0, 0, 1, 1}, 1.0},
                    OcrToken{"C", BBox{2, 0, 1, 1}, 1.0}};
  records[2].captions = {"a b c"};
  const DatasetStats s = ComputeStats(records);
  EXPECT_EQ(s.record_count, 3u);
  EXPECT_DOUBLE_EQ(s.empty_ocr_fraction(), 1.0 / 3.0);
  EXPECT_EQ(s.eligible.at(Objective::kSplitOcr), 2u);
  EXPECT_EQ(s.eligible.at(Objective::kCap), 1u);
  EXPECT_EQ(s.ocr_token_histogram.at(2), 1u);
  EXPECT_EQ(s.caption_length_histogram.at(3), 1u);
}

TEST(Stats, HistogramsSumToRecordCountAndMergeIsAdditive) {
  testing::Rng rng(3);
  std::vector<Record> records;
  for (int i = 0; i < 400; ++i) {
    records.push_back(testing::RandomRecord(rng, "s" + std::to_string(i)));
  }
  const DatasetStats all = ComputeStats(records);
  std::size_t a = 0, b = 0;
  for (const auto& [k, v] : all.ocr_token_histogram) a += v;
  for (const auto& [k, v] : all.caption_length_histogram) b += v;
  EXPECT_EQ(a, 400u);
  EXPECT_EQ(b, 400u);

  DatasetStats left = ComputeStats(std::span(records).first(150));
  left.Merge(ComputeStats(std::span(records).subspan(150)));
  EXPECT_EQ(StatsToJson(left), StatsToJson(all));
}

class PipelineRun : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::Rng rng(77);
    std::string corpus = testing::RandomCorpus(rng, 600);
    corpus += "{not json\n";
    corpus += R"({"image_id":"img-3"})" "\n";  // duplicate id
    corpus += R"({"image_id":"bad","ocr":[{"text":"A","bbox":[-5,0,5,5]}]})" "\n";
    input_ = (dir_.path() / "corpus.jsonl").string();
    testing::WriteFile(input_, corpus);
  }

  PipelineConfig Config(const std::string& out) {
    PipelineConfig c;
    c.inputs = {input_};
    c.out_dir = dir_.path() / out;
    c.stages = {Objective::kSplitOcr, Objective::kCap};
    c.seed = 11;
    c.shard_count = 3;
    c.batch_size = 64;
    return c;
  }

  testing::TempDir dir_;
  std::string input_;
};

TEST_F(PipelineRun, ManifestShapeAndCounts) {
  const auto m = RunPipeline(Config("out"));
  EXPECT_EQ(m["ingest"]["lines"], 603);
  EXPECT_EQ(m["ingest"]["parse_errors"], 1);
  EXPECT_EQ(m["ingest"]["invalid_records"], 2);
  EXPECT_EQ(m["ingest"]["violations"]["duplicate_image_id"], 1);
  EXPECT_EQ(m["ingest"]["kept"], 600);
  ASSERT_EQ(m["stages"].size(), 2u);
  EXPECT_EQ(m["stages"][0]["objective"], "SPLITOCR");
  EXPECT_EQ(m["stages"][1]["name"], "stage1_cap");
  EXPECT_EQ(m["stages"][0]["eligible_records"].get<std::size_t>() +
                m["stages"][0]["skipped_records"].get<std::size_t>(),
            600u);
  EXPECT_EQ(m["stages"][0]["examples"], m["stages"][0]["eligible_records"]);
  EXPECT_EQ(m["stats"]["record_count"], 600);

  const fs::path out = dir_.path() / "out";
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
  EXPECT_FALSE(fs::exists(out / ".staging"));
  std::size_t total = 0;
  for (const auto& shard : m["stages"][0]["shards"]) {
    const auto lines = ReadShardLines(out / shard["path"].get<std::string>());
    EXPECT_EQ(lines.size(), shard["examples"].get<std::size_t>());
    total += lines.size();
  }
  EXPECT_EQ(total, m["stages"][0]["examples"].get<std::size_t>());
  EXPECT_EQ(m["manifest_hash"], ManifestHash(m));
  EXPECT_EQ(nlohmann::ordered_json::parse(testing::ReadFile(out / "manifest.json")), m);
}

TEST_F(PipelineRun, RerunIsIdenticalAcrossThreadsAndSpilling) {
  PipelineConfig a = Config("a");
  PipelineConfig b = Config("b");
  b.threads = 8;
  b.spill_bytes = 8192;
  b.batch_size = 7;
  const auto ma = RunPipeline(a);
  const auto mb = RunPipeline(b);
  EXPECT_EQ(ma["manifest_hash"], mb["manifest_hash"]);
  EXPECT_GT(mb["runtime"]["spilled_runs"].get<int>(), 0);
  for (std::size_t s = 0; s < ma["stages"].size(); ++s) {
    for (std::size_t i = 0; i < ma["stages"][s]["shards"].size(); ++i) {
      const std::string rel = ma["stages"][s]["shards"][i]["path"];
      EXPECT_EQ(testing::ReadFile(dir_.path() / "a" / rel),
                testing::ReadFile(dir_.path() / "b" / rel));
    }
  }
}

TEST_F(PipelineRun, ConfigChangesHash) {
  PipelineConfig b = Config("b");
  b.seed = 12;
  EXPECT_NE(RunPipeline(Config("a"))["manifest_hash"],
            RunPipeline(b)["manifest_hash"]);
}

TEST_F(PipelineRun, PassesMultiplyExamples) {
  PipelineConfig c = Config("p");
  c.stages = {Objective::kSplitOcr};
  c.passes = 3;
  const auto m = RunPipeline(c);
  EXPECT_EQ(m["stages"][0]["examples"].get<std::size_t>(),
            3 * m["stages"][0]["eligible_records"].get<std::size_t>());
}

TEST_F(PipelineRun, SubsampledRunKeepsNestedIds) {
  PipelineConfig c = Config("f");
  c.fraction = 0.25;
  const auto m = RunPipeline(c);
  const auto kept = m["ingest"]["kept"].get<std::size_t>();
  EXPECT_LT(kept, 300u);
  EXPECT_GT(kept, 50u);
  EXPECT_EQ(m["ingest"]["subsampled_out"].get<std::size_t>() + kept, 600u);
}

TEST_F(PipelineRun, UnreadableInputAbortsWithoutOutput) {
  PipelineConfig c = Config("missing");
  c.inputs.push_back((dir_.path() / "nope.jsonl").string());
  EXPECT_ANY_THROW(RunPipeline(c));
  EXPECT_FALSE(fs::exists(dir_.path() / "missing" / ".staging"));
  EXPECT_FALSE(fs::exists(dir_.path() / "missing" / "manifest.json"));
}

TEST_F(PipelineRun, BadConfigIsRejected) {
  PipelineConfig c = Config("x");
  c.stages.clear();
  EXPECT_THROW(RunPipeline(c), ConfigError);
  c = Config("x");
  c.shard_count = 0;
  EXPECT_THROW(RunPipeline(c), ConfigError);
}

TEST_F(PipelineRun, FinetuneBuildIsSortedAndThreadIndependent) {
  FinetuneConfig c;
  c.inputs = {input_};
  c.out_path = dir_.path() / "ft" / "vqa.jsonl";
  c.task = Task::kVqa;
  const auto s1 = RunFinetuneBuild(c);
  c.threads = 8;
  c.out_path = dir_.path() / "ft" / "vqa8.jsonl";
  const auto s8 = RunFinetuneBuild(c);
  EXPECT_EQ(s1["blake2b"], s8["blake2b"]);
  EXPECT_GT(s1["examples"].get<std::size_t>(), 100u);

  std::istringstream in(testing::ReadFile(dir_.path() / "ft" / "vqa.jsonl"));
  std::string prev;
  for (std::string l; std::getline(in, l);) {
    const auto j = nlohmann::json::parse(l);
    const std::string id = j["example_id"];
    EXPECT_LT(prev, id);
    prev = id;
    EXPECT_EQ(j["answers"].size(), 10u);
  }
}

TEST(LineReader, SkipsBlankLinesAcrossFiles) {
  testing::TempDir dir;
  testing::WriteFile(dir.path() / "a", "x\n\n  \ny");
  testing::WriteFile(dir.path() / "b", "z\n");
  LineReader r({(dir.path() / "a").string(), (dir.path() / "b").string()});
  std::vector<std::string> got;
  for (std::string l; r.Next(l);) got.push_back(l);
  EXPECT_EQ(got, (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_ANY_THROW(LineReader({(dir.path() / "none").string()}));
}

TEST(ParallelFor, CoversRangeOnce) {
  std::vector<int> hits(1000, 0);
  ParallelFor(hits.size(), 7, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  });
  for (int h : hits) EXPECT_EQ(h, 1);
}

}  // namespace
}  // namespace scenetext
