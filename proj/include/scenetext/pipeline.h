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

// End-to-end corpus builds.
//
// ingest -> validate -> subsample -> per-stage objective build ->
// shuffle/shard -> stats -> manifest.
//
// Output is a pure function of the inputs and the configuration: records
// are processed in parallel batches and merged in input order, every
// random decision is keyed by (seed, image_id), and shards are ordered by a
// seeded hash of example_id.

#ifndef SCENETEXT_PIPELINE_H_
#define SCENETEXT_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenetext/finetune.h"
#include "scenetext/objectives.h"
#include "scenetext/record.h"
#include "scenetext/shard_writer.h"

namespace scenetext {

inline constexpr std::string_view kToolName = "scenetext";
inline constexpr std::string_view kToolVersion = "0.1.0";

// ---------------------------------------------------------------- subsample

// Throws ConfigError unless 0 < fraction <= 1.
void CheckFraction(double fraction);

// Position of a record on [0, 1); a record is kept iff this is < fraction,
// so subsets for increasing fractions are nested.
double SubsampleUnit(std::uint64_t seed, std::string_view image_id);

bool KeepRecord(std::string_view image_id, double fraction,
                std::uint64_t seed);

struct SubsampleSummary {
  std::size_t lines = 0;
  std::size_t kept = 0;
  std::size_t rejected = 0;  // unparseable lines
};

// Copies the lines of kept records verbatim, in input order.
SubsampleSummary SubsampleStream(std::istream& in, std::ostream& out,
                                 double fraction, std::uint64_t seed);

// -------------------------------------------------------------------- stats

struct DatasetStats {
  std::size_t record_count = 0;
  std::size_t empty_ocr_count = 0;
  std::map<Objective, std::size_t> eligible;
  std::size_t vqa_eligible = 0;
  // Token count -> records, and primary-caption word count -> records
  // (records without a caption count as 0 words).
  std::map<std::size_t, std::size_t> ocr_token_histogram;
  std::map<std::size_t, std::size_t> caption_length_histogram;

  void Add(const Record& record);
  void Merge(const DatasetStats& other);
  double empty_ocr_fraction() const;
};

DatasetStats ComputeStats(std::span<const Record> records);
nlohmann::ordered_json StatsToJson(const DatasetStats& stats);

// ------------------------------------------------------------------ ingest

// Reads JSONL from several files in order, one logical stream.
class LineReader {
 public:
  // Opens every file up front; throws std::runtime_error if one is
  // unreadable.
  explicit LineReader(std::vector<std::string> paths);

  // Next non-blank line; false at end of all inputs.
  bool Next(std::string& line);
  const std::string& current_path() const;
  std::size_t current_line() const { return line_no_; }

 private:
  std::vector<std::string> paths_;
  std::vector<std::unique_ptr<std::istream>> streams_;
  std::size_t index_ = 0;
  std::size_t line_no_ = 0;
};

// Runs fn(begin, end) over [0, n) split into contiguous chunks.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t, std::size_t)>& fn);

// Worker count from SCENETEXT_THREADS, else hardware concurrency.
int DefaultThreadCount();

struct IngestCounts {
  std::size_t lines = 0;
  std::size_t parse_errors = 0;    // malformed JSON or schema violations
  std::size_t invalid_records = 0; // failed validation (incl. duplicates)
  std::map<std::string, std::size_t> violations;
  std::size_t subsampled_out = 0;
  std::size_t kept = 0;

  nlohmann::ordered_json ToJson() const;
};

// ---------------------------------------------------------------- validate

struct ValidateSummary {
  IngestCounts counts;
  nlohmann::ordered_json problems = nlohmann::ordered_json::array();
};

// Parses and validates every line. Problem entries (first max_problems)
// carry file, line and reason.
ValidateSummary ValidateFiles(const std::vector<std::string>& inputs,
                              std::size_t max_problems = 100);

struct StatsSummary {
  IngestCounts counts;
  DatasetStats stats;
};

// Streaming stats over valid records (after optional subsampling).
StatsSummary ComputeStatsFiles(const std::vector<std::string>& inputs,
                               double fraction = 1.0, std::uint64_t seed = 0);

// ------------------------------------------------------------ pretraining

struct PipelineConfig {
  std::vector<std::string> inputs;
  std::filesystem::path out_dir;
  std::vector<Objective> stages;
  std::uint64_t seed = 0;
  double fraction = 1.0;
  std::size_t shard_count = 1;
  std::uint32_t passes = 1;
  ExampleConfig example;  // example.seed is overwritten with `seed`
  int resolution = 224;   // recorded only
  bool compress = false;
  int threads = 1;
  std::size_t spill_bytes = std::size_t{256} << 20;
  std::size_t batch_size = 4096;
  std::ostream* log = nullptr;  // skipped-record messages
  std::size_t max_log_lines = 50;
};

// Throws ConfigError on invalid values.
void CheckConfig(const PipelineConfig& config);

// Configuration echo recorded in manifests (excludes out_dir and runtime
// knobs such as thread count).
nlohmann::ordered_json ConfigToJson(const PipelineConfig& config);

// Writes <out_dir>/<stage>/shard-*.jsonl and <out_dir>/manifest.json and
// returns the manifest. On I/O failure nothing new is left in out_dir.
nlohmann::ordered_json RunPipeline(const PipelineConfig& config);

// BLAKE2b of the manifest with "manifest_hash" and "runtime" removed.
std::string ManifestHash(const nlohmann::ordered_json& manifest);

// -------------------------------------------------------------- fine-tuning

struct FinetuneConfig {
  std::vector<std::string> inputs;
  std::filesystem::path out_path;
  Task task = Task::kVqa;
  bool ocr_included = true;
  bool eval_mode = false;
  std::uint64_t seed = 0;
  double fraction = 1.0;
  ExampleConfig example;
  int threads = 1;
  std::ostream* log = nullptr;
};

// One JSONL file sorted by example_id. Returns a summary with counts.
nlohmann::ordered_json RunFinetuneBuild(const FinetuneConfig& config);

}  // namespace scenetext

#endif  // SCENETEXT_PIPELINE_H_
