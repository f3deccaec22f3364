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

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <system_error>
#include <thread>

#include "scenetext/errors.h"
#include "scenetext/hashing.h"
#include "scenetext/utf8.h"

namespace scenetext {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// (example_id, jsonl line) per output bucket.
using BuiltLines = std::vector<std::vector<std::pair<std::string, std::string>>>;

class CappedLog {
 public:
  CappedLog(std::ostream* out, std::size_t max) : out_(out), max_(max) {}

  void Line(const std::string& msg) {
    if (out_ == nullptr) return;
    if (written_ < max_) {
      *out_ << msg << '\n';
    } else if (written_ == max_) {
      *out_ << "(further skipped-record messages suppressed)\n";
    }
    ++written_;
  }

 private:
  std::ostream* out_;
  std::size_t max_;
  std::size_t written_ = 0;
};

struct Slot {
  std::string line;
  std::string where;
  std::optional<Record> record;
  std::string error;
  ValidationReport report;
  bool keep = false;
  BuiltLines built;
};

struct IngestOptions {
  double fraction = 1.0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::size_t batch_size = 4096;
};

// Problem callback: (where, code, detail).
using ProblemFn =
    std::function<void(const std::string&, const std::string&, const std::string&)>;

// Streams records through parse -> validate -> subsample. `build` runs in
// parallel on records that pass; `accept` sees them sequentially in input
// order, after duplicate filtering.
void Ingest(LineReader& reader, const IngestOptions& opts,
            const std::function<BuiltLines(const Record&)>& build,
            const std::function<void(const Record&, BuiltLines&)>& accept,
            const ProblemFn& problem, IngestCounts& counts) {
  RecordValidator ids;
  std::vector<Slot> batch;
  bool more = true;
  while (more) {
    batch.clear();
    std::string line;
    while (batch.size() < opts.batch_size && (more = reader.Next(line))) {
      Slot s;
      s.line = std::move(line);
      s.where = reader.current_path() + ":" + std::to_string(reader.current_line());
      batch.push_back(std::move(s));
    }
    ParallelFor(batch.size(), opts.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        Slot& s = batch[i];
        try {
          s.record = ParseRecord(s.line);
        } catch (const ParseError& err) {
          s.error = std::string("parse error at byte ") +
                    std::to_string(err.byte_offset()) + ": " + err.what();
          continue;
        } catch (const SchemaError& err) {
          s.error = std::string("schema error: ") + err.what();
          continue;
        }
        s.report = ValidateRecord(*s.record);
        s.keep = KeepRecord(s.record->image_id, opts.fraction, opts.seed);
        if (s.report.ok() && s.keep && build) s.built = build(*s.record);
      }
    });
    for (Slot& s : batch) {
      ++counts.lines;
      if (!s.record) {
        ++counts.parse_errors;
        problem(s.where, "parse_error", s.error);
        continue;
      }
      if (s.report.ok() && !ids.Register(s.record->image_id)) {
        s.report.violations.push_back(
            {std::string(kDuplicateImageId), "image_id " + s.record->image_id});
      }
      if (!s.report.ok()) {
        ++counts.invalid_records;
        for (const Violation& v : s.report.violations) {
          ++counts.violations[v.code];
          problem(s.where, v.code, v.detail);
        }
        continue;
      }
      if (!s.keep) {
        ++counts.subsampled_out;
        continue;
      }
      ++counts.kept;
      if (accept) accept(*s.record, s.built);
    }
  }
}

ordered_json FormatToJson(const TextFormat& f) {
  ordered_json j;
  j["ocr_prompt"] = f.ocr_prompt;
  j["caption_prompt"] = f.caption_prompt;
  j["vqa_prompt"] = f.vqa_prompt;
  j["token_separator"] = f.token_separator;
  j["question_delimiter"] = f.question_delimiter;
  j["segment_delimiter"] = f.segment_delimiter;
  j["ocr_label"] = f.ocr_label;
  return j;
}

ordered_json ShardToJson(const ShardFile& f) {
  ordered_json j;
  j["path"] = f.path;
  j["examples"] = f.examples;
  j["bytes"] = f.bytes;
  j["blake2b"] = f.blake2b;
  return j;
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot create " + path.string());
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void ReplacePath(const fs::path& from, const fs::path& to) {
  std::error_code ec;
  fs::remove_all(to, ec);
  fs::rename(from, to);
}

}  // namespace

// ---------------------------------------------------------------- subsample

void CheckFraction(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("fraction must be in (0, 1], got " +
                      std::to_string(fraction));
  }
}

double SubsampleUnit(std::uint64_t seed, std::string_view image_id) {
  return UnitInterval(KeyedHash64(seed, kSubsampleDomain, image_id));
}

bool KeepRecord(std::string_view image_id, double fraction,
                std::uint64_t seed) {
  if (fraction >= 1.0) return true;
  return SubsampleUnit(seed, image_id) < fraction;
}

SubsampleSummary SubsampleStream(std::istream& in, std::ostream& out,
                                 double fraction, std::uint64_t seed) {
  CheckFraction(fraction);
  SubsampleSummary summary;
  std::string line;
  while (std::getline(in, line)) {
    if (TrimWhitespace(line).empty()) continue;
    ++summary.lines;
    std::string id;
    try {
      id = ParseRecord(line).image_id;
    } catch (const std::exception&) {
      ++summary.rejected;
      continue;
    }
    if (KeepRecord(id, fraction, seed)) {
      out << line << '\n';
      ++summary.kept;
    }
  }
  return summary;
}

// -------------------------------------------------------------------- stats

void DatasetStats::Add(const Record& record) {
  ++record_count;
  if (record.ocr.empty()) ++empty_ocr_count;
  for (Objective o : kAllObjectives) {
    if (IsEligible(record, o)) ++eligible[o];
  }
  if (!record.qa.empty()) ++vqa_eligible;
  ++ocr_token_histogram[record.ocr.size()];
  const std::string* caption = record.primary_caption();
  ++caption_length_histogram[caption ? SplitWhitespace(*caption).size() : 0];
}

void DatasetStats::Merge(const DatasetStats& other) {
  record_count += other.record_count;
  empty_ocr_count += other.empty_ocr_count;
  vqa_eligible += other.vqa_eligible;
  for (const auto& [k, v] : other.eligible) eligible[k] += v;
  for (const auto& [k, v] : other.ocr_token_histogram) ocr_token_histogram[k] += v;
  for (const auto& [k, v] : other.caption_length_histogram) {
    caption_length_histogram[k] += v;
  }
}

double DatasetStats::empty_ocr_fraction() const {
  if (record_count == 0) return 0.0;
  return static_cast<double>(empty_ocr_count) /
         static_cast<double>(record_count);
}

DatasetStats ComputeStats(std::span<const Record> records) {
  DatasetStats stats;
  for (const Record& r : records) stats.Add(r);
  return stats;
}

ordered_json StatsToJson(const DatasetStats& stats) {
  ordered_json j;
  j["record_count"] = stats.record_count;
  j["empty_ocr_count"] = stats.empty_ocr_count;
  j["empty_ocr_fraction"] = stats.empty_ocr_fraction();
  ordered_json eligible;
  for (Objective o : kAllObjectives) {
    auto it = stats.eligible.find(o);
    eligible[std::string(ObjectiveName(o))] =
        it == stats.eligible.end() ? 0 : it->second;
  }
  eligible["VQA"] = stats.vqa_eligible;
  j["eligible"] = std::move(eligible);
  ordered_json tokens;
  for (const auto& [k, v] : stats.ocr_token_histogram) {
    tokens[std::to_string(k)] = v;
  }
  j["ocr_token_histogram"] = std::move(tokens);
  ordered_json lengths;
  for (const auto& [k, v] : stats.caption_length_histogram) {
    lengths[std::to_string(k)] = v;
  }
  j["caption_length_histogram"] = std::move(lengths);
  return j;
}

// ------------------------------------------------------------------ ingest

LineReader::LineReader(std::vector<std::string> paths)
    : paths_(std::move(paths)) {
  for (const std::string& p : paths_) {
    auto in = std::make_unique<std::ifstream>(p, std::ios::binary);
    if (!*in) throw std::runtime_error("cannot read input " + p);
    streams_.push_back(std::move(in));
  }
}

bool LineReader::Next(std::string& line) {
  while (index_ < streams_.size()) {
    while (std::getline(*streams_[index_], line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!TrimWhitespace(line).empty()) return true;
    }
    if (streams_[index_]->bad()) {
      throw std::runtime_error("read failed: " + paths_[index_]);
    }
    ++index_;
    if (index_ < streams_.size()) line_no_ = 0;
  }
  return false;
}

const std::string& LineReader::current_path() const {
  static const std::string kNone;
  if (paths_.empty()) return kNone;
  return paths_[std::min(index_, paths_.size() - 1)];
}

void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          fn(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int DefaultThreadCount() {
  if (const char* env = std::getenv("SCENETEXT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ordered_json IngestCounts::ToJson() const {
  ordered_json j;
  j["lines"] = lines;
  j["parse_errors"] = parse_errors;
  j["invalid_records"] = invalid_records;
  ordered_json v = ordered_json::object();
  for (const auto& [code, n] : violations) v[code] = n;
  j["violations"] = std::move(v);
  j["subsampled_out"] = subsampled_out;
  j["kept"] = kept;
  return j;
}

// ---------------------------------------------------------------- validate

ValidateSummary ValidateFiles(const std::vector<std::string>& inputs,
                              std::size_t max_problems) {
  ValidateSummary summary;
  LineReader reader(inputs);
  IngestOptions opts;
  Ingest(
      reader, opts, nullptr, nullptr,
      [&](const std::string& where, const std::string& code,
          const std::string& detail) {
        if (summary.problems.size() >= max_problems) return;
        ordered_json p;
        p["where"] = where;
        p["code"] = code;
        p["detail"] = detail;
        summary.problems.push_back(std::move(p));
      },
      summary.counts);
  return summary;
}

StatsSummary ComputeStatsFiles(const std::vector<std::string>& inputs,
                               double fraction, std::uint64_t seed) {
  CheckFraction(fraction);
  StatsSummary summary;
  LineReader reader(inputs);
  IngestOptions opts;
  opts.fraction = fraction;
  opts.seed = seed;
  Ingest(
      reader, opts, nullptr,
      [&](const Record& r, BuiltLines&) { summary.stats.Add(r); },
      [](const std::string&, const std::string&, const std::string&) {},
      summary.counts);
  return summary;
}

// ------------------------------------------------------------ pretraining

void CheckConfig(const PipelineConfig& config) {
  CheckFraction(config.fraction);
  if (config.inputs.empty()) throw ConfigError("no input files");
  if (config.stages.empty()) throw ConfigError("stage plan needs at least one objective");
  if (config.shard_count == 0) throw ConfigError("shard count must be at least 1");
  if (config.passes == 0) throw ConfigError("passes must be at least 1");
  if (!(config.example.overlap_threshold >= 0.0 &&
        config.example.overlap_threshold <= 1.0)) {
    throw ConfigError("overlap threshold must be in [0, 1]");
  }
  if (config.batch_size == 0) throw ConfigError("batch size must be at least 1");
}

ordered_json ConfigToJson(const PipelineConfig& config) {
  ordered_json j;
  j["inputs"] = config.inputs;
  ordered_json stages = ordered_json::array();
  for (Objective o : config.stages) stages.push_back(ObjectiveName(o));
  j["stages"] = std::move(stages);
  j["seed"] = config.seed;
  j["fraction"] = config.fraction;
  j["shards"] = config.shard_count;
  j["passes"] = config.passes;
  j["overlap_threshold"] = config.example.overlap_threshold;
  j["format"] = FormatToJson(config.example.format);
  j["resolution"] = config.resolution;
  j["compress"] = config.compress ? "gzip" : "none";
  return j;
}

std::string ManifestHash(const ordered_json& manifest) {
  ordered_json copy = manifest;
  copy.erase("manifest_hash");
  copy.erase("runtime");
  return DigestHex(copy.dump());
}

ordered_json RunPipeline(const PipelineConfig& config) {
  CheckConfig(config);
  LineReader reader(config.inputs);

  std::string corpus = JoinStrings(config.inputs, ",");
  const StagePlan plan = BuildStagePlan(config.stages, corpus);
  ExampleConfig example = config.example;
  example.seed = config.seed;

  const fs::path staging = config.out_dir / ".staging";
  std::error_code ec;
  fs::remove_all(staging, ec);
  fs::create_directories(staging);

  try {
    ShardOptions shard_opts;
    shard_opts.shard_count = config.shard_count;
    shard_opts.compress = config.compress;
    shard_opts.spill_bytes = config.spill_bytes;

    std::vector<std::unique_ptr<ShardBuilder>> builders;
    for (const StageSpec& stage : plan.stages) {
      builders.push_back(std::make_unique<ShardBuilder>(
          config.seed, staging, stage.name, "shard", staging / ".spill",
          shard_opts));
    }
    std::vector<std::size_t> eligible(plan.stages.size(), 0);
    std::vector<std::size_t> skipped(plan.stages.size(), 0);

    DatasetStats stats;
    IngestCounts counts;
    CappedLog log(config.log, config.max_log_lines);
    IngestOptions opts{config.fraction, config.seed, config.threads,
                       config.batch_size};

    auto build = [&](const Record& record) {
      BuiltLines out(plan.stages.size());
      for (const StageSpec& stage : plan.stages) {
        for (std::uint32_t pass = 0; pass < config.passes; ++pass) {
          auto ex = BuildPretrainExample(record, stage.objective, example, pass);
          if (!ex) break;
          out[stage.index].emplace_back(
              ex->example_id, PretrainExampleToJson(*ex, example.format));
        }
      }
      return out;
    };
    auto accept = [&](const Record& record, BuiltLines& built) {
      stats.Add(record);
      for (const StageSpec& stage : plan.stages) {
        auto& lines = built[stage.index];
        if (lines.empty()) {
          ++skipped[stage.index];
          continue;
        }
        ++eligible[stage.index];
        for (auto& [id, line] : lines) {
          builders[stage.index]->Add(std::move(id), std::move(line));
        }
      }
    };
    auto problem = [&](const std::string& where, const std::string& code,
                       const std::string& detail) {
      log.Line(where + ": skipped (" + code + ") " + detail);
    };
    Ingest(reader, opts, build, accept, problem, counts);

    ordered_json manifest;
    manifest["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    manifest["config"] = ConfigToJson(config);
    manifest["config_hash"] = DigestHex(manifest["config"].dump());
    manifest["seed"] = config.seed;
    manifest["ingest"] = counts.ToJson();
    manifest["stats"] = StatsToJson(stats);

    std::size_t spilled = 0;
    ordered_json stages = ordered_json::array();
    for (const StageSpec& stage : plan.stages) {
      ShardBuilder& b = *builders[stage.index];
      spilled += b.spilled_runs();
      const std::size_t n = b.size();
      std::vector<ShardFile> shards = b.Finish();
      ordered_json s;
      s["index"] = stage.index;
      s["objective"] = ObjectiveName(stage.objective);
      s["name"] = stage.name;
      s["passes"] = config.passes;
      s["eligible_records"] = eligible[stage.index];
      s["skipped_records"] = skipped[stage.index];
      s["examples"] = n;
      ordered_json files = ordered_json::array();
      for (const ShardFile& f : shards) files.push_back(ShardToJson(f));
      s["shards"] = std::move(files);
      stages.push_back(std::move(s));
    }
    builders.clear();
    manifest["stages"] = std::move(stages);
    manifest["runtime"] = {{"threads", config.threads},
                           {"spilled_runs", spilled}};
    manifest["manifest_hash"] = ManifestHash(manifest);

    WriteTextFile(staging / "manifest.json", manifest.dump(2) + "\n");

    fs::create_directories(config.out_dir);
    for (const StageSpec& stage : plan.stages) {
      ReplacePath(staging / stage.name, config.out_dir / stage.name);
    }
    ReplacePath(staging / "manifest.json", config.out_dir / "manifest.json");
    fs::remove_all(staging, ec);
    return manifest;
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
}

// -------------------------------------------------------------- fine-tuning

ordered_json RunFinetuneBuild(const FinetuneConfig& config) {
  CheckFraction(config.fraction);
  if (config.inputs.empty()) throw ConfigError("no input files");
  LineReader reader(config.inputs);

  std::vector<std::pair<std::string, std::string>> examples;
  std::size_t records_used = 0;
  std::size_t records_skipped = 0;
  IngestCounts counts;
  CappedLog log(config.log, 50);

  auto build = [&](const Record& record) {
    std::vector<FinetuneExample> built =
        config.task == Task::kVqa
            ? BuildVqaExamples(record, config.ocr_included, config.example)
            : BuildCaptionExamples(record, config.ocr_included, config.example,
                                   config.eval_mode);
    BuiltLines out(1);
    for (const FinetuneExample& ex : built) {
      out[0].emplace_back(ex.example_id, FinetuneExampleToJson(ex));
    }
    return out;
  };
  auto accept = [&](const Record&, BuiltLines& built) {
    if (built[0].empty()) {
      ++records_skipped;
      return;
    }
    ++records_used;
    for (auto& e : built[0]) examples.push_back(std::move(e));
  };
  auto problem = [&](const std::string& where, const std::string& code,
                     const std::string& detail) {
    log.Line(where + ": skipped (" + code + ") " + detail);
  };
  IngestOptions opts{config.fraction, config.seed, config.threads, 4096};
  Ingest(reader, opts, build, accept, problem, counts);

  std::sort(examples.begin(), examples.end());

  fs::path tmp = config.out_path;
  tmp += ".partial";
  try {
    if (config.out_path.has_parent_path()) {
      fs::create_directories(config.out_path.parent_path());
    }
    std::string body;
    for (const auto& [id, line] : examples) {
      body += line;
      body += '\n';
    }
    WriteTextFile(tmp, body);
    fs::rename(tmp, config.out_path);

    ordered_json summary;
    summary["task"] = TaskName(config.task);
    summary["ocr_included"] = config.ocr_included;
    summary["eval_mode"] = config.eval_mode;
    summary["seed"] = config.seed;
    summary["fraction"] = config.fraction;
    summary["overlap_threshold"] = config.example.overlap_threshold;
    summary["format"] = FormatToJson(config.example.format);
    summary["ingest"] = counts.ToJson();
    summary["records_used"] = records_used;
    summary["records_skipped"] = records_skipped;
    summary["examples"] = examples.size();
    summary["output"] = config.out_path.string();
    summary["blake2b"] = DigestHex(body);
    return summary;
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

}  // namespace scenetext
