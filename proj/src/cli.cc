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

#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scenetext/errors.h"
#include "scenetext/metrics.h"
#include "scenetext/pipeline.h"

namespace scenetext {
namespace {

using ordered_json = nlohmann::ordered_json;

struct FormatFlags {
  TextFormat format;
  double overlap_threshold = kDefaultOverlapThreshold;

  void Register(CLI::App* cmd) {
    cmd->add_option("--overlap-threshold", overlap_threshold,
                    "Vertical overlap needed to join a reading line")
        ->capture_default_str();
    cmd->add_option("--ocr-prompt", format.ocr_prompt)->capture_default_str();
    cmd->add_option("--caption-prompt", format.caption_prompt)
        ->capture_default_str();
    cmd->add_option("--vqa-prompt", format.vqa_prompt)->capture_default_str();
    cmd->add_option("--token-separator", format.token_separator)
        ->capture_default_str();
    cmd->add_option("--question-delimiter", format.question_delimiter)
        ->capture_default_str();
    cmd->add_option("--segment-delimiter", format.segment_delimiter)
        ->capture_default_str();
    cmd->add_option("--ocr-label", format.ocr_label)->capture_default_str();
  }

  ExampleConfig ToConfig(std::uint64_t seed) const {
    ExampleConfig c;
    c.format = format;
    c.overlap_threshold = overlap_threshold;
    c.seed = seed;
    return c;
  }
};

void PrintCounts(std::ostream& err, const IngestCounts& c) {
  err << "  lines:            " << c.lines << "\n"
      << "  parse errors:     " << c.parse_errors << "\n"
      << "  invalid records:  " << c.invalid_records << "\n";
  for (const auto& [code, n] : c.violations) {
    err << "    " << code << ": " << n << "\n";
  }
  if (c.subsampled_out > 0) {
    err << "  subsampled out:   " << c.subsampled_out << "\n";
  }
  err << "  kept:             " << c.kept << "\n";
}

void PrintStats(std::ostream& err, const DatasetStats& s) {
  err << "  records:          " << s.record_count << "\n"
      << "  empty OCR:        " << s.empty_ocr_count << " ("
      << std::fixed << std::setprecision(4) << s.empty_ocr_fraction() << ")\n";
  err.unsetf(std::ios::floatfield);
  for (Objective o : kAllObjectives) {
    auto it = s.eligible.find(o);
    err << "  eligible " << std::left << std::setw(9) << ObjectiveName(o)
        << std::right << (it == s.eligible.end() ? 0 : it->second) << "\n";
  }
  err << "  eligible VQA      " << s.vqa_eligible << "\n";
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Scene-text corpus builder and evaluator", "scenetext"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Write a JSON result to standard output");

  // validate
  std::vector<std::string> validate_in;
  std::size_t max_problems = 100;
  auto* validate = app.add_subcommand("validate", "Check records against the schema");
  validate->add_option("--in", validate_in, "Input JSONL files")->required();
  validate->add_option("--max-problems", max_problems)->capture_default_str();
  validate->add_flag("--json", json);

  // stats
  std::vector<std::string> stats_in;
  double stats_fraction = 1.0;
  std::uint64_t stats_seed = 0;
  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--in", stats_in, "Input JSONL files")->required();
  stats->add_option("--fraction", stats_fraction)->capture_default_str();
  stats->add_option("--seed", stats_seed)->capture_default_str();
  stats->add_flag("--json", json);

  // build-pretrain
  PipelineConfig pre;
  std::string pre_out;
  std::string objective;
  std::string stage_list;
  FormatFlags pre_format;
  pre.threads = DefaultThreadCount();
  auto* build_pre = app.add_subcommand("build-pretrain", "Build pre-training shards");
  build_pre->add_option("--in", pre.inputs, "Input JSONL files")->required();
  build_pre->add_option("--out-dir", pre_out, "Output directory")->required();
  auto* obj_opt = build_pre->add_option(
      "--objective", objective, "One of ocr, splitocr, cap, splitcap");
  build_pre->add_option("--stages", stage_list,
                        "Comma-separated stage plan, e.g. splitocr,cap")
      ->excludes(obj_opt);
  build_pre->add_option("--seed", pre.seed)->capture_default_str();
  build_pre->add_option("--fraction", pre.fraction)->capture_default_str();
  build_pre->add_option("--shards", pre.shard_count)->capture_default_str();
  build_pre->add_option("--passes", pre.passes,
                        "Examples per record per objective (fresh splits each pass)")
      ->capture_default_str();
  build_pre->add_option("--resolution", pre.resolution,
                        "Pre-training image resolution, recorded in the manifest")
      ->capture_default_str();
  build_pre->add_flag("--compress", pre.compress, "gzip shards");
  build_pre->add_option("--threads", pre.threads)
      ->envname("SCENETEXT_THREADS")
      ->capture_default_str();
  pre_format.Register(build_pre);
  build_pre->add_flag("--json", json);

  // build-finetune
  FinetuneConfig ft;
  std::string ft_out;
  std::string ft_task = "vqa";
  bool no_ocr = false;
  FormatFlags ft_format;
  ft.threads = DefaultThreadCount();
  auto* build_ft = app.add_subcommand("build-finetune", "Build fine-tuning examples");
  build_ft->add_option("--in", ft.inputs, "Input JSONL files")->required();
  build_ft->add_option("--out", ft_out, "Output JSONL file")->required();
  build_ft->add_option("--task", ft_task, "vqa or caption")->capture_default_str();
  build_ft->add_flag("--no-ocr-input", no_ocr, "Leave OCR tokens out of the input");
  build_ft->add_flag("--eval", ft.eval_mode,
                     "One caption example per record with every reference");
  build_ft->add_option("--seed", ft.seed)->capture_default_str();
  build_ft->add_option("--fraction", ft.fraction)->capture_default_str();
  build_ft->add_option("--threads", ft.threads)
      ->envname("SCENETEXT_THREADS")
      ->capture_default_str();
  ft_format.Register(build_ft);
  build_ft->add_flag("--json", json);

  // subsample
  std::string sub_in;
  std::string sub_out;
  double sub_fraction = 1.0;
  std::uint64_t sub_seed = 0;
  auto* subsample = app.add_subcommand("subsample", "Hash-threshold subsample of records");
  subsample->add_option("--in", sub_in, "Input JSONL file")->required();
  subsample->add_option("--out", sub_out, "Output JSONL file")->required();
  subsample->add_option("--fraction", sub_fraction)->required();
  subsample->add_option("--seed", sub_seed)->capture_default_str();
  subsample->add_flag("--json", json);

  // evaluate
  std::string eval_task;
  std::string pred_path;
  std::string gold_path;
  double tau = kDefaultAnlsThreshold;
  bool per_item = false;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  evaluate->add_option("--task", eval_task, "vqa, vqa_anls or caption")->required();
  evaluate->add_option("--pred", pred_path, "Predictions JSONL")->required();
  evaluate->add_option("--gold", gold_path, "Gold JSONL")->required();
  evaluate->add_option("--tau", tau, "ANLS threshold")->capture_default_str();
  evaluate->add_flag("--per-item", per_item, "Include per-item scores in JSON");
  evaluate->add_flag("--json", json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (validate->parsed()) {
      const ValidateSummary s = ValidateFiles(validate_in, max_problems);
      err << "validate\n";
      PrintCounts(err, s.counts);
      for (const auto& p : s.problems) {
        err << "  " << p["where"].get<std::string>() << ": "
            << p["code"].get<std::string>() << " "
            << p["detail"].get<std::string>() << "\n";
      }
      if (json) {
        ordered_json j;
        j["command"] = "validate";
        j["counts"] = s.counts.ToJson();
        j["problems"] = s.problems;
        out << j.dump(2) << "\n";
      }
      return kExitOk;
    }

    if (stats->parsed()) {
      const StatsSummary s = ComputeStatsFiles(stats_in, stats_fraction, stats_seed);
      err << "stats\n";
      PrintCounts(err, s.counts);
      PrintStats(err, s.stats);
      if (json) {
        ordered_json j;
        j["command"] = "stats";
        j["counts"] = s.counts.ToJson();
        j["stats"] = StatsToJson(s.stats);
        out << j.dump(2) << "\n";
      }
      return kExitOk;
    }

    if (build_pre->parsed()) {
      if (!objective.empty()) {
        pre.stages = {ParseObjective(objective)};
      } else if (!stage_list.empty()) {
        pre.stages = ParseStageList(stage_list);
      } else {
        throw ConfigError("one of --objective or --stages is required");
      }
      pre.out_dir = pre_out;
      pre.example = pre_format.ToConfig(pre.seed);
      pre.log = &err;
      const ordered_json manifest = RunPipeline(pre);
      err << "build-pretrain: wrote " << pre_out << "/manifest.json\n";
      PrintCounts(err, IngestCounts{
                           manifest["ingest"]["lines"].get<std::size_t>(),
                           manifest["ingest"]["parse_errors"].get<std::size_t>(),
                           manifest["ingest"]["invalid_records"].get<std::size_t>(),
                           {},
                           manifest["ingest"]["subsampled_out"].get<std::size_t>(),
                           manifest["ingest"]["kept"].get<std::size_t>()});
      for (const auto& s : manifest["stages"]) {
        err << "  stage " << s["index"].get<std::size_t>() << " "
            << s["objective"].get<std::string>() << ": "
            << s["examples"].get<std::size_t>() << " examples in "
            << s["shards"].size() << " shard(s)\n";
      }
      err << "  manifest hash:    " << manifest["manifest_hash"].get<std::string>()
          << "\n";
      if (json) out << manifest.dump(2) << "\n";
      return kExitOk;
    }

    if (build_ft->parsed()) {
      ft.task = ParseTask(ft_task);
      ft.ocr_included = !no_ocr;
      ft.out_path = ft_out;
      ft.example = ft_format.ToConfig(ft.seed);
      ft.log = &err;
      ordered_json summary = RunFinetuneBuild(ft);
      summary["threads"] = ft.threads;
      err << "build-finetune: " << summary["examples"].get<std::size_t>() << " "
          << ft_task << " examples -> " << ft_out << "\n";
      if (json) out << summary.dump(2) << "\n";
      return kExitOk;
    }

    if (subsample->parsed()) {
      CheckFraction(sub_fraction);
      std::ifstream in(sub_in, std::ios::binary);
      if (!in) throw std::runtime_error("cannot read input " + sub_in);
      std::ofstream o(sub_out, std::ios::binary | std::ios::trunc);
      if (!o) throw std::runtime_error("cannot create " + sub_out);
      const SubsampleSummary s = SubsampleStream(in, o, sub_fraction, sub_seed);
      o.flush();
      if (!o) throw std::runtime_error("write failed: " + sub_out);
      err << "subsample: kept " << s.kept << " of " << s.lines << " records ("
          << s.rejected << " unparseable)\n";
      if (json) {
        ordered_json j;
        j["command"] = "subsample";
        j["fraction"] = sub_fraction;
        j["seed"] = sub_seed;
        j["lines"] = s.lines;
        j["kept"] = s.kept;
        j["rejected"] = s.rejected;
        out << j.dump(2) << "\n";
      }
      return kExitOk;
    }

    if (evaluate->parsed()) {
      const EvalTask task = ParseEvalTask(eval_task);
      EvalOptions options;
      options.tau = tau;
      const MetricReport report = EvaluateFiles(pred_path, gold_path, task, options);
      err << "evaluate " << EvalTaskName(task) << " (" << report.n_items
          << " items)\n";
      for (const auto& [name, value] : report.aggregate) {
        err << "  " << name << ": " << std::setprecision(6) << value << "\n";
      }
      if (json) out << MetricReportToJson(report, per_item) << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AlignmentError& e) {
    err << "error: " << e.what() << "\n";
    std::size_t shown = 0;
    for (const std::string& id : e.missing_predictions()) {
      if (shown++ >= 20) break;
      err << "  no prediction for " << id << "\n";
    }
    shown = 0;
    for (const std::string& id : e.unknown_predictions()) {
      if (shown++ >= 20) break;
      err << "  no gold entry for " << id << "\n";
    }
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace scenetext
