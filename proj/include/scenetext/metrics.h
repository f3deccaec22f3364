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

// Evaluation metrics for scene-text VQA and captioning.
//
// VQA accuracy uses the ten leave-one-out subsets of nine gold answers:
// each subset scores min(matches / 3, 1) and the item score is their mean.
// With m matching answers among ten that is
//
//   [m * min((m - 1) / 3, 1) + (10 - m) * min(m / 3, 1)] / 10.
//
// ANLS compares lowercased, trimmed strings by normalized Levenshtein
// similarity over Unicode scalar values and zeroes similarities below tau.
//
// Caption metrics tokenize by lowercasing and splitting on anything that
// is not an ASCII letter or digit (bytes >= 0x80 count as word bytes).
// CIDEr is the CIDEr-D variant: clipped TF-IDF n-gram vectors for
// n = 1..4, document frequencies over the references, a Gaussian length
// penalty with sigma = 6, and a factor of 10.

#ifndef SCENETEXT_METRICS_H_
#define SCENETEXT_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scenetext {

inline constexpr std::size_t kVqaAnswerCount = 10;
inline constexpr double kDefaultAnlsThreshold = 0.5;
inline constexpr double kCiderSigma = 6.0;
inline constexpr double kRougeBeta = 1.2;

// Lowercase, collapse whitespace, strip .,!?"' around each word, map
// "zero".."ten" to digits and drop the articles a/an/the.
std::string NormalizeAnswer(std::string_view text);

// Closed form of the leave-one-out score for `matches` in [0, 10].
double VqaAccuracyFromMatches(std::size_t matches);

// Throws ContractError unless answers.size() == 10.
double VqaAccuracy(std::string_view prediction,
                   std::span<const std::string> answers);

// Unit-cost edit distance over Unicode scalar values.
std::size_t Levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t Levenshtein(std::string_view a, std::string_view b);

// 1 - distance / max length after lowercase + trim; 1 when both are empty.
double NormalizedLevenshteinSimilarity(std::string_view prediction,
                                       std::string_view gold);

// Max over golds of the thresholded similarity. Throws ContractError on an
// empty gold list.
double Anls(std::string_view prediction, std::span<const std::string> golds,
            double tau = kDefaultAnlsThreshold);

struct CaptionItem {
  std::string candidate;
  std::vector<std::string> references;
};

std::vector<std::string> TokenizeCaption(std::string_view text);

// Per-item CIDEr-D scores. Needs at least two items (ContractError).
std::vector<double> CiderScores(std::span<const CaptionItem> items);
// Mean of CiderScores.
double Cider(std::span<const CaptionItem> items);

// Corpus BLEU-4: clipped n-gram precision for n = 1..4, geometric mean,
// brevity penalty against the closest reference length (shorter wins
// ties). Throws ContractError on empty input.
double Bleu4(std::span<const CaptionItem> items);

// LCS F-measure with beta = 1.2, max over references. ContractError on an
// empty reference list.
double RougeL(const CaptionItem& item);

enum class EvalTask { kVqa, kVqaAnls, kCaption };

EvalTask ParseEvalTask(std::string_view name);  // vqa | vqa_anls | caption
std::string_view EvalTaskName(EvalTask task);

struct ItemScore {
  std::string example_id;
  std::map<std::string, double> scores;
};

struct MetricReport {
  EvalTask task = EvalTask::kVqa;
  std::size_t n_items = 0;
  std::map<std::string, double> aggregate;  // accuracy, anls, bleu4, ...
  std::vector<ItemScore> per_item;          // sorted by example_id
};

struct EvalOptions {
  double tau = kDefaultAnlsThreshold;
};

// Predictions: {"example_id", "prediction"} per line. Gold lines carry
// "answers" (VQA tasks) or "references" (captioning), as written by the
// fine-tuning builder. Throws AlignmentError if the id sets differ or the
// prediction set is empty, ParseError/SchemaError on bad lines.
MetricReport Evaluate(std::istream& predictions, std::istream& gold,
                      EvalTask task, const EvalOptions& options = {});
MetricReport EvaluateFiles(const std::string& predictions_path,
                           const std::string& gold_path, EvalTask task,
                           const EvalOptions& options = {});

std::string MetricReportToJson(const MetricReport& report,
                               bool include_per_item);

}  // namespace scenetext

#endif  // SCENETEXT_METRICS_H_
