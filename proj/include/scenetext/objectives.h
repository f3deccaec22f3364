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

// Pre-training example construction.
//
//   OCR       <image, prompt>                       -> all ordered OCR text
//   SPLITOCR  <image, prompt, OCR tokens [0, k)>    -> OCR tokens [k, n)
//   CAP       <image, prompt, all OCR tokens>       -> caption
//   SPLITCAP  <image, prompt, all OCR, words [0,k)> -> caption words [k, m)
//
// Split points are uniform over {0, ..., n-1}, so the target is never empty
// and k = 0 reduces SPLITOCR to OCR. Randomness comes from a per-record
// generator keyed by (seed, image_id, objective, pass), which makes every
// example independent of processing order and thread count.

#ifndef SCENETEXT_OBJECTIVES_H_
#define SCENETEXT_OBJECTIVES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenetext/record.h"
#include "scenetext/spatial_order.h"

namespace scenetext {

enum class Objective { kOcr, kSplitOcr, kCap, kSplitCap };

inline constexpr Objective kAllObjectives[] = {
    Objective::kOcr, Objective::kSplitOcr, Objective::kCap,
    Objective::kSplitCap};

// "OCR", "SPLITOCR", "CAP", "SPLITCAP".
std::string_view ObjectiveName(Objective objective);
// Lowercase form used in flags, file names and example ids.
std::string_view ObjectiveSlug(Objective objective);
// Case-insensitive; throws ConfigError for anything else.
Objective ParseObjective(std::string_view name);
// Comma-separated list, e.g. "splitocr,cap". Throws ConfigError.
std::vector<Objective> ParseStageList(std::string_view list);

// Segment layout of model input text. Shared with the fine-tuning
// formatter so CAP pre-training and captioning fine-tuning inputs agree
// byte for byte.
struct TextFormat {
  std::string ocr_prompt = "read:";
  std::string caption_prompt = "caption:";
  std::string vqa_prompt = "answer:";
  std::string token_separator = " ";
  std::string question_delimiter = " ";
  std::string segment_delimiter = " \n ";
  std::string ocr_label = "OCR: ";
};

// segment_delimiter + ocr_label + tokens joined by token_separator.
std::string OcrSegment(const std::vector<std::string>& texts,
                       const TextFormat& format);

struct ExampleConfig {
  TextFormat format;
  double overlap_threshold = kDefaultOverlapThreshold;
  std::uint64_t seed = 0;
};

// Per-record generator. std::mt19937_64 is fully specified by the
// standard; bounded draws use our own rejection step because the standard
// distributions are implementation-defined.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t state) : engine_(state) {}

  static SplitRng For(std::uint64_t seed, std::string_view image_id,
                      Objective objective, std::uint32_t pass);

  // Uniform over {0, ..., n-1}; n must be > 0.
  std::size_t Uniform(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

// Throws IneligibleRecord when n == 0.
std::size_t SampleSplitPoint(std::size_t n, SplitRng& rng);

struct PretrainExample {
  std::string example_id;
  std::string image_id;
  Objective objective = Objective::kOcr;
  std::string prompt;
  std::vector<std::string> input_ocr;
  std::string input_caption_prefix;
  std::string target;

  friend bool operator==(const PretrainExample&,
                         const PretrainExample&) = default;
};

// "<image_id>#<objective slug>#<pass>".
std::string PretrainExampleId(std::string_view image_id, Objective objective,
                              std::uint32_t pass);

// Builders return std::nullopt when the record is ineligible for the
// objective (no OCR for OCR/SPLITOCR, no caption for CAP/SPLITCAP).
std::optional<PretrainExample> BuildOcr(const Record& record,
                                        const ExampleConfig& config,
                                        std::uint32_t pass = 0);
std::optional<PretrainExample> BuildSplitOcr(const Record& record,
                                             SplitRng& rng,
                                             const ExampleConfig& config,
                                             std::uint32_t pass = 0);
// Same as BuildSplitOcr with the split point fixed. `k` must be below the
// token count (ContractError otherwise).
std::optional<PretrainExample> BuildSplitOcrAt(const Record& record,
                                               std::size_t k,
                                               const ExampleConfig& config,
                                               std::uint32_t pass = 0);
std::optional<PretrainExample> BuildCap(const Record& record,
                                        const ExampleConfig& config,
                                        std::uint32_t pass = 0);
std::optional<PretrainExample> BuildSplitCap(const Record& record,
                                             SplitRng& rng,
                                             const ExampleConfig& config,
                                             std::uint32_t pass = 0);
std::optional<PretrainExample> BuildSplitCapAt(const Record& record,
                                               std::size_t k,
                                               const ExampleConfig& config,
                                               std::uint32_t pass = 0);

// Dispatches on `objective`, deriving the split generator from
// (config.seed, record.image_id, objective, pass).
std::optional<PretrainExample> BuildPretrainExample(const Record& record,
                                                    Objective objective,
                                                    const ExampleConfig& config,
                                                    std::uint32_t pass = 0);

bool IsEligible(const Record& record, Objective objective);

// Model-side input text for an example: prompt, then the OCR segment, then
// the caption prefix for SPLITCAP. OCR and SPLITOCR omit the OCR segment
// when there are no input tokens; CAP and SPLITCAP always carry it.
std::string RenderPretrainInput(const PretrainExample& example,
                                const TextFormat& format);

// One JSONL line (no trailing newline). Carries the schema fields plus the
// rendered "input_text".
std::string PretrainExampleToJson(const PretrainExample& example,
                                  const TextFormat& format);

struct StageSpec {
  std::size_t index = 0;
  Objective objective = Objective::kOcr;
  std::string name;  // "stage<index>_<slug>", also the output directory
};

// Sequential pre-training plan, e.g. SPLITOCR then CAP.
struct StagePlan {
  std::string corpus;
  std::vector<StageSpec> stages;
};

// Throws ConfigError on an empty stage list.
StagePlan BuildStagePlan(std::span<const Objective> stages,
                         std::string corpus);

}  // namespace scenetext

#endif  // SCENETEXT_OBJECTIVES_H_
