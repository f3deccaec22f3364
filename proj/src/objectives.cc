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

#include "scenetext/objectives.h"

#include <utility>

#include "json.hpp"
#include "scenetext/errors.h"
#include "scenetext/hashing.h"
#include "scenetext/utf8.h"

namespace scenetext {
namespace {

struct WordSpan {
  std::size_t begin;
  std::size_t end;
};

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' ||
         c == '\r';
}

// Byte ranges of whitespace-delimited words.
std::vector<WordSpan> WordSpans(std::string_view text) {
  std::vector<WordSpan> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > start) words.push_back({start, i});
  }
  return words;
}

PretrainExample Skeleton(const Record& record, Objective objective,
                         const ExampleConfig& config, std::uint32_t pass) {
  PretrainExample ex;
  ex.example_id = PretrainExampleId(record.image_id, objective, pass);
  ex.image_id = record.image_id;
  ex.objective = objective;
  const bool reading =
      objective == Objective::kOcr || objective == Objective::kSplitOcr;
  ex.prompt = reading ? config.format.ocr_prompt : config.format.caption_prompt;
  return ex;
}

bool HasCaptionWords(const Record& record) {
  const std::string* caption = record.primary_caption();
  return caption != nullptr && !TrimWhitespace(*caption).empty();
}

}  // namespace

std::string_view ObjectiveName(Objective objective) {
  switch (objective) {
    case Objective::kOcr:
      return "OCR";
    case Objective::kSplitOcr:
      return "SPLITOCR";
    case Objective::kCap:
      return "CAP";
    case Objective::kSplitCap:
      return "SPLITCAP";
  }
  return "?";
}

std::string_view ObjectiveSlug(Objective objective) {
  switch (objective) {
    case Objective::kOcr:
      return "ocr";
    case Objective::kSplitOcr:
      return "splitocr";
    case Objective::kCap:
      return "cap";
    case Objective::kSplitCap:
      return "splitcap";
  }
  return "?";
}

Objective ParseObjective(std::string_view name) {
  const std::string lower = AsciiLower(TrimWhitespace(name));
  for (Objective o : kAllObjectives) {
    if (lower == ObjectiveSlug(o)) return o;
  }
  throw ConfigError("unknown objective '" + std::string(name) +
                    "' (expected ocr, splitocr, cap or splitcap)");
}

std::vector<Objective> ParseStageList(std::string_view list) {
  std::vector<Objective> stages;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t comma = list.find(',', start);
    if (comma == std::string_view::npos) comma = list.size();
    stages.push_back(ParseObjective(list.substr(start, comma - start)));
    start = comma + 1;
  }
  return stages;
}

std::string OcrSegment(const std::vector<std::string>& texts,
                       const TextFormat& format) {
  std::string out = format.segment_delimiter;
  out += format.ocr_label;
  out += JoinStrings(texts, format.token_separator);
  return out;
}

SplitRng SplitRng::For(std::uint64_t seed, std::string_view image_id,
                       Objective objective, std::uint32_t pass) {
  std::string key(image_id);
  key.push_back('\x1f');
  key.append(ObjectiveSlug(objective));
  key.push_back('\x1f');
  key.append(std::to_string(pass));
  return SplitRng(KeyedHash64(seed, kSplitDomain, key));
}

std::size_t SplitRng::Uniform(std::size_t n) {
  // Multiply-shift with rejection of the biased low region.
  const std::uint64_t bound = n;
  unsigned __int128 m =
      static_cast<unsigned __int128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

std::size_t SampleSplitPoint(std::size_t n, SplitRng& rng) {
  if (n == 0) throw IneligibleRecord("cannot split an empty sequence");
  return rng.Uniform(n);
}

std::string PretrainExampleId(std::string_view image_id, Objective objective,
                              std::uint32_t pass) {
  std::string id(image_id);
  id.push_back('#');
  id.append(ObjectiveSlug(objective));
  id.push_back('#');
  id.append(std::to_string(pass));
  return id;
}

bool IsEligible(const Record& record, Objective objective) {
  switch (objective) {
    case Objective::kOcr:
    case Objective::kSplitOcr:
      return !record.ocr.empty();
    case Objective::kCap:
    case Objective::kSplitCap:
      return HasCaptionWords(record);
  }
  return false;
}

std::optional<PretrainExample> BuildOcr(const Record& record,
                                        const ExampleConfig& config,
                                        std::uint32_t pass) {
  if (record.ocr.empty()) return std::nullopt;
  PretrainExample ex = Skeleton(record, Objective::kOcr, config, pass);
  ex.target = JoinTokens(OrderTokens(record.ocr, config.overlap_threshold),
                         config.format.token_separator);
  return ex;
}

std::optional<PretrainExample> BuildSplitOcrAt(const Record& record,
                                               std::size_t k,
                                               const ExampleConfig& config,
                                               std::uint32_t pass) {
  if (record.ocr.empty()) return std::nullopt;
  if (k >= record.ocr.size()) {
    throw ContractError("split point " + std::to_string(k) +
                        " out of range for " +
                        std::to_string(record.ocr.size()) + " tokens");
  }
  std::vector<std::string> texts =
      OrderTokens(record.ocr, config.overlap_threshold).Texts();
  PretrainExample ex = Skeleton(record, Objective::kSplitOcr, config, pass);
  std::vector<std::string> rest(std::make_move_iterator(texts.begin() + k),
                                std::make_move_iterator(texts.end()));
  texts.resize(k);
  ex.input_ocr = std::move(texts);
  ex.target = JoinStrings(rest, config.format.token_separator);
  return ex;
}

std::optional<PretrainExample> BuildSplitOcr(const Record& record,
                                             SplitRng& rng,
                                             const ExampleConfig& config,
                                             std::uint32_t pass) {
  if (record.ocr.empty()) return std::nullopt;
  const std::size_t k = SampleSplitPoint(record.ocr.size(), rng);
  return BuildSplitOcrAt(record, k, config, pass);
}

std::optional<PretrainExample> BuildCap(const Record& record,
                                        const ExampleConfig& config,
                                        std::uint32_t pass) {
  if (!HasCaptionWords(record)) return std::nullopt;
  PretrainExample ex = Skeleton(record, Objective::kCap, config, pass);
  ex.input_ocr = OrderTokens(record.ocr, config.overlap_threshold).Texts();
  ex.target = *record.primary_caption();
  return ex;
}

std::optional<PretrainExample> BuildSplitCapAt(const Record& record,
                                               std::size_t k,
                                               const ExampleConfig& config,
                                               std::uint32_t pass) {
  if (!HasCaptionWords(record)) return std::nullopt;
  const std::string& caption = *record.primary_caption();
  const std::vector<WordSpan> words = WordSpans(caption);
  if (k >= words.size()) {
    throw ContractError("split point " + std::to_string(k) +
                        " out of range for " + std::to_string(words.size()) +
                        " caption words");
  }
  PretrainExample ex = Skeleton(record, Objective::kSplitCap, config, pass);
  ex.input_ocr = OrderTokens(record.ocr, config.overlap_threshold).Texts();
  // Cut at word boundaries of the original string so surface spacing inside
  // each part is preserved.
  if (k > 0) {
    ex.input_caption_prefix =
        caption.substr(words.front().begin, words[k - 1].end - words.front().begin);
  }
  ex.target = caption.substr(words[k].begin, words.back().end - words[k].begin);
  return ex;
}

std::optional<PretrainExample> BuildSplitCap(const Record& record,
                                             SplitRng& rng,
                                             const ExampleConfig& config,
                                             std::uint32_t pass) {
  if (!HasCaptionWords(record)) return std::nullopt;
  const std::size_t m = WordSpans(*record.primary_caption()).size();
  return BuildSplitCapAt(record, SampleSplitPoint(m, rng), config, pass);
}

std::optional<PretrainExample> BuildPretrainExample(const Record& record,
                                                    Objective objective,
                                                    const ExampleConfig& config,
                                                    std::uint32_t pass) {
  switch (objective) {
    case Objective::kOcr:
      return BuildOcr(record, config, pass);
    case Objective::kSplitOcr: {
      SplitRng rng = SplitRng::For(config.seed, record.image_id, objective, pass);
      return BuildSplitOcr(record, rng, config, pass);
    }
    case Objective::kCap:
      return BuildCap(record, config, pass);
    case Objective::kSplitCap: {
      SplitRng rng = SplitRng::For(config.seed, record.image_id, objective, pass);
      return BuildSplitCap(record, rng, config, pass);
    }
  }
  return std::nullopt;
}

std::string RenderPretrainInput(const PretrainExample& example,
                                const TextFormat& format) {
  std::string out = example.prompt;
  switch (example.objective) {
    case Objective::kOcr:
    case Objective::kSplitOcr:
      if (!example.input_ocr.empty()) out += OcrSegment(example.input_ocr, format);
      break;
    case Objective::kCap:
      out += OcrSegment(example.input_ocr, format);
      break;
    case Objective::kSplitCap:
      out += OcrSegment(example.input_ocr, format);
      if (!example.input_caption_prefix.empty()) {
        out += format.segment_delimiter;
        out += example.input_caption_prefix;
      }
      break;
  }
  return out;
}

std::string PretrainExampleToJson(const PretrainExample& example,
                                  const TextFormat& format) {
  nlohmann::ordered_json doc;
  doc["example_id"] = example.example_id;
  doc["image_id"] = example.image_id;
  doc["objective"] = ObjectiveName(example.objective);
  doc["prompt"] = example.prompt;
  doc["input_ocr"] = example.input_ocr;
  doc["input_caption_prefix"] = example.input_caption_prefix;
  doc["target"] = example.target;
  doc["input_text"] = RenderPretrainInput(example, format);
  return doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

StagePlan BuildStagePlan(std::span<const Objective> stages,
                         std::string corpus) {
  if (stages.empty()) throw ConfigError("stage plan needs at least one objective");
  StagePlan plan;
  plan.corpus = std::move(corpus);
  for (std::size_t i = 0; i < stages.size(); ++i) {
    StageSpec spec;
    spec.index = i;
    spec.objective = stages[i];
    spec.name = "stage" + std::to_string(i) + "_" +
                std::string(ObjectiveSlug(stages[i]));
    plan.stages.push_back(std::move(spec));
  }
  return plan;
}

}  // namespace scenetext
