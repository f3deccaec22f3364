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

#include "scenetext/finetune.h"

#include <map>

#include "json.hpp"
#include "scenetext/errors.h"
#include "scenetext/spatial_order.h"
#include "scenetext/utf8.h"

namespace scenetext {

std::string_view TaskName(Task task) {
  return task == Task::kVqa ? "VQA" : "CAPTION";
}

Task ParseTask(std::string_view name) {
  const std::string lower = AsciiLower(TrimWhitespace(name));
  if (lower == "vqa") return Task::kVqa;
  if (lower == "caption") return Task::kCaption;
  throw ConfigError("unknown fine-tuning task '" + std::string(name) +
                    "' (expected vqa or caption)");
}

std::string MajorityAnswer(std::span<const std::string> answers) {
  if (answers.empty()) throw ContractError("no answers to choose from");
  std::map<std::string, int> counts;
  for (const std::string& a : answers) ++counts[a];
  // std::map iterates in lexicographic order, so the first strict maximum
  // is also the smallest string among the tied ones.
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

std::vector<FinetuneExample> BuildVqaExamples(const Record& record,
                                              bool ocr_included,
                                              const ExampleConfig& config) {
  std::vector<FinetuneExample> out;
  if (record.qa.empty()) return out;
  std::vector<std::string> ocr_texts;
  if (ocr_included) {
    ocr_texts = OrderTokens(record.ocr, config.overlap_threshold).Texts();
  }
  const TextFormat& fmt = config.format;
  for (std::size_t i = 0; i < record.qa.size(); ++i) {
    const QaAnnotation& qa = record.qa[i];
    FinetuneExample ex;
    ex.example_id = record.image_id + "#vqa#" + std::to_string(i);
    ex.image_id = record.image_id;
    ex.task = Task::kVqa;
    ex.input_text = fmt.vqa_prompt + fmt.question_delimiter + qa.question;
    if (ocr_included) ex.input_text += OcrSegment(ocr_texts, fmt);
    ex.target = MajorityAnswer(qa.answers);
    ex.ocr_included = ocr_included;
    ex.answers = qa.answers;
    out.push_back(std::move(ex));
  }
  return out;
}

std::string RenderCaptionInput(const Record& record, bool ocr_included,
                               const ExampleConfig& config) {
  std::string input = config.format.caption_prompt;
  if (ocr_included) {
    input += OcrSegment(OrderTokens(record.ocr, config.overlap_threshold).Texts(),
                        config.format);
  }
  return input;
}

std::vector<FinetuneExample> BuildCaptionExamples(const Record& record,
                                                  bool ocr_included,
                                                  const ExampleConfig& config,
                                                  bool eval_mode) {
  std::vector<FinetuneExample> out;
  if (record.captions.empty()) return out;
  const std::string input = RenderCaptionInput(record, ocr_included, config);
  const std::size_t n = eval_mode ? 1 : record.captions.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!eval_mode && TrimWhitespace(record.captions[i]).empty()) continue;
    FinetuneExample ex;
    ex.example_id = record.image_id + "#caption#" + std::to_string(i);
    ex.image_id = record.image_id;
    ex.task = Task::kCaption;
    ex.input_text = input;
    ex.target = record.captions[i];
    ex.ocr_included = ocr_included;
    ex.references = record.captions;
    out.push_back(std::move(ex));
  }
  return out;
}

std::string FinetuneExampleToJson(const FinetuneExample& example) {
  nlohmann::ordered_json doc;
  doc["example_id"] = example.example_id;
  doc["image_id"] = example.image_id;
  doc["task"] = TaskName(example.task);
  doc["input_text"] = example.input_text;
  doc["target"] = example.target;
  doc["ocr_included"] = example.ocr_included;
  if (example.task == Task::kVqa) {
    doc["answers"] = example.answers;
  } else {
    doc["references"] = example.references;
  }
  return doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace scenetext
