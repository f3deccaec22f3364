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

// Downstream example formatting for open-ended scene-text VQA and
// scene-text captioning.
//
//   VQA      "<vqa_prompt> <question>[ \n OCR: <tokens>]"  -> answer
//   CAPTION  "<caption_prompt>[ \n OCR: <tokens>]"         -> caption
//
// The OCR segment is dropped entirely when ocr_included is false.

#ifndef SCENETEXT_FINETUNE_H_
#define SCENETEXT_FINETUNE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenetext/objectives.h"
#include "scenetext/record.h"

namespace scenetext {

enum class Task { kVqa, kCaption };

std::string_view TaskName(Task task);  // "VQA" / "CAPTION"
Task ParseTask(std::string_view name);  // case-insensitive; ConfigError

struct FinetuneExample {
  std::string example_id;
  std::string image_id;
  Task task = Task::kVqa;
  std::string input_text;
  std::string target;
  bool ocr_included = true;
  std::vector<std::string> answers;     // VQA: every gold answer
  std::vector<std::string> references;  // CAPTION: every reference caption

  friend bool operator==(const FinetuneExample&,
                         const FinetuneExample&) = default;
};

// Most frequent string; ties go to the lexicographically smallest.
// Strings are compared verbatim. Throws ContractError on empty input.
std::string MajorityAnswer(std::span<const std::string> answers);

// One example per question, target = MajorityAnswer(answers). Empty when
// the record carries no QA.
std::vector<FinetuneExample> BuildVqaExamples(const Record& record,
                                              bool ocr_included,
                                              const ExampleConfig& config);

// Training mode: one example per reference caption. Evaluation mode: a
// single example whose target is the primary caption. Every example
// carries the full reference list. Empty when no caption is present.
std::vector<FinetuneExample> BuildCaptionExamples(const Record& record,
                                                  bool ocr_included,
                                                  const ExampleConfig& config,
                                                  bool eval_mode = false);

// The caption-task input text alone (shared with CAP pre-training).
std::string RenderCaptionInput(const Record& record, bool ocr_included,
                               const ExampleConfig& config);

std::string FinetuneExampleToJson(const FinetuneExample& example);

}  // namespace scenetext

#endif  // SCENETEXT_FINETUNE_H_
