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

// Corpus record schema and ingestion.
//
// One record per JSONL line:
//
//   {"image_id": str, "image_uri": str?, "image_size": [w, h]?,
//    "caption": str | [str, ...]?,
//    "ocr": [{"text": str, "bbox": [x, y, w, h], "confidence": float?}],
//    "qa": [{"question": str, "answers": [str, ...]}]?}
//
// Unknown fields are ignored. Boxes are axis-aligned envelopes in pixels;
// polygon sources must be reduced upstream. Token text is stored verbatim.

#ifndef SCENETEXT_RECORD_H_
#define SCENETEXT_RECORD_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace scenetext {

struct BBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  double bottom() const { return y + h; }
  double right() const { return x + w; }
  double center_y() const { return y + h / 2; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct OcrToken {
  std::string text;
  BBox bbox;
  double confidence = 1.0;

  friend bool operator==(const OcrToken&, const OcrToken&) = default;
};

struct QaAnnotation {
  std::string question;
  std::vector<std::string> answers;  // 1..10; scene-text VQA uses 10

  friend bool operator==(const QaAnnotation&, const QaAnnotation&) = default;
};

struct ImageSize {
  double width = 0;
  double height = 0;

  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

inline constexpr std::size_t kMaxAnswers = 10;

struct Record {
  std::string image_id;
  std::optional<std::string> image_uri;
  std::optional<ImageSize> image_size;
  // Empty when the record has no caption. A JSON array in the "caption"
  // field yields several references; the first one is the primary caption.
  std::vector<std::string> captions;
  std::vector<OcrToken> ocr;
  std::vector<QaAnnotation> qa;

  const std::string* primary_caption() const {
    return captions.empty() ? nullptr : &captions.front();
  }

  friend bool operator==(const Record&, const Record&) = default;
};

// Throws ParseError (malformed JSON, with byte offset) or SchemaError.
Record ParseRecord(std::string_view line);

// Compact single-line JSON; ParseRecord(SerializeRecord(r)) == r.
std::string SerializeRecord(const Record& record);

// Violation codes.
inline constexpr std::string_view kBBoxOutOfBounds = "bbox_out_of_bounds";
inline constexpr std::string_view kConfidenceRange = "confidence_range";
inline constexpr std::string_view kDuplicateImageId = "duplicate_image_id";

struct Violation {
  std::string code;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool Contains(std::string_view code) const;
};

// Checks that need only the record itself.
ValidationReport ValidateRecord(const Record& record);

// Stream validator: ValidateRecord plus duplicate image_id detection across
// every record passed to Check(). Not thread-safe.
class RecordValidator {
 public:
  ValidationReport Check(const Record& record);

  // Registers an already-validated record id; returns false on duplicates.
  bool Register(const std::string& image_id);

 private:
  std::unordered_set<std::string> seen_;
};

}  // namespace scenetext

#endif  // SCENETEXT_RECORD_H_
