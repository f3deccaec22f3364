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

#include "scenetext/record.h"

#include <sstream>

#include "json.hpp"
#include "scenetext/errors.h"
#include "scenetext/utf8.h"

namespace scenetext {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

std::string RequireString(const json& v, const std::string& where) {
  if (!v.is_string()) Fail(where, "expected string");
  return v.get<std::string>();
}

double RequireNumber(const json& v, const std::string& where) {
  if (!v.is_number()) Fail(where, "expected number");
  return v.get<double>();
}

BBox ParseBBox(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4) Fail(where, "expected [x, y, w, h]");
  BBox b;
  b.x = RequireNumber(v[0], where + "[0]");
  b.y = RequireNumber(v[1], where + "[1]");
  b.w = RequireNumber(v[2], where + "[2]");
  b.h = RequireNumber(v[3], where + "[3]");
  if (!(b.w > 0) || !(b.h > 0)) Fail(where, "width and height must be > 0");
  return b;
}

OcrToken ParseToken(const json& v, const std::string& where) {
  if (!v.is_object()) Fail(where, "expected object");
  OcrToken t;
  auto text = v.find("text");
  if (text == v.end()) Fail(where, "missing text");
  t.text = RequireString(*text, where + ".text");
  if (TrimWhitespace(t.text).empty()) Fail(where, "empty token text");
  if (t.text.find_first_of("\n\r") != std::string::npos) {
    Fail(where, "token text contains a newline");
  }
  auto bbox = v.find("bbox");
  if (bbox == v.end()) Fail(where, "missing bbox");
  t.bbox = ParseBBox(*bbox, where + ".bbox");
  if (auto conf = v.find("confidence"); conf != v.end() && !conf->is_null()) {
    t.confidence = RequireNumber(*conf, where + ".confidence");
  }
  return t;
}

QaAnnotation ParseQa(const json& v, const std::string& where) {
  if (!v.is_object()) Fail(where, "expected object");
  QaAnnotation qa;
  auto q = v.find("question");
  if (q == v.end()) Fail(where, "missing question");
  qa.question = RequireString(*q, where + ".question");
  if (TrimWhitespace(qa.question).empty()) Fail(where, "empty question");
  auto answers = v.find("answers");
  if (answers == v.end() || !answers->is_array()) {
    Fail(where, "answers must be an array");
  }
  if (answers->empty() || answers->size() > kMaxAnswers) {
    Fail(where, "answers must hold 1 to 10 strings");
  }
  for (std::size_t i = 0; i < answers->size(); ++i) {
    qa.answers.push_back(RequireString(
        (*answers)[i], where + ".answers[" + std::to_string(i) + "]"));
  }
  return qa;
}

json BBoxToJson(const BBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

}  // namespace

Record ParseRecord(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!doc.is_object()) throw SchemaError("record: expected a JSON object");

  Record r;
  auto id = doc.find("image_id");
  if (id == doc.end() || id->is_null()) throw SchemaError("missing image_id");
  r.image_id = RequireString(*id, "image_id");
  if (r.image_id.empty()) throw SchemaError("image_id: empty");

  if (auto uri = doc.find("image_uri"); uri != doc.end() && !uri->is_null()) {
    r.image_uri = RequireString(*uri, "image_uri");
  }
  if (auto size = doc.find("image_size");
      size != doc.end() && !size->is_null()) {
    if (!size->is_array() || size->size() != 2) {
      Fail("image_size", "expected [w, h]");
    }
    ImageSize s{RequireNumber((*size)[0], "image_size[0]"),
                RequireNumber((*size)[1], "image_size[1]")};
    if (!(s.width > 0) || !(s.height > 0)) {
      Fail("image_size", "dimensions must be > 0");
    }
    r.image_size = s;
  }
  if (auto cap = doc.find("caption"); cap != doc.end() && !cap->is_null()) {
    if (cap->is_array()) {
      for (std::size_t i = 0; i < cap->size(); ++i) {
        r.captions.push_back(
            RequireString((*cap)[i], "caption[" + std::to_string(i) + "]"));
      }
    } else {
      r.captions.push_back(RequireString(*cap, "caption"));
    }
  }
  auto ocr = doc.find("ocr");
  if (ocr != doc.end() && !ocr->is_null()) {
    if (!ocr->is_array()) Fail("ocr", "expected array");
    r.ocr.reserve(ocr->size());
    for (std::size_t i = 0; i < ocr->size(); ++i) {
      r.ocr.push_back(ParseToken((*ocr)[i], "ocr[" + std::to_string(i) + "]"));
    }
  }
  if (auto qa = doc.find("qa"); qa != doc.end() && !qa->is_null()) {
    if (!qa->is_array()) Fail("qa", "expected array");
    for (std::size_t i = 0; i < qa->size(); ++i) {
      r.qa.push_back(ParseQa((*qa)[i], "qa[" + std::to_string(i) + "]"));
    }
  }
  return r;
}

std::string SerializeRecord(const Record& record) {
  json doc;
  doc["image_id"] = record.image_id;
  if (record.image_uri) doc["image_uri"] = *record.image_uri;
  if (record.image_size) {
    doc["image_size"] =
        json::array({record.image_size->width, record.image_size->height});
  }
  if (record.captions.size() == 1) {
    doc["caption"] = record.captions.front();
  } else if (!record.captions.empty()) {
    doc["caption"] = record.captions;
  }
  json ocr = json::array();
  for (const OcrToken& t : record.ocr) {
    ocr.push_back({{"text", t.text},
                   {"bbox", BBoxToJson(t.bbox)},
                   {"confidence", t.confidence}});
  }
  doc["ocr"] = std::move(ocr);
  if (!record.qa.empty()) {
    json qa = json::array();
    for (const QaAnnotation& a : record.qa) {
      qa.push_back({{"question", a.question}, {"answers", a.answers}});
    }
    doc["qa"] = std::move(qa);
  }
  return doc.dump(-1, ' ', false, json::error_handler_t::replace);
}

bool ValidationReport::Contains(std::string_view code) const {
  for (const Violation& v : violations) {
    if (v.code == code) return true;
  }
  return false;
}

ValidationReport ValidateRecord(const Record& record) {
  ValidationReport report;
  for (std::size_t i = 0; i < record.ocr.size(); ++i) {
    const OcrToken& t = record.ocr[i];
    const BBox& b = t.bbox;
    bool out = b.x < 0 || b.y < 0;
    if (record.image_size) {
      out = out || b.right() > record.image_size->width ||
            b.bottom() > record.image_size->height;
    }
    if (out) {
      std::ostringstream detail;
      detail << "ocr[" << i << "] bbox [" << b.x << ", " << b.y << ", " << b.w
             << ", " << b.h << "]";
      if (record.image_size) {
        detail << " exceeds image " << record.image_size->width << "x"
               << record.image_size->height;
      }
      report.violations.push_back({std::string(kBBoxOutOfBounds), detail.str()});
    }
    if (!(t.confidence >= 0.0 && t.confidence <= 1.0)) {
      std::ostringstream detail;
      detail << "ocr[" << i << "] confidence " << t.confidence;
      report.violations.push_back({std::string(kConfidenceRange), detail.str()});
    }
  }
  return report;
}

ValidationReport RecordValidator::Check(const Record& record) {
  ValidationReport report = ValidateRecord(record);
  if (!Register(record.image_id)) {
    report.violations.push_back(
        {std::string(kDuplicateImageId), "image_id " + record.image_id});
  }
  return report;
}

bool RecordValidator::Register(const std::string& image_id) {
  return seen_.insert(image_id).second;
}

}  // namespace scenetext
