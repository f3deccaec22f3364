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

// Random generators and fixtures shared by the unit and acceptance tests.

#ifndef SCENETEXT_TESTS_TEST_UTIL_H_
#define SCENETEXT_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scenetext/record.h"

namespace scenetext::testing {

using Rng = std::mt19937_64;

inline int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Uppercase/digit word; never a substring of the lowercase prompt or
// question vocabulary used by RandomRecord.
inline std::string RandomWord(Rng& rng, int min_len = 2, int max_len = 8) {
  static const std::string kAlphabet = "ABCDEFGHJKLMNPQRSTUVWXYZ0123456789";
  const int len = UniformInt(rng, min_len, max_len);
  std::string w;
  for (int i = 0; i < len; ++i) {
    w.push_back(kAlphabet[UniformInt(rng, 0, static_cast<int>(kAlphabet.size()) - 1)]);
  }
  return w;
}

// Arbitrary boxes on a 640x480 canvas; lines may overlap in any way.
inline std::vector<OcrToken> RandomLayout(Rng& rng, int n) {
  std::vector<OcrToken> tokens;
  for (int i = 0; i < n; ++i) {
    OcrToken t;
    t.text = RandomWord(rng, 1, 4);
    t.bbox.x = UniformInt(rng, 0, 560);
    t.bbox.y = UniformInt(rng, 0, 440);
    t.bbox.w = UniformInt(rng, 4, 80);
    t.bbox.h = UniformInt(rng, 4, 40);
    t.confidence = UniformInt(rng, 50, 100) / 100.0;
    tokens.push_back(t);
  }
  // Force some exact duplicates of position to exercise tie breaking.
  if (n >= 2 && UniformInt(rng, 0, 3) == 0) tokens[1].bbox = tokens[0].bbox;
  return tokens;
}

// Rows stacked with gaps, so vertical intervals are pairwise disjoint.
inline std::vector<OcrToken> DisjointLayout(Rng& rng, int n) {
  std::vector<OcrToken> tokens;
  double y = UniformInt(rng, 0, 10);
  for (int i = 0; i < n; ++i) {
    OcrToken t;
    t.text = RandomWord(rng, 1, 4);
    t.bbox.h = UniformInt(rng, 4, 30);
    t.bbox.y = y;
    t.bbox.x = UniformInt(rng, 0, 600);
    t.bbox.w = UniformInt(rng, 4, 60);
    y += t.bbox.h + UniformInt(rng, 1, 20);
    tokens.push_back(t);
  }
  std::shuffle(tokens.begin(), tokens.end(), rng);
  return tokens;
}

inline const std::vector<std::string>& CaptionWords() {
  static const std::vector<std::string> kWords = {
      "a",    "red",   "stop",  "sign",  "on",     "the",   "corner",
      "bus",  "with",  "text",  "store", "front",  "shows", "number",
      "blue", "label", "bottle", "of",   "street", "night", "reads"};
  return kWords;
}

inline std::string RandomCaption(Rng& rng, int min_words = 1,
                                 int max_words = 12) {
  const auto& words = CaptionWords();
  const int n = UniformInt(rng, min_words, max_words);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i > 0) out.push_back(' ');
    out += words[UniformInt(rng, 0, static_cast<int>(words.size()) - 1)];
  }
  return out;
}

struct RecordShape {
  int max_tokens = 8;
  double caption_probability = 0.8;
  double qa_probability = 0.5;
  double empty_ocr_probability = 0.2;
};

inline Record RandomRecord(Rng& rng, const std::string& image_id,
                           const RecordShape& shape = {}) {
  Record r;
  r.image_id = image_id;
  r.image_size = ImageSize{640, 480};
  std::bernoulli_distribution empty(shape.empty_ocr_probability);
  if (!empty(rng)) {
    const int n = UniformInt(rng, 1, shape.max_tokens);
    for (int i = 0; i < n; ++i) {
      OcrToken t;
      t.text = RandomWord(rng);
      t.bbox.x = UniformInt(rng, 0, 500);
      t.bbox.y = UniformInt(rng, 0, 400);
      t.bbox.w = UniformInt(rng, 10, 130);
      t.bbox.h = UniformInt(rng, 8, 70);
      t.confidence = UniformInt(rng, 0, 100) / 100.0;
      r.ocr.push_back(t);
    }
  }
  if (std::bernoulli_distribution(shape.caption_probability)(rng)) {
    r.captions.push_back(RandomCaption(rng));
    if (UniformInt(rng, 0, 4) == 0) r.captions.push_back(RandomCaption(rng));
  }
  if (std::bernoulli_distribution(shape.qa_probability)(rng)) {
    QaAnnotation qa;
    qa.question = "what does the " + RandomCaption(rng, 1, 3) + " say";
    for (int i = 0; i < 10; ++i) qa.answers.push_back(RandomCaption(rng, 1, 2));
    r.qa.push_back(qa);
  }
  return r;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("scenetext-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void WriteFile(const std::filesystem::path& path,
                      const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// JSONL corpus of `n` random records with ids "img-<i>".
inline std::string RandomCorpus(Rng& rng, int n, const RecordShape& shape = {}) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    out += SerializeRecord(RandomRecord(rng, "img-" + std::to_string(i), shape));
    out.push_back('\n');
  }
  return out;
}

}  // namespace scenetext::testing

#endif  // SCENETEXT_TESTS_TEST_UTIL_H_
