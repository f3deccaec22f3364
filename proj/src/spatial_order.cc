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

#include "scenetext/spatial_order.h"

#include <algorithm>
#include <tuple>

namespace scenetext {
namespace {

// Tie-break key shared by both sorts. Width, height and confidence only
// matter for tokens that agree on (x, y, text).
auto TieKey(const OcrToken& t) {
  return std::tie(t.bbox.x, t.bbox.y, t.text, t.bbox.w, t.bbox.h,
                  t.confidence);
}

bool ByCenterThenTie(const OcrToken& a, const OcrToken& b) {
  const double ca = a.bbox.center_y();
  const double cb = b.bbox.center_y();
  if (ca != cb) return ca < cb;
  return TieKey(a) < TieKey(b);
}

bool ByTie(const OcrToken& a, const OcrToken& b) { return TieKey(a) < TieKey(b); }

}  // namespace

std::vector<std::string> OrderedOcr::Texts() const {
  std::vector<std::string> texts;
  texts.reserve(tokens.size());
  for (const OcrToken& t : tokens) texts.push_back(t.text);
  return texts;
}

OrderedOcr OrderTokens(std::span<const OcrToken> tokens,
                       double overlap_threshold) {
  std::vector<OcrToken> sorted(tokens.begin(), tokens.end());
  std::sort(sorted.begin(), sorted.end(), ByCenterThenTie);

  OrderedOcr out;
  out.tokens.reserve(sorted.size());
  out.line_index.reserve(sorted.size());

  std::vector<OcrToken> line;
  double line_top = 0;
  double line_bottom = 0;
  std::size_t line_no = 0;

  auto flush = [&] {
    std::sort(line.begin(), line.end(), ByTie);
    for (OcrToken& t : line) {
      out.tokens.push_back(std::move(t));
      out.line_index.push_back(line_no);
    }
    line.clear();
    ++line_no;
  };

  for (OcrToken& t : sorted) {
    if (!line.empty()) {
      const double overlap = std::min(line_bottom, t.bbox.bottom()) -
                             std::max(line_top, t.bbox.y);
      const double min_height = std::min(t.bbox.h, line_bottom - line_top);
      if (overlap >= overlap_threshold * min_height) {
        line_top = std::min(line_top, t.bbox.y);
        line_bottom = std::max(line_bottom, t.bbox.bottom());
        line.push_back(std::move(t));
        continue;
      }
      flush();
    }
    line_top = t.bbox.y;
    line_bottom = t.bbox.bottom();
    line.push_back(std::move(t));
  }
  if (!line.empty()) flush();
  return out;
}

std::string JoinTokens(const OrderedOcr& ordered, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < ordered.tokens.size(); ++i) {
    if (i > 0) out.append(separator);
    out.append(ordered.tokens[i].text);
  }
  return out;
}

}  // namespace scenetext
