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

// Canonical top-left to bottom-right reading order for OCR tokens.

#ifndef SCENETEXT_SPATIAL_ORDER_H_
#define SCENETEXT_SPATIAL_ORDER_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenetext/record.h"

namespace scenetext {

inline constexpr double kDefaultOverlapThreshold = 0.5;

struct OrderedOcr {
  std::vector<OcrToken> tokens;
  std::vector<std::size_t> line_index;  // parallel to tokens, non-decreasing

  std::vector<std::string> Texts() const;
};

// Groups tokens into visual lines and reads each line left to right.
//
// Tokens are visited by vertical center. A token joins the current line
// when its [y, y + h] interval overlaps the line's running interval by at
// least overlap_threshold * min(token height, line height); otherwise it
// opens a new line. Lines are then sorted by x. Exact ties anywhere fall
// back to (x, y, text), so the result does not depend on input order.
OrderedOcr OrderTokens(std::span<const OcrToken> tokens,
                       double overlap_threshold = kDefaultOverlapThreshold);

std::string JoinTokens(const OrderedOcr& ordered,
                       std::string_view separator = " ");

}  // namespace scenetext

#endif  // SCENETEXT_SPATIAL_ORDER_H_
