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

// Small text helpers shared by the record parser, objective builders and
// metrics. Case folding is ASCII-only; bytes >= 0x80 pass through untouched.

#ifndef SCENETEXT_UTF8_H_
#define SCENETEXT_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace scenetext {

// Decodes UTF-8 into scalar values. An invalid byte b decodes to the lone
// value 0xDC00 + b so distinct malformed inputs stay distinct.
std::u32string DecodeUtf8(std::string_view text);

std::string AsciiLower(std::string_view text);

// Strips ASCII whitespace (space, \t, \n, \v, \f, \r) from both ends.
std::string_view TrimWhitespace(std::string_view text);

// Splits on runs of ASCII whitespace; never yields empty pieces.
std::vector<std::string> SplitWhitespace(std::string_view text);

std::string JoinStrings(const std::vector<std::string>& parts,
                        std::string_view separator);

}  // namespace scenetext

#endif  // SCENETEXT_UTF8_H_
