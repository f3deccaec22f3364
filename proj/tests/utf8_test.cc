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

#include "scenetext/utf8.h"

#include <gtest/gtest.h>

#include "scenetext/hashing.h"

namespace scenetext {
namespace {

TEST(DecodeUtf8, AsciiAndMultibyte) {
  EXPECT_EQ(DecodeUtf8("abc"), U"abc");
  EXPECT_EQ(DecodeUtf8("caf\xC3\xA9"), U"café");
  EXPECT_EQ(DecodeUtf8("\xE6\x97\xA5\xE6\x9C\xAC"), U"日本");
  EXPECT_EQ(DecodeUtf8("\xF0\x9F\x98\x80"), U"\U0001F600");
}

TEST(DecodeUtf8, InvalidBytesMapToPrivateCodePoints) {
  EXPECT_EQ(DecodeUtf8("a\xFFz"), (std::u32string{U'a', 0xDCFF, U'z'}));
  // Truncated sequence: each byte decodes on its own.
  EXPECT_EQ(DecodeUtf8("\xE6\x97"), (std::u32string{0xDCE6, 0xDC97}));
  // Overlong encoding of '/'.
  EXPECT_EQ(DecodeUtf8("\xC0\xAF"), (std::u32string{0xDCC0, 0xDCAF}));
}

TEST(Strings, LowerTrimSplitJoin) {
  EXPECT_EQ(AsciiLower("StOP \xC3\x89"), "stop \xC3\x89");
  EXPECT_EQ(TrimWhitespace("  a b \t\n"), "a b");
  EXPECT_EQ(TrimWhitespace("   "), "");
  EXPECT_EQ(SplitWhitespace(" a  b\tc\n"),
            (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(SplitWhitespace("").empty());
  EXPECT_EQ(JoinStrings({"a", "b", "c"}, ", "), "a, b, c");
  EXPECT_EQ(JoinStrings({}, ", "), "");
}

TEST(Hashing, KeyedHashSeparatesSeedDomainAndData) {
  const auto h = KeyedHash64(1, kSubsampleDomain, "img");
  EXPECT_EQ(h, KeyedHash64(1, kSubsampleDomain, "img"));
  EXPECT_NE(h, KeyedHash64(2, kSubsampleDomain, "img"));
  EXPECT_NE(h, KeyedHash64(1, kShuffleDomain, "img"));
  EXPECT_NE(h, KeyedHash64(1, kSubsampleDomain, "img2"));
}

TEST(Hashing, UnitIntervalRange) {
  EXPECT_EQ(UnitInterval(0), 0.0);
  EXPECT_LT(UnitInterval(~std::uint64_t{0}), 1.0);
  EXPECT_GT(UnitInterval(~std::uint64_t{0}), 0.9999999);
}

TEST(Hashing, StreamingDigestMatchesOneShot) {
  ContentDigest d;
  d.Update("hello ");
  d.Update("world");
  const std::string hex = d.HexFinal();
  EXPECT_EQ(hex, DigestHex("hello world"));
  EXPECT_EQ(hex.size(), 64u);
  EXPECT_NE(hex, DigestHex("hello world!"));
}

}  // namespace
}  // namespace scenetext
