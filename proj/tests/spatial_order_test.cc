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

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.h"
#include "test_util.h"

namespace scenetext {
namespace {

OcrToken Tok(std::string text, double x, double y, double w, double h) {
  return OcrToken{std::move(text), BBox{x, y, w, h}, 1.0};
}

std::vector<std::string> SortedTexts(const std::vector<OcrToken>& tokens) {
  std::vector<std::string> t;
  for (const auto& tok : tokens) t.push_back(tok.text);
  std::sort(t.begin(), t.end());
  return t;
}

TEST(OrderTokens, TwoLines) {
  const std::vector<OcrToken> tokens = {Tok("NOW", 15, 100, 30, 10),
                                        Tok("END", 200, 8, 30, 10),
                                        Tok("THE", 10, 5, 30, 10)};
  const OrderedOcr o = OrderTokens(tokens);
  EXPECT_EQ(o.Texts(), (std::vector<std::string>{"THE", "END", "NOW"}));
  EXPECT_EQ(o.line_index, (std::vector<std::size_t>{0, 0, 1}));
}

TEST(OrderTokens, EmptyAndSingleton) {
  EXPECT_TRUE(OrderTokens({}).tokens.empty());
  const std::vector<OcrToken> one = {Tok("X", 3, 4, 5, 6)};
  const OrderedOcr o = OrderTokens(one);
  EXPECT_EQ(o.Texts(), std::vector<std::string>{"X"});
  EXPECT_EQ(o.line_index, std::vector<std::size_t>{0});
}

TEST(OrderTokens, IdenticalBoxesBreakTiesByText) {
  const std::vector<OcrToken> tokens = {Tok("b", 1, 1, 5, 5),
                                        Tok("a", 1, 1, 5, 5)};
  EXPECT_EQ(OrderTokens(tokens).Texts(), (std::vector<std::string>{"a", "b"}));
}

TEST(OrderTokens, SlightlyDifferentBaselinesStayOnOneLine) {
  // A naive (y, x) sort would read "B" before "A".
  const std::vector<OcrToken> tokens = {Tok("A", 0, 12, 20, 20),
                                        Tok("B", 50, 10, 20, 20)};
  EXPECT_EQ(OrderTokens(tokens).Texts(), (std::vector<std::string>{"A", "B"}));
}

TEST(OrderTokens, ThresholdControlsGrouping) {
  // Overlap 4 of height 10: joins at 0.3, splits at 0.5.
  const std::vector<OcrToken> tokens = {Tok("R", 100, 0, 10, 10),
                                        Tok("L", 0, 6, 10, 10)};
  EXPECT_EQ(OrderTokens(tokens, 0.3).Texts(),
            (std::vector<std::string>{"L", "R"}));
  EXPECT_EQ(OrderTokens(tokens, 0.5).Texts(),
            (std::vector<std::string>{"R", "L"}));
}

TEST(JoinTokens, Examples) {
  OrderedOcr o;
  EXPECT_EQ(JoinTokens(o), "");
  o.tokens = {Tok("STOP", 0, 0, 1, 1), Tok("HERE", 2, 0, 1, 1)};
  EXPECT_EQ(JoinTokens(o), "STOP HERE");
  o.tokens = {Tok("a b", 0, 0, 1, 1), Tok("c", 2, 0, 1, 1)};
  EXPECT_EQ(JoinTokens(o), "a b c");
  EXPECT_EQ(JoinTokens(o, "|"), "a b|c");
}

TEST(OrderTokensProperty, InvariantsOnRandomLayouts) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<OcrToken> tokens =
        testing::RandomLayout(rng, testing::UniformInt(rng, 0, 12));
    const OrderedOcr o = OrderTokens(tokens);

    ASSERT_EQ(SortedTexts(o.tokens), SortedTexts(tokens));
    ASSERT_TRUE(std::is_sorted(o.line_index.begin(), o.line_index.end()));
    for (std::size_t i = 1; i < o.tokens.size(); ++i) {
      if (o.line_index[i] == o.line_index[i - 1]) {
        ASSERT_LE(o.tokens[i - 1].bbox.x, o.tokens[i].bbox.x);
      }
    }

    std::shuffle(tokens.begin(), tokens.end(), rng);
    ASSERT_EQ(OrderTokens(tokens).tokens, o.tokens);
    ASSERT_EQ(OrderTokens(o.tokens).tokens, o.tokens);
  }
}

TEST(OrderTokensProperty, DisjointRowsDegenerateToRaster) {
  testing::Rng rng(6);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto tokens =
        testing::DisjointLayout(rng, testing::UniformInt(rng, 1, 12));
    ASSERT_EQ(OrderTokens(tokens).Texts(), testing::RasterOrder(tokens));
  }
}

}  // namespace
}  // namespace scenetext
