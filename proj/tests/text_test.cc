// Copyright 2026 The DSR Toolkit Authors.
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

#include "dsr/text.h"

#include <gtest/gtest.h>

namespace dsr {
namespace {

using Tokens = std::vector<std::string>;

TEST(NormalizeTest, PunctuationSplitsWords) {
  EXPECT_EQ(Normalize("Chiquito Restaurant Bar!"), (Tokens{"chiquito", "restaurant", "bar"}));
  EXPECT_EQ(Normalize(""), Tokens{});
  EXPECT_EQ(Normalize("The SECOND one."), (Tokens{"the", "second", "one"}));
  EXPECT_EQ(Normalize("a,b;c"), (Tokens{"a", "b", "c"}));
}

TEST(NormalizeTest, ApostrophesJoin) {
  EXPECT_EQ(Normalize("you're"), Tokens{"youre"});
}

TEST(NormalizeNameTest, CollapsesAndStrips) {
  EXPECT_EQ(NormalizeName("  Hawthorn   Canteen. "), "hawthorn canteen");
  EXPECT_EQ(NormalizeName("!!"), "");
}

TEST(WindowTest, FindsEveryOccurrence) {
  Tokens hay = {"a", "b", "a", "b"};
  EXPECT_EQ(FindWindows(hay, {"a", "b"}), (std::vector<size_t>{0, 2}));
  EXPECT_TRUE(ContainsWindow(hay, {"b", "a"}));
  EXPECT_FALSE(ContainsWindow(hay, {"b", "b"}));
  EXPECT_FALSE(ContainsWindow(hay, {}));
}

TEST(StopwordTest, TypeNounsAreStopwords) {
  for (const char *w : {"the", "restaurant", "hotel", "one", "apartment"}) {
    EXPECT_TRUE(IsStopword(w)) << w;
  }
  EXPECT_FALSE(IsStopword("chiquito"));
}

}  // namespace
}  // namespace dsr
