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

#include "dsr/resolver.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include "test_util.h"

namespace dsr {
namespace {

std::vector<Entity> Candidates(std::initializer_list<const char *> names) {
  std::vector<Entity> out;
  for (const char *n : names) out.push_back({"restaurant", n, {}});
  return out;
}

// Textbook recurrence for the restricted (optimal string alignment)
// distance, evaluated top-down.
size_t OsaOracle(const std::string &a, const std::string &b) {
  std::map<std::pair<size_t, size_t>, size_t> memo;
  std::function<size_t(size_t, size_t)> d = [&](size_t i, size_t j) -> size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    size_t best = std::min({d(i - 1, j) + 1, d(i, j - 1) + 1,
                            d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)});
    if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
      best = std::min(best, d(i - 2, j - 2) + 1);
    }
    return memo[key] = best;
  };
  return d(a.size(), b.size());
}

// Every string one insertion, deletion, substitution or adjacent swap away.
std::set<std::string> Neighbors(const std::string &s, const std::string &alphabet) {
  std::set<std::string> out;
  for (size_t i = 0; i <= s.size(); ++i) {
    for (char c : alphabet) out.insert(s.substr(0, i) + c + s.substr(i));
  }
  for (size_t i = 0; i < s.size(); ++i) {
    out.insert(s.substr(0, i) + s.substr(i + 1));
    for (char c : alphabet) out.insert(s.substr(0, i) + c + s.substr(i + 1));
    if (i + 1 < s.size()) {
      std::string t = s;
      std::swap(t[i], t[i + 1]);
      out.insert(t);
    }
  }
  out.erase(s);
  return out;
}

TEST(EditDistanceTest, Examples) {
  EXPECT_EQ(EditDistance("abc", "abc"), 0u);
  EXPECT_EQ(EditDistance("kitten", "sitting"), 3u);
  EXPECT_EQ(EditDistance("restauraant", "restaurant"), 1u);
  EXPECT_EQ(EditDistance("ab", "ba"), 1u);
  EXPECT_EQ(EditDistance("", "abc"), 3u);
  EXPECT_DOUBLE_EQ(NormalizedEditDistance("", ""), 0.0);
  EXPECT_DOUBLE_EQ(NormalizedEditDistance("abcd", "abce"), 0.25);
}

TEST(EditDistanceTest, MatchesRecurrenceOracle) {
  std::mt19937 rng(7);
  auto random_string = [&] {
    std::string s(rng() % 8, 'a');
    for (char &c : s) c = static_cast<char>('a' + rng() % 3);
    return s;
  };
  for (int i = 0; i < 2000; ++i) {
    const std::string a = random_string();
    const std::string b = random_string();
    ASSERT_EQ(EditDistance(a, b), OsaOracle(a, b)) << a << " / " << b;
    ASSERT_EQ(EditDistance(a, b), EditDistance(b, a));
  }
}

TEST(EditDistanceTest, DistanceOneIsExactlyOneEditAway) {
  const std::string alphabet = "abc";
  for (const std::string s : {"", "a", "ab", "abc", "cab", "aabb"}) {
    std::set<std::string> one = Neighbors(s, alphabet);
    for (const std::string &t : one) EXPECT_EQ(EditDistance(s, t), 1u) << s << " " << t;
    for (const std::string &t : Neighbors(*one.begin(), alphabet)) {
      if (t != s && !one.count(t)) EXPECT_GT(EditDistance(s, t), 1u) << s << " " << t;
    }
  }
}

TEST(OrdinalTest, Lexicon) {
  EXPECT_EQ(OrdinalPosition("second", 3), 2u);
  EXPECT_EQ(OrdinalPosition("5th", 5), 5u);
  EXPECT_EQ(OrdinalPosition("last", 4), 4u);
  EXPECT_FALSE(OrdinalPosition("sixth", 5).has_value());
}

TEST(ResolveTest, SecondOne) {
  auto c = Candidates({"alder grill", "bramble kitchen", "cobalt bistro"});
  Resolution r = Resolve(c, "the second one");
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0].index, 1u);
  EXPECT_EQ(r.matches[0].evidence, Evidence::kOrdinal);
  EXPECT_EQ(r.selected, std::vector<size_t>{1});
  EXPECT_FALSE(r.ambiguous);
}

TEST(ResolveTest, OrdinalVariants) {
  auto c = Candidates({"alder grill", "bramble kitchen", "cobalt bistro", "dorado diner"});
  EXPECT_EQ(Resolve(c, "The 3rd one!").selected, std::vector<size_t>{2});
  EXPECT_EQ(Resolve(c, "the last one please").selected, std::vector<size_t>{3});
  EXPECT_TRUE(ThrowsCode([&] { Resolve(c, "the fifth one"); }, ErrorCode::kNoMatch));
  auto two = Candidates({"alder grill", "bramble kitchen"});
  EXPECT_EQ(Resolve(two, "i'll take the other one").selected, std::vector<size_t>{1});
  EXPECT_TRUE(ThrowsCode([&] { Resolve(c, "the other one"); }, ErrorCode::kNoMatch));
}

TEST(ResolveTest, PartialNameWindow) {
  auto c = Candidates({"pizza hut city centre", "chiquito restauraant bar", "cote"});
  Resolution r = Resolve(c, "chiquito");
  ASSERT_FALSE(r.matches.empty());
  EXPECT_EQ(r.matches[0].index, 1u);
  EXPECT_EQ(r.matches[0].evidence, Evidence::kExactName);
}

TEST(ResolveTest, SharedWindowsDoNotCount) {
  auto c = Candidates({"alder grill", "alder kitchen", "cobalt bistro"});
  EXPECT_EQ(Resolve(c, "alder kitchen").selected, std::vector<size_t>{1});
  EXPECT_TRUE(ThrowsCode([&] { Resolve(c, "alder please"); }, ErrorCode::kNoMatch));
}

TEST(ResolveTest, LongerSpanSwallowsContainedName) {
  auto c = Candidates({"the alder", "the alder grill"});
  Resolution r = Resolve(c, "the alder grill");
  EXPECT_EQ(r.selected, std::vector<size_t>{1});
  EXPECT_FALSE(r.ambiguous);
}

TEST(ResolveTest, FuzzyName) {
  auto c = Candidates({"alder grill", "bramble kitchen", "cobalt bistro"});
  Resolution r = Resolve(c, "i want bramlbe kitchn");
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0].index, 1u);
  EXPECT_EQ(r.matches[0].evidence, Evidence::kFuzzyName);
  EXPECT_NEAR(r.matches[0].score, 1.0 - 2.0 / 15, 1e-12);
  EXPECT_TRUE(ThrowsCode([&] { Resolve(c, "i want bramlbe kitchn", 0.05); }, ErrorCode::kNoMatch));
}

TEST(ResolveTest, AttributeEvidence) {
  std::vector<Entity> c = {
      {"restaurant", "alder grill", {{"area", "south"}, {"food", "thai"}}},
      {"restaurant", "bramble kitchen", {{"area", "north"}, {"food", "thai"}}},
      {"restaurant", "cobalt bistro", {{"area", "east"}, {"food", "french"}}},
  };
  Resolution r = Resolve(c, "the restaurant in the north of the city");
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0].index, 1u);
  EXPECT_EQ(r.matches[0].evidence, Evidence::kAttribute);
  EXPECT_DOUBLE_EQ(r.matches[0].score, 0.5);

  Resolution both = Resolve(c, "a thai place in the south");
  EXPECT_EQ(both.matches[0].index, 0u);
  EXPECT_DOUBLE_EQ(both.matches[0].score, 1.0);
  EXPECT_DOUBLE_EQ(both.matches[1].score, 0.5);
}

TEST(ResolveTest, Conjunctions) {
  auto c = Candidates({"alder grill", "bramble kitchen", "cobalt bistro"});
  EXPECT_EQ(Resolve(c, "alder grill and cobalt bistro").selected, (std::vector<size_t>{0, 2}));
  EXPECT_EQ(Resolve(c, "both bramble kitchen and alder grill").selected,
            (std::vector<size_t>{0, 1}));
  EXPECT_EQ(Resolve(c, "alder grill, bramble kitchen, and cobalt bistro").selected,
            (std::vector<size_t>{0, 1, 2}));
  EXPECT_EQ(Resolve(c, "the first and the third").selected, (std::vector<size_t>{0, 2}));
}

TEST(ResolveTest, TiesAreSurfaced) {
  auto c = Candidates({"alder grill", "bramble kitchen", "cobalt bistro"});
  Resolution r = Resolve(c, "bramble kitchen or alder grill");
  EXPECT_TRUE(r.ambiguous);
  EXPECT_EQ(r.selected, std::vector<size_t>{0});
  EXPECT_EQ(r.matches.size(), 2u);
}

TEST(ResolveTest, CandidateCountBounds) {
  EXPECT_TRUE(ThrowsCode([] { Resolve({}, "x"); }, ErrorCode::kInvalidArgument));
  auto six = Candidates({"a1", "a2", "a3", "a4", "a5", "a6"});
  EXPECT_TRUE(ThrowsCode([&] { Resolve(six, "a1"); }, ErrorCode::kInvalidArgument));
}

TEST(ResolveTest, PermutationEquivariance) {
  const std::vector<Entity> base = Candidates(
      {"alder grill", "bramble kitchen", "cobalt bistro", "dorado diner", "ember tavern"});
  const char *replies[] = {"i'll take cobalt bistro", "dorado please", "embr tavern",
                           "alder grill and ember tavern"};
  std::vector<size_t> perm(base.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Entity> shuffled;
    for (size_t p : perm) shuffled.push_back(base[p]);
    for (const char *reply : replies) {
      std::set<std::string> want, got;
      for (size_t i : Resolve(base, reply).selected) want.insert(base[i].name);
      for (size_t i : Resolve(shuffled, reply).selected) got.insert(shuffled[i].name);
      EXPECT_EQ(got, want) << reply;
    }
  }
}

}  // namespace
}  // namespace dsr
