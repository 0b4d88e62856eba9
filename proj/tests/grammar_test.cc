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

#include "dsr/grammar.h"

#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <random>
#include <set>

#include "dsr/text.h"
#include "test_util.h"

namespace dsr {
namespace {

using Strings = std::set<std::vector<std::string>>;

// Enumerates every string derivable from `name`, slots as "{slot}".
Strings Enumerate(const Grammar &g, const std::string &name) {
  Strings out;
  for (const Alternative &alt : g.Alternatives(name)) {
    Strings partial = {{}};
    for (const Symbol &s : alt) {
      Strings pieces;
      if (s.kind == Symbol::Kind::kNonterminal) {
        pieces = Enumerate(g, s.text);
      } else if (s.kind == Symbol::Kind::kSlot) {
        pieces = {{"{" + s.text + "}"}};
      } else {
        pieces = {{s.text}};
      }
      Strings next;
      for (const auto &p : partial) {
        for (const auto &q : pieces) {
          auto joined = p;
          joined.insert(joined.end(), q.begin(), q.end());
          next.insert(joined);
        }
      }
      partial = std::move(next);
    }
    out.insert(partial.begin(), partial.end());
  }
  return out;
}

// End positions reachable by matching `symbols[i..]` against tokens from `pos`.
std::set<size_t> MatchSequence(const Grammar &g, const std::vector<Symbol> &symbols, size_t i,
                               const std::vector<std::string> &tokens, size_t pos,
                               const Bindings &bindings);

std::set<size_t> MatchSymbol(const Grammar &g, const Symbol &s,
                             const std::vector<std::string> &tokens, size_t pos,
                             const Bindings &bindings) {
  if (s.kind == Symbol::Kind::kNonterminal) {
    std::set<size_t> ends;
    for (const Alternative &alt : g.Alternatives(s.text)) {
      auto e = MatchSequence(g, alt, 0, tokens, pos, bindings);
      ends.insert(e.begin(), e.end());
    }
    return ends;
  }
  const std::string want = s.kind == Symbol::Kind::kSlot ? bindings.find(s.text)->second : s.text;
  if (pos < tokens.size() && tokens[pos] == want) return {pos + 1};
  return {};
}

std::set<size_t> MatchSequence(const Grammar &g, const std::vector<Symbol> &symbols, size_t i,
                               const std::vector<std::string> &tokens, size_t pos,
                               const Bindings &bindings) {
  if (i == symbols.size()) return {pos};
  std::set<size_t> ends;
  for (size_t mid : MatchSymbol(g, symbols[i], tokens, pos, bindings)) {
    auto e = MatchSequence(g, symbols, i + 1, tokens, mid, bindings);
    ends.insert(e.begin(), e.end());
  }
  return ends;
}

bool InLanguage(const Grammar &g, const std::string &start, const std::string &text,
                const Bindings &bindings) {
  const std::vector<std::string> tokens = SplitWhitespace(text);
  return MatchSymbol(g, {Symbol::Kind::kNonterminal, start}, tokens, 0, bindings)
      .count(tokens.size());
}

TEST(LoadGrammarTest, SmallestGrammar) {
  Grammar g = LoadGrammar("S -> a | b");
  EXPECT_EQ(g.rules().size(), 1u);
  EXPECT_EQ(g.Alternatives("S").size(), 2u);
  EXPECT_EQ(g.start_symbols(), std::vector<std::string>{"S"});
  EXPECT_EQ(CountLanguage(g, "S"), 2);
}

TEST(LoadGrammarTest, TemplateStyleRule) {
  Grammar g = LoadGrammar(
      "SENT -> do you mind VERBING\n"
      "VERBING -> clarifying | being a bit more precise about {entity_type}\n");
  EXPECT_EQ(CountLanguage(g, "SENT"), 2);
  EXPECT_EQ(g.Alternatives("VERBING")[1].back().kind, Symbol::Kind::kSlot);
}

TEST(LoadGrammarTest, Errors) {
  EXPECT_TRUE(ThrowsCode([] { LoadGrammar("S -> S a"); }, ErrorCode::kCyclicGrammar));
  EXPECT_TRUE(ThrowsCode([] { LoadGrammar("S -> A b\nA -> x B\nB -> S"); },
                         ErrorCode::kCyclicGrammar));
  EXPECT_TRUE(ThrowsCode([] { LoadGrammar("S -> a MISSING"); },
                         ErrorCode::kUndefinedNonterminal));
  EXPECT_TRUE(ThrowsCode([] { LoadGrammar("%start S\n%start S\nS -> a"); },
                         ErrorCode::kDuplicateStartSymbol));
  EXPECT_TRUE(ThrowsCode([] { LoadGrammar("S -> a\nthis line has no arrow"); },
                         ErrorCode::kParseError));
  EXPECT_TRUE(ThrowsCode([] { LoadGrammar(""); }, ErrorCode::kParseError));
  try {
    LoadGrammar("S -> a\n\nbad line");
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(LoadGrammarTest, CommentsEpsilonAndRepeatedRules) {
  Grammar g = LoadGrammar(
      "# header\n"
      "S -> A b  # trailing\n"
      "A -> x | <eps>\n"
      "A -> y\n");
  EXPECT_EQ(CountLanguage(g, "S"), 3);
  EXPECT_EQ(Enumerate(g, "S"), (Strings{{"x", "b"}, {"b"}, {"y", "b"}}));
}

TEST(SampleTest, SingleDerivation) {
  Grammar g = LoadGrammar("S -> a");
  for (uint64_t seed : {0u, 1u, 99u}) {
    EXPECT_EQ(Sample(g, "S", seed).Skeleton(), std::vector<std::string>{"a"});
  }
}

TEST(SampleTest, UnknownStart) {
  Grammar g = LoadGrammar("S -> a");
  EXPECT_TRUE(ThrowsCode([&] { Sample(g, "T", 0); }, ErrorCode::kUnknownStart));
  EXPECT_TRUE(ThrowsCode([&] { CountLanguage(g, "T"); }, ErrorCode::kUnknownStart));
}

TEST(SampleTest, BothAlternativesOccurAndSeedsRepeat) {
  Grammar g = LoadGrammar("S -> a | b");
  std::set<std::string> seen;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Template t = Sample(g, "S", seed);
    EXPECT_EQ(t, Sample(g, "S", seed));
    seen.insert(t.Skeleton()[0]);
  }
  EXPECT_EQ(seen, (std::set<std::string>{"a", "b"}));
}

TEST(CountLanguageTest, MatchesEnumerationOnHandGrammars) {
  const char *grammars[] = {
      "S -> a | b",
      "S -> A A\nA -> x | y | z",
      "S -> A B C\nA -> p | q\nB -> r | <eps>\nC -> {slot} s | t",
      "S -> go A | stop\nA -> A1 | A2\nA1 -> up | down\nA2 -> left B\nB -> now | later",
  };
  for (const char *text : grammars) {
    Grammar g = LoadGrammar(text);
    EXPECT_EQ(CountLanguage(g, "S"), Enumerate(g, "S").size()) << text;
  }
}

// Random acyclic grammars in which every alternative opens with its own
// marker word, so every string has exactly one derivation.
TEST(CountLanguageTest, MatchesEnumerationOnRandomGrammars) {
  std::mt19937 rng(12345);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int levels = 2 + static_cast<int>(rng() % 3);
    std::string text;
    int marker = 0;
    for (int level = 0; level < levels; ++level) {
      const int alts = 1 + static_cast<int>(rng() % 3);
      text += "N" + std::to_string(level) + " ->";
      for (int a = 0; a < alts; ++a) {
        if (a > 0) text += " |";
        text += " m" + std::to_string(marker++);
        const int len = static_cast<int>(rng() % 3);
        for (int k = 0; k < len; ++k) {
          if (level + 1 < levels && rng() % 2 == 0) {
            text += " N" + std::to_string(level + 1 + static_cast<int>(rng() % (levels - level - 1)));
          } else if (rng() % 4 == 0) {
            text += " {s}";
          } else {
            text += " w" + std::to_string(rng() % 5);
          }
        }
      }
      text += "\n";
    }
    Grammar g = LoadGrammar(text);
    const auto count = CountLanguage(g, "N0");
    if (count > 10000) continue;
    EXPECT_EQ(count, Enumerate(g, "N0").size()) << text;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(ShippedGrammarTest, CapacityAndStarts) {
  Grammar g = LoadGrammarFile(SourcePath("grammars/disambiguation.cfg"));
  EXPECT_GE(CountLanguage(g, kSystemQuestion), 2000000);
  EXPECT_GE(CountLanguage(g, kUserAnswer), 30000);
  EXPECT_TRUE(g.IsStart(kSystemQuestion));
  EXPECT_TRUE(g.IsStart(kUserAnswer));
}

TEST(ShippedGrammarTest, QuestionsHoldOneOptionList) {
  Grammar g = LoadGrammarFile(SourcePath("grammars/disambiguation.cfg"));
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    std::vector<std::string> slots = Sample(g, kSystemQuestion, seed).Slots();
    EXPECT_EQ(std::count(slots.begin(), slots.end(), std::string(kOptionListSlot)), 1) << seed;
    slots = Sample(g, kUserAnswer, seed).Slots();
    EXPECT_EQ(std::count(slots.begin(), slots.end(), std::string(kMentionSlot)), 1) << seed;
  }
}

TEST(ShippedGrammarTest, FilledSamplesAreInLanguage) {
  Grammar g = LoadGrammarFile(SourcePath("grammars/disambiguation.cfg"));
  const Bindings b = {{"option_list", "OPTIONS"}, {"entity_type", "TYPE"}, {"mention", "MENTION"}};
  for (uint64_t seed = 0; seed < 300; ++seed) {
    for (std::string_view start : {kSystemQuestion, kUserAnswer}) {
      const std::string text = Fill(Sample(g, start, seed), b);
      EXPECT_TRUE(InLanguage(g, std::string(start), text, b)) << text;
      EXPECT_FALSE(InLanguage(g, std::string(start), text + " extra", b));
    }
  }
}

TEST(DelexicalizeTest, TemplateFromExampleUtterance) {
  const std::string u =
      "do you mind being a bit more precise about which shoes you're curious about, "
      "the red one or the blue one";
  auto span = [&](const std::string &text, const std::string &slot) {
    const size_t b = u.find(text);
    return EntitySpan{b, b + text.size(), slot};
  };
  std::vector<EntitySpan> spans = {span("shoes", "entity_type"), span("the red one", "option"),
                                   span("the blue one", "option")};
  Template t = Delexicalize(u, spans);
  EXPECT_EQ(t.Slots(), (std::vector<std::string>{"entity_type", "option", "option"}));
  std::vector<std::string> skeleton = t.Skeleton();
  EXPECT_EQ(skeleton.back(), "{option}");
  EXPECT_EQ(skeleton[0], "do");

  Bindings b = {{"entity_type", "boots"}, {"option", "the red one"}};
  const std::string filled = Fill(t, b);
  EXPECT_TRUE(filled.ends_with("which boots you're curious about, the red one or the red one"))
      << filled;
}

TEST(DelexicalizeTest, RoundTripIsByteExact) {
  const std::string u = "  i have  Alder Grill,\tor bramble kitchen ! ";
  const size_t a = u.find("Alder Grill");
  const size_t k = u.find("bramble kitchen");
  std::vector<EntitySpan> spans = {{a, a + 11, "x"}, {k, k + 15, "y"}};
  Template t = Delexicalize(u, spans);
  EXPECT_EQ(Fill(t, {{"x", "Alder Grill"}, {"y", "bramble kitchen"}}), u);
}

TEST(DelexicalizeTest, NoSpansKeepsText) {
  Template t = Delexicalize("hello there  friend", {});
  EXPECT_TRUE(t.Slots().empty());
  EXPECT_EQ(t.Skeleton(), (std::vector<std::string>{"hello", "there", "friend"}));
  EXPECT_EQ(Fill(t, {}), "hello there  friend");
}

TEST(DelexicalizeTest, SpanErrors) {
  std::vector<EntitySpan> overlap = {{0, 5, "a"}, {3, 8, "b"}};
  EXPECT_TRUE(ThrowsCode([&] { Delexicalize("hello world", overlap); },
                         ErrorCode::kOverlappingSpans));
  std::vector<EntitySpan> outside = {{6, 20, "a"}};
  EXPECT_TRUE(ThrowsCode([&] { Delexicalize("hello world", outside); },
                         ErrorCode::kSpanOutOfBounds));
}

TEST(FillTest, SubstitutesLiterally) {
  Grammar g = LoadGrammar("S -> hello {name}");
  EXPECT_EQ(Fill(Sample(g, "S", 0), {{"name", "alice"}}), "hello alice");
  Grammar q = LoadGrammar("Q -> pick {option_list} ?");
  EXPECT_EQ(Fill(Sample(q, "Q", 0), {{"option_list", "a, b, or c"}}), "pick a, b, or c ?");
  EXPECT_TRUE(ThrowsCode([&] { Fill(Sample(g, "S", 0), {}); }, ErrorCode::kUnboundSlot));
}

}  // namespace
}  // namespace dsr
