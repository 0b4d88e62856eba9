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

#ifndef DSR_GRAMMAR_H_
#define DSR_GRAMMAR_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dsr {

// Well-known entry points of the shipped disambiguation grammar.
inline constexpr std::string_view kSystemQuestion = "SYSTEM_QUESTION";
inline constexpr std::string_view kUserAnswer = "USER_ANSWER";
inline constexpr std::string_view kAttributeMention = "ATTRIBUTE_MENTION";

// Slot names the synthesizer and augmenter bind.
inline constexpr std::string_view kOptionListSlot = "option_list";
inline constexpr std::string_view kEntityTypeSlot = "entity_type";
inline constexpr std::string_view kMentionSlot = "mention";
inline constexpr std::string_view kAttributeSlot = "attribute";
inline constexpr std::string_view kValueSlot = "value";

struct Symbol {
  enum class Kind { kTerminal, kNonterminal, kSlot };

  Kind kind = Kind::kTerminal;
  std::string text;  // word, nonterminal name, or slot name

  bool operator==(const Symbol &) const = default;
};

using Alternative = std::vector<Symbol>;
using RuleMap = std::map<std::string, std::vector<Alternative>, std::less<>>;
using Bindings = std::map<std::string, std::string, std::less<>>;

// An acyclic context-free grammar whose terminals may include typed slot
// placeholders. Immutable once loaded; every operation below is const and
// safe to share between threads.
//
// Source format, one rule per line:
//
//   # comment
//   %start SYSTEM_QUESTION
//   SENT -> do you mind VERBING | could you {verb} it
//   VERBING -> clarifying | <eps>
//
// All-uppercase tokens are nonterminals, `{name}` is a slot placeholder,
// `<eps>` is the empty alternative, anything else is a literal word
// (punctuation stays attached to the word it is written with). A rule may
// span several lines by repeating its left-hand side; alternatives append.
// Without any %start line, the first rule's left-hand side is the start.
class Grammar {
 public:
  Grammar(RuleMap rules, std::vector<std::string> start_symbols);

  const RuleMap &rules() const { return rules_; }
  const std::vector<std::string> &start_symbols() const {
    return start_symbols_;
  }

  bool HasRule(std::string_view name) const;
  bool IsStart(std::string_view name) const;

  // Throws kUnknownStart when `name` has no rule.
  const std::vector<Alternative> &Alternatives(std::string_view name) const;

  // Every literal word used anywhere in the grammar.
  std::vector<std::string> Terminals() const;

 private:
  RuleMap rules_;
  std::vector<std::string> start_symbols_;
};

struct TemplateToken {
  enum class Kind { kLiteral, kSlot };

  Kind kind = Kind::kLiteral;
  std::string text;  // literal text or slot name
  // Exact whitespace emitted before the token when filled. Grammar samples
  // use a single space; delexicalized templates keep the source spacing.
  std::string space_before = " ";

  bool operator==(const TemplateToken &) const = default;
};

struct Template {
  std::vector<TemplateToken> tokens;
  std::string source_start;
  uint64_t derivation_seed = 0;
  std::string trailing;  // whitespace after the last token

  bool operator==(const Template &) const = default;

  // Slot names in order of appearance (repeats included).
  std::vector<std::string> Slots() const;
  // Tokens as plain strings, slots rendered as `{name}`.
  std::vector<std::string> Skeleton() const;
};

Grammar LoadGrammar(std::string_view text);
Grammar LoadGrammarFile(const std::filesystem::path &path);

// Expands `start` choosing uniformly among alternatives at every nonterminal.
// A pure function of (grammar, start, seed).
Template Sample(const Grammar &grammar, std::string_view start, uint64_t seed);

// Number of distinct derivations from `start`, counting each slot
// placeholder as a single symbol. Computed bottom-up without enumeration.
boost::multiprecision::cpp_int CountLanguage(const Grammar &grammar,
                                             std::string_view start);

struct EntitySpan {
  size_t begin = 0;  // byte offsets, half-open
  size_t end = 0;
  std::string slot;
};

// Replaces each span with its slot placeholder. Filling the result with the
// original span texts reproduces `utterance` byte for byte.
Template Delexicalize(std::string_view utterance,
                      std::span<const EntitySpan> spans);

std::string Fill(const Template &tmpl, const Bindings &bindings);

}  // namespace dsr

#endif  // DSR_GRAMMAR_H_
