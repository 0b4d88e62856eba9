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

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "dsr/error.h"
#include "dsr/random.h"
#include "dsr/text.h"

namespace dsr {
namespace {

using boost::multiprecision::cpp_int;

constexpr std::string_view kEpsilon = "<eps>";

bool IsNonterminalToken(std::string_view token) {
  if (token.empty() || token[0] < 'A' || token[0] > 'Z') return false;
  return std::all_of(token.begin(), token.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

bool IsSlotToken(std::string_view token) {
  return token.size() > 2 && token.front() == '{' && token.back() == '}' &&
         token.find_first_of("{} ", 1) == token.size() - 1;
}

Symbol ClassifyToken(std::string_view token) {
  if (IsSlotToken(token)) {
    return {Symbol::Kind::kSlot, std::string(token.substr(1, token.size() - 2))};
  }
  if (IsNonterminalToken(token)) return {Symbol::Kind::kNonterminal, std::string(token)};
  return {Symbol::Kind::kTerminal, std::string(token)};
}

[[noreturn]] void ParseFailure(size_t line_no, const std::string &what) {
  throw Error(ErrorCode::kParseError,
              "line " + std::to_string(line_no) + ": " + what);
}

std::string StripComment(const std::string &line) {
  // '#' opens a comment at the start of a line or after whitespace.
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
      return line.substr(0, i);
    }
  }
  return line;
}

Alternative ParseAlternative(std::string_view text, size_t line_no) {
  std::vector<std::string> words = SplitWhitespace(text);
  if (words.empty()) ParseFailure(line_no, "empty alternative (use <eps>)");
  if (words.size() == 1 && words[0] == kEpsilon) return {};
  Alternative alt;
  for (const std::string &w : words) {
    if (w == kEpsilon) ParseFailure(line_no, "<eps> must stand alone");
    if (w.front() == '{' || w.back() == '}') {
      if (!IsSlotToken(w)) ParseFailure(line_no, "malformed slot '" + w + "'");
    }
    alt.push_back(ClassifyToken(w));
  }
  return alt;
}

// Depth-first search for a cycle; returns the offending path if found.
bool FindCycle(const RuleMap &rules, const std::string &node,
               std::map<std::string, int> &state,
               std::vector<std::string> &path) {
  state[node] = 1;
  path.push_back(node);
  for (const Alternative &alt : rules.find(node)->second) {
    for (const Symbol &sym : alt) {
      if (sym.kind != Symbol::Kind::kNonterminal) continue;
      int s = state[sym.text];
      if (s == 1) {
        path.push_back(sym.text);
        return true;
      }
      if (s == 0 && FindCycle(rules, sym.text, state, path)) return true;
    }
  }
  path.pop_back();
  state[node] = 2;
  return false;
}

void Expand(const Grammar &grammar, std::string_view name, Rng &rng,
            std::vector<TemplateToken> &out) {
  const std::vector<Alternative> &alts = grammar.Alternatives(name);
  const Alternative &alt = alts[rng.Uniform(alts.size())];
  for (const Symbol &sym : alt) {
    switch (sym.kind) {
      case Symbol::Kind::kTerminal:
        out.push_back({TemplateToken::Kind::kLiteral, sym.text, " "});
        break;
      case Symbol::Kind::kSlot:
        out.push_back({TemplateToken::Kind::kSlot, sym.text, " "});
        break;
      case Symbol::Kind::kNonterminal:
        Expand(grammar, sym.text, rng, out);
        break;
    }
  }
}

cpp_int CountFrom(const Grammar &grammar, const std::string &name,
                  std::map<std::string, cpp_int> &memo) {
  auto it = memo.find(name);
  if (it != memo.end()) return it->second;
  cpp_int total = 0;
  for (const Alternative &alt : grammar.Alternatives(name)) {
    cpp_int product = 1;
    for (const Symbol &sym : alt) {
      if (sym.kind == Symbol::Kind::kNonterminal) {
        product *= CountFrom(grammar, sym.text, memo);
      }
    }
    total += product;
  }
  memo.emplace(name, total);
  return total;
}

}  // namespace

Grammar::Grammar(RuleMap rules, std::vector<std::string> start_symbols)
    : rules_(std::move(rules)), start_symbols_(std::move(start_symbols)) {
  std::set<std::string> seen;
  for (const std::string &s : start_symbols_) {
    if (!seen.insert(s).second) {
      throw Error(ErrorCode::kDuplicateStartSymbol, s);
    }
    if (!rules_.contains(s)) {
      throw Error(ErrorCode::kUndefinedNonterminal, s + " (start symbol)");
    }
  }
  for (const auto &[lhs, alts] : rules_) {
    for (const Alternative &alt : alts) {
      for (const Symbol &sym : alt) {
        if (sym.kind == Symbol::Kind::kNonterminal && !rules_.contains(sym.text)) {
          throw Error(ErrorCode::kUndefinedNonterminal,
                      sym.text + " (referenced from " + lhs + ")");
        }
      }
    }
  }
  std::map<std::string, int> state;
  for (const auto &[lhs, alts] : rules_) {
    std::vector<std::string> path;
    if (state[lhs] == 0 && FindCycle(rules_, lhs, state, path)) {
      auto first = std::find(path.begin(), path.end(), path.back());
      throw Error(ErrorCode::kCyclicGrammar,
                  Join(std::vector<std::string>(first, path.end()), " -> "));
    }
  }
}

bool Grammar::HasRule(std::string_view name) const {
  return rules_.find(name) != rules_.end();
}

bool Grammar::IsStart(std::string_view name) const {
  return std::find(start_symbols_.begin(), start_symbols_.end(), name) !=
         start_symbols_.end();
}

const std::vector<Alternative> &Grammar::Alternatives(std::string_view name) const {
  auto it = rules_.find(name);
  if (it == rules_.end()) throw Error(ErrorCode::kUnknownStart, std::string(name));
  return it->second;
}

std::vector<std::string> Grammar::Terminals() const {
  std::set<std::string> words;
  for (const auto &[lhs, alts] : rules_) {
    for (const Alternative &alt : alts) {
      for (const Symbol &sym : alt) {
        if (sym.kind == Symbol::Kind::kTerminal) words.insert(sym.text);
      }
    }
  }
  return {words.begin(), words.end()};
}

std::vector<std::string> Template::Slots() const {
  std::vector<std::string> slots;
  for (const TemplateToken &t : tokens) {
    if (t.kind == TemplateToken::Kind::kSlot) slots.push_back(t.text);
  }
  return slots;
}

std::vector<std::string> Template::Skeleton() const {
  std::vector<std::string> out;
  for (const TemplateToken &t : tokens) {
    out.push_back(t.kind == TemplateToken::Kind::kSlot ? "{" + t.text + "}" : t.text);
  }
  return out;
}

Grammar LoadGrammar(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kParseError, "line 0: empty grammar");
  RuleMap rules;
  std::vector<std::string> starts;
  std::string first_lhs;
  std::istringstream in{std::string(text)};
  std::string raw;
  size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = StripComment(raw);
    std::vector<std::string> words = SplitWhitespace(line);
    if (words.empty()) continue;
    if (words[0] == "%start") {
      if (words.size() != 2 || !IsNonterminalToken(words[1])) {
        ParseFailure(line_no, "expected '%start NONTERMINAL'");
      }
      if (std::find(starts.begin(), starts.end(), words[1]) != starts.end()) {
        throw Error(ErrorCode::kDuplicateStartSymbol,
                    words[1] + " (line " + std::to_string(line_no) + ")");
      }
      starts.push_back(words[1]);
      continue;
    }
    size_t arrow = line.find("->");
    if (arrow == std::string::npos) ParseFailure(line_no, "missing '->'");
    std::vector<std::string> lhs = SplitWhitespace(line.substr(0, arrow));
    if (lhs.size() != 1 || !IsNonterminalToken(lhs[0])) {
      ParseFailure(line_no, "left-hand side must be one UPPERCASE nonterminal");
    }
    std::string rhs = line.substr(arrow + 2);
    std::vector<Alternative> &alts = rules[lhs[0]];
    size_t pos = 0;
    while (true) {
      size_t bar = rhs.find('|', pos);
      alts.push_back(ParseAlternative(
          std::string_view(rhs).substr(pos, bar == std::string::npos ? std::string::npos : bar - pos),
          line_no));
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
    if (first_lhs.empty()) first_lhs = lhs[0];
  }
  if (rules.empty()) throw Error(ErrorCode::kParseError, "line 0: no rules");
  if (starts.empty()) starts.push_back(first_lhs);
  return Grammar(std::move(rules), std::move(starts));
}

Grammar LoadGrammarFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return LoadGrammar(buffer.str());
}

Template Sample(const Grammar &grammar, std::string_view start, uint64_t seed) {
  if (!grammar.HasRule(start)) throw Error(ErrorCode::kUnknownStart, std::string(start));
  Rng rng(seed);
  Template tmpl;
  tmpl.source_start = std::string(start);
  tmpl.derivation_seed = seed;
  tmpl.trailing.clear();
  Expand(grammar, start, rng, tmpl.tokens);
  if (!tmpl.tokens.empty()) tmpl.tokens.front().space_before.clear();
  return tmpl;
}

cpp_int CountLanguage(const Grammar &grammar, std::string_view start) {
  if (!grammar.HasRule(start)) throw Error(ErrorCode::kUnknownStart, std::string(start));
  std::map<std::string, cpp_int> memo;
  return CountFrom(grammar, std::string(start), memo);
}

Template Delexicalize(std::string_view utterance, std::span<const EntitySpan> spans) {
  std::vector<EntitySpan> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const EntitySpan &a, const EntitySpan &b) { return a.begin < b.begin; });
  for (size_t i = 0; i < sorted.size(); ++i) {
    const EntitySpan &s = sorted[i];
    if (s.begin >= s.end || s.end > utterance.size()) {
      throw Error(ErrorCode::kSpanOutOfBounds,
                  "[" + std::to_string(s.begin) + ", " + std::to_string(s.end) +
                      ") in utterance of length " + std::to_string(utterance.size()));
    }
    if (s.slot.empty()) throw Error(ErrorCode::kInvalidArgument, "empty slot name");
    if (i > 0 && sorted[i - 1].end > s.begin) {
      throw Error(ErrorCode::kOverlappingSpans,
                  sorted[i - 1].slot + " overlaps " + s.slot);
    }
  }

  Template tmpl;
  std::string pending_space;
  auto emit_literals = [&](std::string_view gap) {
    size_t i = 0;
    while (i < gap.size()) {
      if (std::isspace(static_cast<unsigned char>(gap[i]))) {
        pending_space.push_back(gap[i++]);
        continue;
      }
      size_t j = i;
      while (j < gap.size() && !std::isspace(static_cast<unsigned char>(gap[j]))) ++j;
      tmpl.tokens.push_back({TemplateToken::Kind::kLiteral,
                             std::string(gap.substr(i, j - i)), pending_space});
      pending_space.clear();
      i = j;
    }
  };

  size_t cursor = 0;
  for (const EntitySpan &s : sorted) {
    emit_literals(utterance.substr(cursor, s.begin - cursor));
    tmpl.tokens.push_back({TemplateToken::Kind::kSlot, s.slot, pending_space});
    pending_space.clear();
    cursor = s.end;
  }
  emit_literals(utterance.substr(cursor));
  tmpl.trailing = pending_space;
  return tmpl;
}

std::string Fill(const Template &tmpl, const Bindings &bindings) {
  std::string out;
  for (const TemplateToken &t : tmpl.tokens) {
    out.append(t.space_before);
    if (t.kind == TemplateToken::Kind::kLiteral) {
      out.append(t.text);
      continue;
    }
    auto it = bindings.find(t.text);
    if (it == bindings.end()) throw Error(ErrorCode::kUnboundSlot, t.text);
    out.append(it->second);
  }
  out.append(tmpl.trailing);
  return out;
}

}  // namespace dsr
