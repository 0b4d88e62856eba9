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

#include <algorithm>
#include <map>
#include <set>

#include "dsr/error.h"

namespace dsr {
namespace {

constexpr std::string_view kOrdinalWords[] = {"first", "second", "third", "fourth",
                                              "fifth"};
constexpr std::string_view kOrdinalNumerals[] = {"1st", "2nd", "3rd", "4th", "5th"};

// A run of utterance tokens attributed to one candidate.
struct Span {
  size_t begin;
  size_t end;
  size_t candidate;
};

bool StrictlyContains(const Span &outer, const Span &inner) {
  return outer.begin <= inner.begin && inner.end <= outer.end &&
         (outer.end - outer.begin) > (inner.end - inner.begin);
}

bool AllStopwords(const std::vector<std::string> &tokens, size_t begin, size_t end) {
  for (size_t i = begin; i < end; ++i) {
    if (!IsStopword(tokens[i])) return false;
  }
  return true;
}

// Full-name occurrences plus occurrences of name windows that identify a
// single candidate, with spans swallowed by a longer span of another
// candidate removed.
std::vector<Span> NameSpans(const std::vector<std::vector<std::string>> &names,
                            const std::vector<std::string> &tokens) {
  std::vector<Span> spans;
  for (size_t c = 0; c < names.size(); ++c) {
    const std::vector<std::string> &name = names[c];
    for (size_t len = name.size(); len >= 1; --len) {
      for (size_t start = 0; start + len <= name.size(); ++start) {
        std::vector<std::string> window(name.begin() + start, name.begin() + start + len);
        if (len < name.size()) {
          if (AllStopwords(name, start, start + len)) continue;
          bool shared = false;
          for (size_t o = 0; o < names.size() && !shared; ++o) {
            shared = o != c && ContainsWindow(names[o], window);
          }
          if (shared) continue;
        }
        for (size_t at : FindWindows(tokens, window)) spans.push_back({at, at + len, c});
      }
    }
  }
  std::vector<Span> kept;
  for (const Span &s : spans) {
    bool swallowed = std::any_of(spans.begin(), spans.end(), [&](const Span &o) {
      return o.candidate != s.candidate && StrictlyContains(o, s);
    });
    if (!swallowed) kept.push_back(s);
  }
  return kept;
}

bool HasConjunction(const std::vector<std::string> &tokens, const std::vector<bool> &covered,
                    std::string_view raw) {
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (covered[i]) continue;
    if (tokens[i] == "and" || tokens[i] == "both") return true;
    if (tokens[i] == "all" && i + 1 < tokens.size() && tokens[i + 1] == "three") return true;
  }
  return raw.find(',') != std::string_view::npos;
}

void Finish(Resolution &r, bool conjunction) {
  std::sort(r.matches.begin(), r.matches.end(), [](const Match &a, const Match &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.index < b.index;
  });
  if (r.matches.empty()) throw Error(ErrorCode::kNoMatch, "no candidate matches the reply");
  r.ambiguous = r.matches.size() >= 2 && r.matches[0].score == r.matches[1].score;
  const double top = r.matches[0].score;
  if (conjunction) {
    for (const Match &m : r.matches) {
      if (m.score == top) r.selected.push_back(m.index);
    }
  } else {
    r.selected.push_back(r.matches[0].index);
  }
}

}  // namespace

std::string_view EvidenceName(Evidence evidence) {
  switch (evidence) {
    case Evidence::kOrdinal: return "ORDINAL";
    case Evidence::kExactName: return "EXACT_NAME";
    case Evidence::kFuzzyName: return "FUZZY_NAME";
    case Evidence::kAttribute: return "ATTRIBUTE";
  }
  return "UNKNOWN";
}

size_t EditDistance(std::string_view a, std::string_view b) {
  const size_t m = a.size();
  const size_t n = b.size();
  std::vector<std::vector<size_t>> d(m + 1, std::vector<size_t>(n + 1));
  for (size_t i = 0; i <= m; ++i) d[i][0] = i;
  for (size_t j = 0; j <= n; ++j) d[0][j] = j;
  for (size_t i = 1; i <= m; ++i) {
    for (size_t j = 1; j <= n; ++j) {
      const size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[m][n];
}

double NormalizedEditDistance(std::string_view a, std::string_view b) {
  const size_t longer = std::max(a.size(), b.size());
  if (longer == 0) return 0.0;
  return static_cast<double>(EditDistance(a, b)) / static_cast<double>(longer);
}

std::optional<size_t> OrdinalPosition(std::string_view token, size_t size) {
  for (size_t i = 0; i < std::size(kOrdinalWords); ++i) {
    if (token == kOrdinalWords[i] || token == kOrdinalNumerals[i]) return i + 1;
  }
  if (token == "last" && size > 0) return size;
  return std::nullopt;
}

Resolution Resolve(std::span<const Entity> candidates, std::string_view utterance,
                   double max_fuzzy) {
  if (candidates.empty() || candidates.size() > 5) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected 1-5 candidates, got " + std::to_string(candidates.size()));
  }
  const std::vector<std::string> tokens = Normalize(utterance);
  std::vector<std::vector<std::string>> names;
  for (const Entity &e : candidates) names.push_back(Normalize(e.name));

  Resolution result;
  std::vector<bool> covered(tokens.size(), false);

  // Ordinals and name windows.
  std::map<size_t, Evidence> strong;
  for (const Span &s : NameSpans(names, tokens)) {
    strong.emplace(s.candidate, Evidence::kExactName);
    for (size_t i = s.begin; i < s.end; ++i) covered[i] = true;
  }
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (covered[i]) continue;
    std::optional<size_t> pos = OrdinalPosition(tokens[i], candidates.size());
    // "the other" only picks something out of a two-item list.
    if (!pos && tokens[i] == "other" && i > 0 && tokens[i - 1] == "the" &&
        candidates.size() == 2) {
      pos = 2;
    }
    if (pos && *pos <= candidates.size()) strong[*pos - 1] = Evidence::kOrdinal;
  }
  if (!strong.empty()) {
    for (const auto &[index, evidence] : strong) result.matches.push_back({index, 1.0, evidence});
    Finish(result, HasConjunction(tokens, covered, utterance));
    return result;
  }

  // Fuzzy name windows.
  for (size_t c = 0; c < names.size(); ++c) {
    if (names[c].empty()) continue;
    const std::string name = Join(names[c], " ");
    const size_t len = names[c].size();
    double best = 1.0;
    for (size_t w = std::max<size_t>(1, len - 1); w <= len + 1; ++w) {
      for (size_t start = 0; start + w <= tokens.size(); ++start) {
        std::vector<std::string> window(tokens.begin() + start, tokens.begin() + start + w);
        best = std::min(best, NormalizedEditDistance(Join(window, " "), name));
      }
    }
    if (best <= max_fuzzy) {
      result.matches.push_back({c, 1.0 - best, Evidence::kFuzzyName});
    }
  }
  if (!result.matches.empty()) {
    Finish(result, HasConjunction(tokens, covered, utterance));
    return result;
  }

  // Attribute values.
  std::vector<Span> value_spans;
  std::vector<std::string> span_attr;
  for (size_t c = 0; c < candidates.size(); ++c) {
    for (const auto &[attr, value] : candidates[c].attributes) {
      std::vector<std::string> v = Normalize(value);
      if (v.empty() || AllStopwords(v, 0, v.size())) continue;
      for (size_t at : FindWindows(tokens, v)) {
        value_spans.push_back({at, at + v.size(), c});
        span_attr.push_back(attr);
      }
    }
  }
  std::map<size_t, std::set<std::string>> hits;
  for (size_t i = 0; i < value_spans.size(); ++i) {
    const Span &s = value_spans[i];
    bool swallowed = std::any_of(value_spans.begin(), value_spans.end(),
                                 [&](const Span &o) { return StrictlyContains(o, s); });
    if (!swallowed) hits[s.candidate].insert(span_attr[i]);
  }
  for (const auto &[c, attrs] : hits) {
    const double total = static_cast<double>(candidates[c].attributes.size());
    result.matches.push_back({c, attrs.size() / total, Evidence::kAttribute});
  }
  Finish(result, HasConjunction(tokens, covered, utterance));
  return result;
}

}  // namespace dsr
