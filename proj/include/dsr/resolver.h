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

#ifndef DSR_RESOLVER_H_
#define DSR_RESOLVER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsr/corpus.h"
#include "dsr/text.h"

namespace dsr {

// Ordered by priority: earlier evidence kinds win over later ones.
enum class Evidence { kOrdinal, kExactName, kFuzzyName, kAttribute };

std::string_view EvidenceName(Evidence evidence);

struct Match {
  size_t index = 0;  // into the candidate list
  double score = 0;  // in [0, 1]
  Evidence evidence = Evidence::kExactName;
};

struct Resolution {
  // Sorted by score (descending), then list position.
  std::vector<Match> matches;
  // True iff the two best matches of distinct candidates score equally.
  bool ambiguous = false;
  // The decision: the top match, or every top-scoring match when the reply
  // joins several mentions with a conjunction.
  std::vector<size_t> selected;
};

inline constexpr double kDefaultMaxFuzzy = 0.25;

// Optimal string alignment distance: unit-cost insertions, deletions,
// substitutions and adjacent transpositions, over bytes.
size_t EditDistance(std::string_view a, std::string_view b);

// EditDistance divided by the longer length; 0 for two empty strings.
double NormalizedEditDistance(std::string_view a, std::string_view b);

// 1-based list position named by an ordinal token ("second", "2nd"), or
// `size` for "last". nullopt for anything else.
std::optional<size_t> OrdinalPosition(std::string_view token, size_t size);

// Extracts the candidate(s) a reply selects. Evidence is tried in priority
// order: ordinals and exact or partial name windows (score 1), then fuzzy
// name windows (score 1 - normalized distance, kept when the distance is at
// most `max_fuzzy`), then attribute values (fraction of the candidate's
// attributes mentioned). Throws kNoMatch when nothing matches and
// kInvalidArgument unless 1 <= |candidates| <= 5.
Resolution Resolve(std::span<const Entity> candidates, std::string_view utterance,
                   double max_fuzzy = kDefaultMaxFuzzy);

}  // namespace dsr

#endif  // DSR_RESOLVER_H_
