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

#ifndef DSR_SYNTHESIZER_H_
#define DSR_SYNTHESIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsr/corpus.h"
#include "dsr/grammar.h"

namespace dsr {

// How a user reply refers to the chosen option(s).
enum class AddressingMethod { kExact, kPositional, kPartial, kTypo, kMultiple, kAttribute };

inline constexpr AddressingMethod kAllMethods[] = {
    AddressingMethod::kExact,    AddressingMethod::kPositional, AddressingMethod::kPartial,
    AddressingMethod::kTypo,     AddressingMethod::kMultiple,   AddressingMethod::kAttribute,
};

std::string_view MethodName(AddressingMethod method);  // "EXACT", ...
AddressingMethod ParseMethod(std::string_view name);   // case-insensitive

struct SingleTurnExample {
  std::string id;
  std::string system_utterance;
  std::string user_utterance;
  std::vector<Entity> candidates;  // 3 to 5, as listed in the question
  std::vector<size_t> targets;     // indices into candidates
  AddressingMethod method = AddressingMethod::kExact;
  std::string domain;
  uint64_t seed = 0;

  std::vector<std::string> TargetNames() const;
  bool operator==(const SingleTurnExample &) const = default;
};

// "a", "a or b", "a, b, or c".
std::string FormatOptionList(const std::vector<std::string> &names);

// Produces the words a user would use to pick `targets` out of `candidates`.
// With a grammar, attribute phrases come from ATTRIBUTE_MENTION_<ATTR> or
// ATTRIBUTE_MENTION when present; `noun` names the entity type
// ("restaurant") and defaults to the candidates' domain.
std::string ApplyAddressing(std::span<const Entity> candidates,
                            std::span<const size_t> targets, AddressingMethod method,
                            uint64_t seed, const Grammar *grammar = nullptr,
                            std::string_view noun = {});

SingleTurnExample SynthesizeExample(const Database &db, const Grammar &grammar,
                                    std::string_view domain, AddressingMethod method,
                                    uint64_t seed);

struct DatasetConfig {
  // Examples per addressing method in each split.
  size_t train = 100000;
  size_t dev = 10000;
  size_t test = 10000;
  std::vector<AddressingMethod> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  std::vector<std::string> domains;  // empty: every database domain
  uint64_t seed = 0;
  size_t threads = 1;
};

struct Dataset {
  std::vector<SingleTurnExample> train;
  std::vector<SingleTurnExample> dev;
  std::vector<SingleTurnExample> test;
};

Dataset SynthesizeDataset(const Database &db, const Grammar &grammar,
                          const DatasetConfig &config);

// JSONL row: {id, system, user, candidates, target_names, targets, method,
// domain, seed}.
Json ExampleToJson(const SingleTurnExample &example);
SingleTurnExample ExampleFromJson(const Json &json);
std::string SerializeExamples(std::span<const SingleTurnExample> examples);
std::vector<SingleTurnExample> ParseExamples(std::string_view text);

// Two-turn dialogs (system question, user reply) whose user state carries the
// gold targets under slot "name", for scoring with the corpus metrics.
Corpus ExamplesToCorpus(std::span<const SingleTurnExample> examples);

}  // namespace dsr

#endif  // DSR_SYNTHESIZER_H_
