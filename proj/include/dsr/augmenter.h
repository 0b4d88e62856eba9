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

#ifndef DSR_AUGMENTER_H_
#define DSR_AUGMENTER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dsr/corpus.h"
#include "dsr/grammar.h"
#include "dsr/synthesizer.h"

namespace dsr {

// Turn extras key marking an exchange this tool already rewrote.
inline constexpr std::string_view kAugmentedMarker = "dsr_augmented";

// Lowercase domain / service names eligible for augmentation.
using AllowList = std::set<std::string>;

const AllowList &DefaultMultiwozAllowList();  // restaurant, hotel, attraction
const AllowList &DefaultSgdAllowList();       // 24 services with entity names
AllowList DefaultAllowList();                 // union of the two

// Reads a JSON array of names, or {"multiwoz": [...], "sgd": [...]}.
AllowList ParseAllowList(const Json &json);

struct AugmentableTurn {
  size_t turn_index = 0;             // the system turn
  std::vector<Entity> search_results;  // same-domain results offered there
  Entity accepted;                   // database record of the accepted entity
};

struct AugmentationRecord {
  std::string dialog_id;
  size_t turn_index = 0;       // system turn whose utterance was replaced
  size_t user_turn_index = 0;  // following user turn that received the prefix
  std::string original_system;
  std::string new_system;
  std::string user_prefix;
  std::string original_user;
  std::vector<Entity> candidates;
  Entity target;
  AddressingMethod method = AddressingMethod::kExact;
  std::optional<std::string> skipped_reason;

  bool operator==(const AugmentationRecord &) const = default;
};

struct DomainStats {
  size_t dialogs_total = 0;
  size_t dialogs_modified = 0;
  size_t turns_modified = 0;

  bool operator==(const DomainStats &) const = default;
};

struct AugmentationStats {
  size_t dialogs_total = 0;
  size_t dialogs_modified = 0;
  size_t turns_total = 0;
  size_t turns_modified = 0;  // rewritten exchanges
  size_t turns_skipped = 0;
  std::map<std::string, DomainStats> per_domain;

  bool operator==(const AugmentationStats &) const = default;
};

struct AugmentOptions {
  uint64_t seed = 0;
  AllowList allowed = DefaultAllowList();
  // Address the accepted entity with a random method instead of always by
  // its full name. Falls back to EXACT when the resolver cannot recover it.
  bool mix_methods = false;
  size_t threads = 1;
};

// System turns whose search results hold >= 2 entities of an allowed domain
// and whose next user turn adds one of them to the state's name slot. Turns
// already marked, final turns and entities missing from `db` are excluded.
std::vector<AugmentableTurn> FindAugmentableTurns(const Dialog &dialog, const Database &db,
                                                  const AllowList &allowed);

struct AugmentedDialog {
  Dialog dialog;
  std::vector<AugmentationRecord> records;
};

AugmentedDialog AugmentDialog(const Dialog &dialog, const Database &db, const Grammar &grammar,
                              uint64_t seed, const AugmentOptions &options = {});

struct AugmentedCorpus {
  Corpus corpus;
  std::vector<AugmentationRecord> records;
  AugmentationStats stats;
};

AugmentedCorpus AugmentCorpus(const Corpus &corpus, const Database &db, const Grammar &grammar,
                              const AugmentOptions &options = {});

struct MultiResultReport {
  size_t dialogs_total = 0;
  double overall = 0;  // dialogs with any turn listing >= 2 results
  std::map<std::string, double> per_service;
  std::map<std::string, size_t> dialogs_per_service;
};

MultiResultReport ComputeMultiResultReport(const Corpus &corpus);

// Copies `corpus` and appends duplicates of every dialog that holds a
// rewritten exchange, round-robin, until the duplicates number
// ceil(factor * |dialogs|). Duplicate ids get a "#dup<n>" suffix.
Corpus Upsample(const Corpus &corpus, const std::vector<AugmentationRecord> &records,
                double factor);

Json RecordToJson(const AugmentationRecord &record);
AugmentationRecord RecordFromJson(const Json &json);
std::string SerializeRecords(const std::vector<AugmentationRecord> &records);
std::vector<AugmentationRecord> ParseRecords(std::string_view text);
Json StatsToJson(const AugmentationStats &stats);
Json MultiResultReportToJson(const MultiResultReport &report);

}  // namespace dsr

#endif  // DSR_AUGMENTER_H_
