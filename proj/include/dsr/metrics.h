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

#ifndef DSR_METRICS_H_
#define DSR_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsr/augmenter.h"
#include "dsr/corpus.h"
#include "dsr/synthesizer.h"

namespace dsr {

// "service/slot" -> values.
using FlatState = std::map<std::string, std::vector<std::string>>;

// One external prediction, keyed to a user turn.
struct PredictionRow {
  std::string dialog_id;
  size_t turn_index = 0;
  std::vector<std::string> entities;
  std::optional<FlatState> state;

  bool operator==(const PredictionRow &) const = default;
};

using TurnKey = std::pair<std::string, size_t>;

class PredictionFile {
 public:
  // Throws kSchemaMismatch on a repeated key.
  void Add(PredictionRow row);
  const PredictionRow *Find(const TurnKey &key) const;
  const std::map<TurnKey, PredictionRow> &rows() const { return rows_; }
  bool AnyState() const;

 private:
  std::map<TurnKey, PredictionRow> rows_;
};

// JSONL rows {dialog_id, turn_index, entities: [...], state: {...}}. "state"
// is optional and may be flat ({"hotel/name": [...]}) or nested by service.
PredictionFile ParsePredictions(std::string_view text);
Json PredictionToJson(const PredictionRow &row);
std::string SerializePredictions(const std::vector<PredictionRow> &rows);

// Gold view of one user turn.
struct GoldTurn {
  std::string dialog_id;
  size_t turn_index = 0;
  std::set<std::string> targets;  // normalized names newly entering the state
  FlatState state;                // normalized values, empty slots dropped
  std::string method;             // synthesized gold only
};

// User turns of `gold`. Name slots are recognized through `db` when it knows
// the service, else by the slot name ("name", "*-name", "*_name").
std::vector<GoldTurn> ExtractGold(const Corpus &gold, const Database *db = nullptr);

enum class Subset { kAll, kAugmentedOnly };

// User turns rewritten by the augmenter, from the non-skipped records.
std::set<TurnKey> AugmentedTurns(const std::vector<AugmentationRecord> &records);

struct Bucket {
  std::optional<double> value;  // nullopt when no turn qualifies
  size_t scored = 0;
  size_t correct = 0;
  size_t skipped = 0;  // turns without a gold target set
};

// Set equality of normalized names, over turns with a gold target set.
// Throws kMissingPrediction naming the first unmatched key, and
// kUnknownSubsetTurn if `subset` names a turn that is not a gold user turn.
Bucket EntityAccuracy(const PredictionFile &preds, const std::vector<GoldTurn> &gold,
                      const std::set<TurnKey> *subset = nullptr);

// All-or-nothing match of the full flattened state; extra predicted slots
// count as errors.
Bucket JointGoalAccuracy(const PredictionFile &preds, const std::vector<GoldTurn> &gold,
                         const std::set<TurnKey> *subset = nullptr);

// Micro accuracy over (turn, slot) pairs, where the slots are every slot
// seen in gold or predictions anywhere in scope.
Bucket SlotAccuracy(const PredictionFile &preds, const std::vector<GoldTurn> &gold,
                    const std::set<TurnKey> *subset = nullptr);

struct ScoreReport {
  Bucket entity_all;
  Bucket entity_augmented;
  Bucket jga_all;
  Bucket jga_augmented;
  Bucket slot_all;
  std::map<std::string, Bucket> entity_per_method;
};

// JGA buckets stay empty when no prediction carries a state. With
// kAugmentedOnly the whole-set buckets are left empty too, so predictions are
// only needed for the rewritten turns.
ScoreReport Score(const PredictionFile &preds, const Corpus &gold,
                  const std::vector<AugmentationRecord> &records, const Database *db = nullptr,
                  Subset subset = Subset::kAll);
Json ScoreReportToJson(const ScoreReport &report);

// Resolver baseline predictions.
std::vector<PredictionRow> ResolveExamples(const std::vector<SingleTurnExample> &examples,
                                           double max_fuzzy, size_t threads = 1);
std::vector<PredictionRow> ResolveRecords(const std::vector<AugmentationRecord> &records,
                                          double max_fuzzy);

}  // namespace dsr

#endif  // DSR_METRICS_H_
