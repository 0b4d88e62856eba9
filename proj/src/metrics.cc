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

#include "dsr/metrics.h"

#include <sstream>

#include "dsr/error.h"
#include "dsr/parallel.h"
#include "dsr/resolver.h"
#include "dsr/text.h"

namespace dsr {
namespace {

std::string KeyName(const TurnKey &key) {
  return key.first + "#" + std::to_string(key.second);
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool IsNameSlot(const Database *db, const std::string &service, const std::string &slot) {
  const std::string s = ToLower(slot);
  if (db != nullptr && db->HasDomain(service)) return s == "name" || db->IsNameSlot(service, s);
  return s == "name" || EndsWith(s, "-name") || EndsWith(s, "_name");
}

// Normalized, sorted, deduplicated; empty values dropped.
std::vector<std::string> NormalizeValues(const std::vector<std::string> &values) {
  std::set<std::string> out;
  for (const std::string &v : values) {
    std::string n = NormalizeName(v);
    if (!n.empty()) out.insert(std::move(n));
  }
  return {out.begin(), out.end()};
}

FlatState NormalizeState(const FlatState &state) {
  FlatState out;
  for (const auto &[slot, values] : state) {
    std::vector<std::string> v = NormalizeValues(values);
    if (!v.empty()) out[ToLower(slot)] = std::move(v);
  }
  return out;
}

FlatState ParseState(const Json &json) {
  if (!json.is_object()) throw Error(ErrorCode::kSchemaMismatch, "state must be an object");
  FlatState out;
  auto values = [](const Json &v) {
    if (v.is_string()) return std::vector<std::string>{v.get<std::string>()};
    return v.get<std::vector<std::string>>();
  };
  for (const auto &[key, value] : json.items()) {
    if (value.is_object()) {
      for (const auto &[slot, v] : value.items()) {
        auto &dst = out[key + "/" + slot];
        for (std::string &x : values(v)) dst.push_back(std::move(x));
      }
    } else {
      auto &dst = out[key];
      for (std::string &x : values(value)) dst.push_back(std::move(x));
    }
  }
  return out;
}

std::set<std::string> NormalizeNames(const std::vector<std::string> &names) {
  std::set<std::string> out;
  for (const std::string &n : names) {
    std::string v = NormalizeName(n);
    if (!v.empty()) out.insert(std::move(v));
  }
  return out;
}

// Gold turns in scope; throws kUnknownSubsetTurn for subset keys that match
// no gold user turn.
std::vector<const GoldTurn *> InScope(const std::vector<GoldTurn> &gold,
                                      const std::set<TurnKey> *subset) {
  std::vector<const GoldTurn *> out;
  std::set<TurnKey> found;
  for (const GoldTurn &g : gold) {
    TurnKey key{g.dialog_id, g.turn_index};
    if (subset == nullptr || subset->count(key)) {
      out.push_back(&g);
      found.insert(key);
    }
  }
  if (subset != nullptr) {
    for (const TurnKey &key : *subset) {
      if (!found.count(key)) throw Error(ErrorCode::kUnknownSubsetTurn, KeyName(key));
    }
  }
  return out;
}

const PredictionRow &Require(const PredictionFile &preds, const GoldTurn &g) {
  const PredictionRow *row = preds.Find({g.dialog_id, g.turn_index});
  if (row == nullptr) {
    throw Error(ErrorCode::kMissingPrediction, KeyName({g.dialog_id, g.turn_index}));
  }
  return *row;
}

const FlatState &RequireState(const PredictionFile &preds, const GoldTurn &g) {
  const PredictionRow &row = Require(preds, g);
  if (!row.state) {
    throw Error(ErrorCode::kMissingPrediction,
                KeyName({g.dialog_id, g.turn_index}) + " (no state)");
  }
  return *row.state;
}

void Finish(Bucket &b) {
  if (b.scored > 0) b.value = static_cast<double>(b.correct) / b.scored;
}

}  // namespace

void PredictionFile::Add(PredictionRow row) {
  TurnKey key{row.dialog_id, row.turn_index};
  if (!rows_.emplace(key, std::move(row)).second) {
    throw Error(ErrorCode::kSchemaMismatch, "duplicate prediction for " + KeyName(key));
  }
}

const PredictionRow *PredictionFile::Find(const TurnKey &key) const {
  auto it = rows_.find(key);
  return it == rows_.end() ? nullptr : &it->second;
}

bool PredictionFile::AnyState() const {
  for (const auto &[key, row] : rows_) {
    if (row.state) return true;
  }
  return false;
}

PredictionFile ParsePredictions(std::string_view text) {
  PredictionFile out;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Json j = Json::parse(line);
      PredictionRow row;
      row.dialog_id = j.at("dialog_id").get<std::string>();
      row.turn_index = j.at("turn_index").get<size_t>();
      if (j.contains("entities")) row.entities = j.at("entities").get<std::vector<std::string>>();
      if (j.contains("state") && !j.at("state").is_null()) row.state = ParseState(j.at("state"));
      out.Add(std::move(row));
    } catch (const Json::exception &e) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "predictions line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

Json PredictionToJson(const PredictionRow &row) {
  Json j = Json::object();
  j["dialog_id"] = row.dialog_id;
  j["turn_index"] = row.turn_index;
  j["entities"] = row.entities;
  if (row.state) j["state"] = *row.state;
  return j;
}

std::string SerializePredictions(const std::vector<PredictionRow> &rows) {
  std::string out;
  for (const PredictionRow &r : rows) out += PredictionToJson(r).dump() + "\n";
  return out;
}

std::vector<GoldTurn> ExtractGold(const Corpus &gold, const Database *db) {
  std::vector<GoldTurn> out;
  for (const Dialog &d : gold.dialogs) {
    std::string method;
    if (d.extras.is_object() && d.extras.contains("method") && d.extras["method"].is_string()) {
      method = d.extras["method"].get<std::string>();
    }
    std::set<std::string> previous_names;
    for (size_t t = 0; t < d.turns.size(); ++t) {
      const Turn &turn = d.turns[t];
      if (turn.speaker != Speaker::kUser) continue;
      GoldTurn g;
      g.dialog_id = d.id;
      g.turn_index = t;
      g.method = method;
      std::set<std::string> names;
      FlatState raw;
      for (const Frame &f : turn.frames) {
        const std::string service = ToLower(f.service);
        for (const auto &[slot, values] : f.slot_values) {
          auto &dst = raw[service + "/" + ToLower(slot)];
          dst.insert(dst.end(), values.begin(), values.end());
          if (!IsNameSlot(db, service, slot)) continue;
          for (const std::string &v : values) {
            std::string n = NormalizeName(v);
            if (!n.empty()) names.insert(std::move(n));
          }
        }
      }
      g.state = NormalizeState(raw);
      for (const std::string &n : names) {
        if (!previous_names.count(n)) g.targets.insert(n);
      }
      previous_names = std::move(names);
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::set<TurnKey> AugmentedTurns(const std::vector<AugmentationRecord> &records) {
  std::set<TurnKey> out;
  for (const AugmentationRecord &r : records) {
    if (!r.skipped_reason) out.insert({r.dialog_id, r.user_turn_index});
  }
  return out;
}

Bucket EntityAccuracy(const PredictionFile &preds, const std::vector<GoldTurn> &gold,
                      const std::set<TurnKey> *subset) {
  Bucket b;
  for (const GoldTurn *g : InScope(gold, subset)) {
    if (g->targets.empty()) {
      ++b.skipped;
      continue;
    }
    const PredictionRow &row = Require(preds, *g);
    ++b.scored;
    if (NormalizeNames(row.entities) == g->targets) ++b.correct;
  }
  Finish(b);
  return b;
}

Bucket JointGoalAccuracy(const PredictionFile &preds, const std::vector<GoldTurn> &gold,
                         const std::set<TurnKey> *subset) {
  Bucket b;
  for (const GoldTurn *g : InScope(gold, subset)) {
    ++b.scored;
    if (NormalizeState(RequireState(preds, *g)) == g->state) ++b.correct;
  }
  Finish(b);
  return b;
}

Bucket SlotAccuracy(const PredictionFile &preds, const std::vector<GoldTurn> &gold,
                    const std::set<TurnKey> *subset) {
  std::vector<const GoldTurn *> scope = InScope(gold, subset);
  std::vector<FlatState> predicted;
  std::set<std::string> inventory;
  for (const GoldTurn *g : scope) {
    predicted.push_back(NormalizeState(RequireState(preds, *g)));
    for (const auto &[slot, v] : g->state) inventory.insert(slot);
    for (const auto &[slot, v] : predicted.back()) inventory.insert(slot);
  }
  Bucket b;
  if (scope.empty()) return b;
  if (inventory.empty()) {
    // Nothing to get wrong: every state is empty on both sides.
    b.scored = b.correct = scope.size();
    Finish(b);
    return b;
  }
  static const std::vector<std::string> kNone;
  for (size_t i = 0; i < scope.size(); ++i) {
    for (const std::string &slot : inventory) {
      auto g = scope[i]->state.find(slot);
      auto p = predicted[i].find(slot);
      ++b.scored;
      if ((g == scope[i]->state.end() ? kNone : g->second) ==
          (p == predicted[i].end() ? kNone : p->second)) {
        ++b.correct;
      }
    }
  }
  Finish(b);
  return b;
}

ScoreReport Score(const PredictionFile &preds, const Corpus &gold,
                  const std::vector<AugmentationRecord> &records, const Database *db,
                  Subset subset) {
  const std::vector<GoldTurn> turns = ExtractGold(gold, db);
  std::set<TurnKey> known;
  for (const GoldTurn &g : turns) known.insert({g.dialog_id, g.turn_index});
  for (const auto &[key, row] : preds.rows()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::kSchemaMismatch, "prediction for unknown turn " + KeyName(key));
    }
  }
  const std::set<TurnKey> augmented = AugmentedTurns(records);
  const bool with_state = preds.AnyState();
  ScoreReport report;
  if (subset == Subset::kAll) {
    report.entity_all = EntityAccuracy(preds, turns);
    if (with_state) {
      report.jga_all = JointGoalAccuracy(preds, turns);
      report.slot_all = SlotAccuracy(preds, turns);
    }
    std::map<std::string, std::vector<GoldTurn>> by_method;
    for (const GoldTurn &g : turns) {
      if (!g.method.empty()) by_method[g.method].push_back(g);
    }
    for (const auto &[method, group] : by_method) {
      report.entity_per_method[method] = EntityAccuracy(preds, group);
    }
  }
  if (!augmented.empty()) {
    report.entity_augmented = EntityAccuracy(preds, turns, &augmented);
    if (with_state) report.jga_augmented = JointGoalAccuracy(preds, turns, &augmented);
  }
  return report;
}

Json ScoreReportToJson(const ScoreReport &report) {
  auto bucket = [](const Bucket &b) {
    Json j = Json::object();
    j["value"] = b.value ? Json(*b.value) : Json(nullptr);
    j["scored"] = b.scored;
    j["correct"] = b.correct;
    j["skipped"] = b.skipped;
    return j;
  };
  Json j = Json::object();
  j["entity_accuracy_all"] = bucket(report.entity_all);
  j["entity_accuracy_augmented"] = bucket(report.entity_augmented);
  j["jga_all"] = bucket(report.jga_all);
  j["jga_augmented"] = bucket(report.jga_augmented);
  j["slot_accuracy_all"] = bucket(report.slot_all);
  Json per = Json::object();
  for (const auto &[method, b] : report.entity_per_method) per[method] = bucket(b);
  j["entity_accuracy_per_method"] = per;
  return j;
}

std::vector<PredictionRow> ResolveExamples(const std::vector<SingleTurnExample> &examples,
                                           double max_fuzzy, size_t threads) {
  std::vector<PredictionRow> rows(examples.size());
  ParallelFor(examples.size(), threads, [&](size_t i) {
    const SingleTurnExample &ex = examples[i];
    PredictionRow &row = rows[i];
    row.dialog_id = ex.id.empty() ? "example-" + std::to_string(i) : ex.id;
    row.turn_index = 1;
    try {
      for (size_t s : Resolve(ex.candidates, ex.user_utterance, max_fuzzy).selected) {
        row.entities.push_back(ex.candidates[s].name);
      }
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kNoMatch) throw;
    }
  });
  return rows;
}

std::vector<PredictionRow> ResolveRecords(const std::vector<AugmentationRecord> &records,
                                          double max_fuzzy) {
  std::vector<PredictionRow> rows;
  for (const AugmentationRecord &r : records) {
    if (r.skipped_reason) continue;
    PredictionRow row;
    row.dialog_id = r.dialog_id;
    row.turn_index = r.user_turn_index;
    try {
      const std::string utterance = r.user_prefix + " " + r.original_user;
      for (size_t s : Resolve(r.candidates, utterance, max_fuzzy).selected) {
        row.entities.push_back(r.candidates[s].name);
      }
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kNoMatch) throw;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dsr
