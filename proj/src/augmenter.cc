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

#include "dsr/augmenter.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsr/error.h"
#include "dsr/parallel.h"
#include "dsr/random.h"
#include "dsr/resolver.h"
#include "dsr/text.h"

namespace dsr {
namespace {

constexpr std::string_view kActsNote = "system dialog acts kept from the original turn";

// Normalized entity names held in `turn`'s name slots for `domain`.
std::set<std::string> StateNames(const Turn &turn, const Database &db, const std::string &domain) {
  std::set<std::string> names;
  for (const Frame &f : turn.frames) {
    if (ToLower(f.service) != domain) continue;
    for (const auto &[slot, values] : f.slot_values) {
      if (!db.IsNameSlot(domain, slot)) continue;
      for (const std::string &v : values) names.insert(NormalizeName(v));
    }
  }
  return names;
}

bool Marked(const Turn &turn) {
  return turn.extras.is_object() && turn.extras.contains(kAugmentedMarker);
}

bool EndsSentence(const std::string &text) {
  return !text.empty() && (text.back() == '.' || text.back() == '!' || text.back() == '?');
}

// Mention for the accepted entity at `position`, verified by the resolver.
std::pair<std::string, AddressingMethod> ChooseMention(const std::vector<Entity> &candidates,
                                                       size_t position, const Grammar &grammar,
                                                       const std::string &noun, bool mix,
                                                       Rng &rng) {
  const size_t targets[] = {position};
  const uint64_t mention_seed = rng.Next();
  if (mix) {
    constexpr AddressingMethod kSingle[] = {
        AddressingMethod::kExact, AddressingMethod::kPositional, AddressingMethod::kPartial,
        AddressingMethod::kTypo, AddressingMethod::kAttribute};
    const AddressingMethod method = kSingle[rng.Uniform(std::size(kSingle))];
    try {
      std::string mention =
          ApplyAddressing(candidates, targets, method, mention_seed, &grammar, noun);
      Resolution r = Resolve(candidates, mention);
      if (r.selected == std::vector<size_t>{position} && !r.ambiguous) return {mention, method};
    } catch (const Error &) {
    }
  }
  return {candidates[position].name, AddressingMethod::kExact};
}

}  // namespace

const AllowList &DefaultMultiwozAllowList() {
  static const AllowList kList = {"restaurant", "hotel", "attraction"};
  return kList;
}

const AllowList &DefaultSgdAllowList() {
  static const AllowList kList = {
      "events_3",  "homes_2",  "hotels_4",      "media_3",    "messaging_1", "movies_1",
      "movies_3",  "music_3",  "restaurants_2", "services_1", "services_4",  "travel_1",
      "events_1",  "homes_1",  "hotels_1",      "media_2",    "movies_2",    "music_1",
      "hotels_3",  "media_1",  "music_2",       "restaurants_1", "services_2", "services_3",
  };
  return kList;
}

AllowList DefaultAllowList() {
  AllowList all = DefaultMultiwozAllowList();
  all.insert(DefaultSgdAllowList().begin(), DefaultSgdAllowList().end());
  return all;
}

AllowList ParseAllowList(const Json &json) {
  AllowList out;
  auto add = [&](const Json &list) {
    if (!list.is_array()) throw Error(ErrorCode::kSchemaMismatch, "allow-list must be an array");
    for (const Json &name : list) {
      if (!name.is_string()) throw Error(ErrorCode::kSchemaMismatch, "allow-list entry not a string");
      out.insert(ToLower(name.get<std::string>()));
    }
  };
  if (json.is_object()) {
    for (const auto &[key, list] : json.items()) add(list);
  } else {
    add(json);
  }
  return out;
}

std::vector<AugmentableTurn> FindAugmentableTurns(const Dialog &dialog, const Database &db,
                                                  const AllowList &allowed) {
  std::vector<AugmentableTurn> out;
  const std::vector<Turn> &turns = dialog.turns;
  for (size_t t = 0; t + 1 < turns.size(); ++t) {
    const Turn &system = turns[t];
    const Turn &user = turns[t + 1];
    if (system.speaker != Speaker::kSystem || user.speaker != Speaker::kUser) continue;
    if (!system.search_results || Marked(system) || Marked(user)) continue;

    std::map<std::string, std::vector<Entity>> by_domain;
    for (const Entity &e : *system.search_results) {
      const std::string domain = ToLower(e.domain);
      if (allowed.count(domain)) by_domain[domain].push_back(e);
    }
    const Turn *previous = nullptr;
    for (size_t p = t; p-- > 0;) {
      if (turns[p].speaker == Speaker::kUser) {
        previous = &turns[p];
        break;
      }
    }
    for (const auto &[domain, results] : by_domain) {
      if (results.size() < 2 || !db.HasDomain(domain)) continue;
      const std::set<std::string> after = StateNames(user, db, domain);
      const std::set<std::string> before =
          previous ? StateNames(*previous, db, domain) : std::set<std::string>{};
      const Entity *accepted = nullptr;
      for (const Entity &e : results) {
        const std::string name = NormalizeName(e.name);
        if (after.count(name) && !before.count(name)) {
          accepted = db.Find(domain, e.name);
          if (accepted) break;
        }
      }
      if (accepted) {
        out.push_back({t, results, *accepted});
        break;
      }
    }
  }
  return out;
}

AugmentedDialog AugmentDialog(const Dialog &dialog, const Database &db, const Grammar &grammar,
                              uint64_t seed, const AugmentOptions &options) {
  for (std::string_view start : {kSystemQuestion, kUserAnswer}) {
    if (!grammar.HasRule(start)) throw Error(ErrorCode::kGrammarMissingStart, std::string(start));
  }
  AugmentedDialog out{dialog, {}};
  for (const AugmentableTurn &a : FindAugmentableTurns(dialog, db, options.allowed)) {
    const size_t u = a.turn_index + 1;
    AugmentationRecord rec;
    rec.dialog_id = dialog.id;
    rec.turn_index = a.turn_index;
    rec.user_turn_index = u;
    rec.original_system = dialog.turns[a.turn_index].utterance;
    rec.original_user = dialog.turns[u].utterance;
    rec.target = a.accepted;

    const DomainTable &table = db.Table(a.accepted.domain);
    if (table.entities.size() < 3) {
      rec.skipped_reason = "not_enough_entities";
      out.records.push_back(std::move(rec));
      continue;
    }
    Rng rng(DeriveSeed(seed, {a.turn_index}));
    const size_t max_k = std::min<size_t>(5, table.entities.size());
    const size_t k = static_cast<size_t>(rng.UniformIn(3, static_cast<int64_t>(max_k)));
    std::vector<size_t> others;
    const std::string accepted_name = NormalizeName(a.accepted.name);
    for (size_t i = 0; i < table.entities.size(); ++i) {
      if (NormalizeName(table.entities[i].name) != accepted_name) others.push_back(i);
    }
    std::vector<Entity> candidates;
    for (size_t i : rng.SampleIndices(others.size(), k - 1)) {
      candidates.push_back(table.entities[others[i]]);
    }
    const size_t position = rng.Uniform(k);
    candidates.insert(candidates.begin() + static_cast<std::ptrdiff_t>(position), a.accepted);
    rec.candidates = candidates;

    std::vector<std::string> names;
    for (const Entity &c : candidates) names.push_back(c.name);
    const std::string noun = table.noun;
    const uint64_t system_seed = rng.Next();
    const uint64_t user_seed = rng.Next();
    auto [mention, method] =
        ChooseMention(candidates, position, grammar, noun, options.mix_methods, rng);
    rec.method = method;
    rec.new_system = Fill(Sample(grammar, kSystemQuestion, system_seed),
                          {{std::string(kOptionListSlot), FormatOptionList(names)},
                           {std::string(kEntityTypeSlot), noun}});
    std::string prefix = Fill(Sample(grammar, kUserAnswer, user_seed),
                              {{std::string(kMentionSlot), mention},
                               {std::string(kEntityTypeSlot), noun}});
    if (!EndsSentence(prefix)) prefix += ".";
    rec.user_prefix = prefix;

    bool resolved = false;
    try {
      Resolution r = Resolve(candidates, prefix);
      resolved = r.selected == std::vector<size_t>{position} && !r.ambiguous;
    } catch (const Error &) {
    }
    if (!resolved) {
      rec.skipped_reason = "unresolvable_prefix";
      out.records.push_back(std::move(rec));
      continue;
    }
    Turn &system = out.dialog.turns[a.turn_index];
    Turn &user = out.dialog.turns[u];
    system.utterance = rec.new_system;
    user.utterance = prefix + " " + rec.original_user;
    system.extras[std::string(kAugmentedMarker)] = true;
    user.extras[std::string(kAugmentedMarker)] = true;
    out.records.push_back(std::move(rec));
  }
  return out;
}

AugmentedCorpus AugmentCorpus(const Corpus &corpus, const Database &db, const Grammar &grammar,
                              const AugmentOptions &options) {
  std::vector<AugmentedDialog> results(corpus.dialogs.size());
  ParallelFor(corpus.dialogs.size(), options.threads, [&](size_t i) {
    const Dialog &d = corpus.dialogs[i];
    results[i] = AugmentDialog(d, db, grammar, DeriveSeed(options.seed, {HashString(d.id)}),
                               options);
  });

  AugmentedCorpus out;
  out.corpus.split_name = corpus.split_name;
  out.corpus.source_format = corpus.source_format;
  AugmentationStats &stats = out.stats;
  stats.dialogs_total = corpus.dialogs.size();
  for (size_t i = 0; i < results.size(); ++i) {
    const Dialog &d = corpus.dialogs[i];
    stats.turns_total += d.turns.size();
    std::set<std::string> services;
    for (const std::string &s : d.services) services.insert(ToLower(s));
    for (const std::string &s : services) {
      if (options.allowed.count(s)) ++stats.per_domain[s].dialogs_total;
    }
    std::set<std::string> modified_domains;
    for (AugmentationRecord &r : results[i].records) {
      if (r.skipped_reason) {
        ++stats.turns_skipped;
        continue;
      }
      ++stats.turns_modified;
      ++stats.per_domain[r.target.domain].turns_modified;
      modified_domains.insert(r.target.domain);
    }
    if (!modified_domains.empty()) ++stats.dialogs_modified;
    for (const std::string &s : modified_domains) ++stats.per_domain[s].dialogs_modified;
    out.corpus.dialogs.push_back(std::move(results[i].dialog));
    for (AugmentationRecord &r : results[i].records) out.records.push_back(std::move(r));
  }
  return out;
}

MultiResultReport ComputeMultiResultReport(const Corpus &corpus) {
  MultiResultReport report;
  report.dialogs_total = corpus.dialogs.size();
  size_t any = 0;
  std::map<std::string, size_t> hits;
  for (const Dialog &d : corpus.dialogs) {
    bool multi = false;
    std::map<std::string, bool> service_multi;
    for (const std::string &s : d.services) service_multi[ToLower(s)] = false;
    for (const Turn &t : d.turns) {
      if (!t.search_results) continue;
      if (t.search_results->size() >= 2) multi = true;
      std::map<std::string, size_t> per_domain;
      for (const Entity &e : *t.search_results) ++per_domain[ToLower(e.domain)];
      for (const auto &[domain, n] : per_domain) {
        auto it = service_multi.find(domain);
        if (n >= 2 && it != service_multi.end()) it->second = true;
      }
    }
    if (multi) ++any;
    for (const auto &[service, hit] : service_multi) {
      ++report.dialogs_per_service[service];
      if (hit) ++hits[service];
    }
  }
  report.overall = report.dialogs_total ? static_cast<double>(any) / report.dialogs_total : 0.0;
  for (const auto &[service, n] : report.dialogs_per_service) {
    report.per_service[service] = static_cast<double>(hits[service]) / n;
  }
  return report;
}

Corpus Upsample(const Corpus &corpus, const std::vector<AugmentationRecord> &records,
                double factor) {
  if (!(factor >= 0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::kInvalidArgument, "upsample factor must be a nonnegative number");
  }
  std::set<std::string> modified;
  for (const AugmentationRecord &r : records) {
    if (!r.skipped_reason) modified.insert(r.dialog_id);
  }
  Corpus out = corpus;
  std::vector<const Dialog *> pool;
  for (const Dialog &d : corpus.dialogs) {
    if (modified.count(d.id)) pool.push_back(&d);
  }
  if (pool.empty()) return out;
  const size_t want =
      static_cast<size_t>(std::ceil(factor * static_cast<double>(corpus.dialogs.size())));
  for (size_t i = 0; i < want; ++i) {
    Dialog copy = *pool[i % pool.size()];
    copy.id += "#dup" + std::to_string(i / pool.size() + 1);
    out.dialogs.push_back(std::move(copy));
  }
  return out;
}

Json RecordToJson(const AugmentationRecord &r) {
  Json j = Json::object();
  j["dialog_id"] = r.dialog_id;
  j["turn_index"] = r.turn_index;
  j["user_turn_index"] = r.user_turn_index;
  j["original_system"] = r.original_system;
  j["new_system"] = r.new_system;
  j["user_prefix"] = r.user_prefix;
  j["original_user"] = r.original_user;
  Json candidates = Json::array();
  for (const Entity &e : r.candidates) candidates.push_back(EntityToJson(e));
  j["candidates"] = candidates;
  j["target"] = EntityToJson(r.target);
  j["method"] = std::string(MethodName(r.method));
  j["skipped_reason"] = r.skipped_reason ? Json(*r.skipped_reason) : Json(nullptr);
  j["note"] = kActsNote;
  return j;
}

AugmentationRecord RecordFromJson(const Json &j) {
  try {
    AugmentationRecord r;
    r.dialog_id = j.at("dialog_id").get<std::string>();
    r.turn_index = j.at("turn_index").get<size_t>();
    r.user_turn_index = j.value("user_turn_index", r.turn_index + 1);
    r.original_system = j.value("original_system", std::string());
    r.new_system = j.value("new_system", std::string());
    r.user_prefix = j.value("user_prefix", std::string());
    r.original_user = j.value("original_user", std::string());
    for (const Json &c : j.at("candidates")) r.candidates.push_back(EntityFromJson(c));
    r.target = EntityFromJson(j.at("target"));
    r.method = ParseMethod(j.value("method", std::string("EXACT")));
    if (j.contains("skipped_reason") && !j.at("skipped_reason").is_null()) {
      r.skipped_reason = j.at("skipped_reason").get<std::string>();
    }
    return r;
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("record: ") + e.what());
  }
}

std::string SerializeRecords(const std::vector<AugmentationRecord> &records) {
  std::string out;
  for (const AugmentationRecord &r : records) out += RecordToJson(r).dump() + "\n";
  return out;
}

std::vector<AugmentationRecord> ParseRecords(std::string_view text) {
  std::vector<AugmentationRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(RecordFromJson(Json::parse(line)));
    } catch (const Json::parse_error &e) {
      throw Error(ErrorCode::kSchemaMismatch, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

Json StatsToJson(const AugmentationStats &s) {
  auto ratio = [](size_t a, size_t b) { return b ? static_cast<double>(a) / b : 0.0; };
  Json j = Json::object();
  j["dialogs_total"] = s.dialogs_total;
  j["dialogs_modified"] = s.dialogs_modified;
  j["dialogs_modified_fraction"] = ratio(s.dialogs_modified, s.dialogs_total);
  j["turns_total"] = s.turns_total;
  j["turns_modified"] = s.turns_modified;
  j["turns_modified_fraction"] = ratio(s.turns_modified, s.turns_total);
  j["turns_skipped"] = s.turns_skipped;
  Json per = Json::object();
  for (const auto &[domain, d] : s.per_domain) {
    per[domain] = {{"dialogs_total", d.dialogs_total},
                   {"dialogs_modified", d.dialogs_modified},
                   {"turns_modified", d.turns_modified}};
  }
  j["per_domain"] = per;
  return j;
}

Json MultiResultReportToJson(const MultiResultReport &report) {
  Json j = Json::object();
  j["dialogs_total"] = report.dialogs_total;
  j["overall"] = report.overall;
  Json per = Json::object();
  for (const auto &[service, fraction] : report.per_service) {
    per[service] = {{"dialogs", report.dialogs_per_service.at(service)}, {"fraction", fraction}};
  }
  j["per_service"] = per;
  return j;
}

}  // namespace dsr
