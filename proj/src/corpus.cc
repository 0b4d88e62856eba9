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

#include "dsr/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "dsr/error.h"
#include "dsr/random.h"
#include "dsr/text.h"

namespace dsr {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void Mismatch(const std::string &detail) {
  throw Error(ErrorCode::kSchemaMismatch, detail);
}

const Json &Require(const Json &obj, const char *key, const std::string &where) {
  if (!obj.is_object() || !obj.contains(key)) {
    Mismatch(where + ": missing '" + key + "'");
  }
  return obj.at(key);
}

std::string RequireString(const Json &obj, const char *key, const std::string &where) {
  const Json &v = Require(obj, key, where);
  if (!v.is_string()) Mismatch(where + ": '" + key + "' is not a string");
  return v.get<std::string>();
}

std::vector<std::string> StringList(const Json &v, const std::string &where) {
  if (!v.is_array()) Mismatch(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const Json &e : v) {
    if (!e.is_string()) Mismatch(where + ": expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

// Scalar record values become strings; structured values are dropped.
std::optional<std::string> ScalarToString(const Json &v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  return std::nullopt;
}

Json Without(const Json &obj, std::initializer_list<const char *> keys) {
  Json out = Json::object();
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool skip = false;
    for (const char *k : keys) skip = skip || it.key() == k;
    if (!skip) out[it.key()] = it.value();
  }
  return out;
}

Speaker ParseSpeaker(const std::string &s, const std::string &where) {
  if (s == "USER") return Speaker::kUser;
  if (s == "SYSTEM") return Speaker::kSystem;
  Mismatch(where + ": unknown speaker '" + s + "'");
}

std::map<std::string, std::vector<std::string>> SlotValues(const Json &v,
                                                           const std::string &where) {
  if (!v.is_object()) Mismatch(where + ": slot_values must be an object");
  std::map<std::string, std::vector<std::string>> out;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (it.value().is_string()) {
      out[it.key()] = {it.value().get<std::string>()};
    } else {
      out[it.key()] = StringList(it.value(), where + "." + it.key());
    }
  }
  return out;
}

std::string DefaultNameField(std::string_view domain, const NameFieldMap &fields) {
  auto it = fields.find(ToLower(domain));
  return it == fields.end() ? "name" : it->second;
}

std::string DefaultNoun(std::string_view domain) {
  static const std::map<std::string, std::string> kNouns = {
      {"events_1", "event"},      {"events_2", "event"},      {"events_3", "event"},
      {"homes_1", "apartment"},   {"homes_2", "property"},    {"hotels_1", "hotel"},
      {"hotels_2", "house"},      {"hotels_3", "hotel"},      {"hotels_4", "hotel"},
      {"media_1", "movie"},       {"media_2", "movie"},       {"media_3", "movie"},
      {"messaging_1", "contact"}, {"movies_1", "movie"},      {"movies_2", "movie"},
      {"movies_3", "movie"},      {"music_1", "song"},        {"music_2", "song"},
      {"music_3", "song"},        {"restaurants_1", "restaurant"},
      {"restaurants_2", "restaurant"}, {"services_1", "salon"},
      {"services_2", "dentist"},  {"services_3", "doctor"},   {"services_4", "therapist"},
      {"travel_1", "attraction"},
  };
  std::string key = ToLower(domain);
  if (auto it = kNouns.find(key); it != kNouns.end()) return it->second;
  if (size_t us = key.rfind('_'); us != std::string::npos) key.resize(us);
  if (key.size() > 3 && key.back() == 's') key.pop_back();
  return key;
}

Entity RecordToEntity(const Json &record, const std::string &domain,
                      const std::string &name_field, const std::string &where) {
  if (!record.is_object()) Mismatch(where + ": record is not an object");
  if (!record.contains(name_field)) {
    Mismatch(where + ": record lacks name field '" + name_field + "'");
  }
  std::optional<std::string> name = ScalarToString(record.at(name_field));
  if (!name || name->empty()) Mismatch(where + ": empty entity name");
  Entity e{domain, *name, {}};
  for (auto it = record.begin(); it != record.end(); ++it) {
    if (it.key() == name_field) continue;
    if (auto v = ScalarToString(it.value())) e.attributes[it.key()] = *v;
  }
  return e;
}

Json EntityToRecord(const Entity &e, const std::string &name_field) {
  Json record = Json::object();
  record[name_field] = e.name;
  for (const auto &[k, v] : e.attributes) record[k] = v;
  return record;
}

// ---- SGD / MultiWOZ 2.2 shared frame layout ----

Frame FrameFromDataset(const Json &f, const std::string &where) {
  Frame frame;
  frame.service = RequireString(f, "service", where);
  frame.extras = Without(f, {"service", "state", "service_results"});
  if (f.contains("state")) {
    const Json &state = f.at("state");
    if (!state.is_object()) Mismatch(where + ": state is not an object");
    if (state.contains("slot_values")) {
      frame.slot_values = SlotValues(state.at("slot_values"), where + ".state");
    }
    if (state.contains("requested_slots")) {
      frame.requested_slots = StringList(state.at("requested_slots"), where + ".state");
    }
    frame.extras["state"] = Without(state, {"slot_values", "requested_slots"});
  }
  return frame;
}

Json FrameToDataset(const Frame &frame, const std::vector<Entity> *results,
                    const NameFieldMap &name_fields) {
  Json j = Json::object();
  j["service"] = frame.service;
  for (auto it = frame.extras.begin(); it != frame.extras.end(); ++it) {
    if (it.key() != "state") j[it.key()] = it.value();
  }
  if (frame.extras.contains("state") || !frame.slot_values.empty() ||
      !frame.requested_slots.empty()) {
    Json state = frame.extras.value("state", Json::object());
    state["requested_slots"] = frame.requested_slots;
    Json values = Json::object();
    for (const auto &[slot, vals] : frame.slot_values) values[slot] = vals;
    state["slot_values"] = values;
    j["state"] = state;
  }
  if (results != nullptr) {
    Json arr = Json::array();
    for (const Entity &e : *results) {
      if (ToLower(e.domain) == ToLower(frame.service)) {
        arr.push_back(EntityToRecord(e, DefaultNameField(e.domain, name_fields)));
      }
    }
    j["service_results"] = arr;
  }
  return j;
}

Dialog DialogFromDataset(const Json &d, SourceFormat format, const LoadOptions &options) {
  if (!d.is_object()) Mismatch("dialogue is not an object");
  Dialog dialog;
  dialog.id = RequireString(d, "dialogue_id", "dialogue");
  const std::string where = "dialogue " + dialog.id;
  if (d.contains("services")) dialog.services = StringList(d.at("services"), where);
  const Json &turns = Require(d, "turns", where);
  if (!turns.is_array()) Mismatch(where + ": 'turns' is not an array");
  dialog.extras = Without(d, {"dialogue_id", "services", "turns"});
  std::set<std::string> services(dialog.services.begin(), dialog.services.end());
  for (size_t i = 0; i < turns.size(); ++i) {
    const Json &t = turns[i];
    const std::string tw = where + " turn " + std::to_string(i);
    Turn turn;
    turn.speaker = ParseSpeaker(RequireString(t, "speaker", tw), tw);
    turn.utterance = RequireString(t, "utterance", tw);
    turn.extras = Without(t, {"speaker", "utterance", "frames"});
    const Json &frames = t.contains("frames") ? t.at("frames") : Json::array();
    if (!frames.is_array()) Mismatch(tw + ": 'frames' is not an array");
    Json inactive = Json::array();
    for (const Json &f : frames) {
      Frame frame = FrameFromDataset(f, tw);
      // MultiWOZ 2.2 lists a frame for every service on every turn; frames of
      // services the dialog does not use are carried opaquely.
      if (format == SourceFormat::kMultiwoz22 && !services.contains(frame.service) &&
          frame.slot_values.empty()) {
        inactive.push_back(f);
        continue;
      }
      if (f.contains("service_results")) {
        const Json &results = f.at("service_results");
        if (!results.is_array()) Mismatch(tw + ": service_results is not an array");
        if (!turn.search_results) turn.search_results.emplace();
        const std::string field = DefaultNameField(frame.service, options.name_fields);
        for (const Json &r : results) {
          turn.search_results->push_back(RecordToEntity(r, frame.service, field, tw));
        }
      }
      turn.frames.push_back(std::move(frame));
    }
    if (!inactive.empty()) turn.extras["inactive_frames"] = inactive;
    dialog.turns.push_back(std::move(turn));
  }
  return dialog;
}

Json DialogToDataset(const Dialog &dialog, const LoadOptions &options) {
  Json d = Json::object();
  d["dialogue_id"] = dialog.id;
  d["services"] = dialog.services;
  Json turns = Json::array();
  for (const Turn &turn : dialog.turns) {
    Json t = Json::object();
    Json frames = Json::array();
    const std::vector<Entity> *results =
        turn.search_results ? &*turn.search_results : nullptr;
    for (const Frame &f : turn.frames) {
      frames.push_back(FrameToDataset(f, results, options.name_fields));
    }
    Json extras = turn.extras;
    if (extras.contains("inactive_frames")) {
      for (const Json &f : extras.at("inactive_frames")) frames.push_back(f);
      extras.erase("inactive_frames");
    }
    t["frames"] = frames;
    t["speaker"] = std::string(SpeakerName(turn.speaker));
    t["utterance"] = turn.utterance;
    for (auto it = extras.begin(); it != extras.end(); ++it) t[it.key()] = it.value();
    turns.push_back(t);
  }
  d["turns"] = turns;
  for (auto it = dialog.extras.begin(); it != dialog.extras.end(); ++it) {
    d[it.key()] = it.value();
  }
  return d;
}

std::vector<fs::path> DatasetFiles(const fs::path &path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(ErrorCode::kIoError, "no such path " + path.string());
  if (!fs::is_directory(path, ec)) return {path};
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(path)) {
    if (entry.path().extension() == ".json" && entry.path().filename() != "schema.json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

Json ParseJson(std::string_view text, const std::string &where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    Mismatch(where + ": " + e.what());
  }
}

}  // namespace

std::string_view SpeakerName(Speaker speaker) {
  return speaker == Speaker::kUser ? "USER" : "SYSTEM";
}

std::string_view SourceFormatName(SourceFormat format) {
  switch (format) {
    case SourceFormat::kNative: return "native";
    case SourceFormat::kSgd: return "sgd";
    case SourceFormat::kMultiwoz22: return "multiwoz22";
  }
  return "native";
}

SourceFormat ParseSourceFormat(std::string_view name) {
  if (name == "native") return SourceFormat::kNative;
  if (name == "sgd") return SourceFormat::kSgd;
  if (name == "multiwoz22") return SourceFormat::kMultiwoz22;
  throw Error(ErrorCode::kInvalidArgument, "unknown format '" + std::string(name) + "'");
}

const NameFieldMap &DefaultSgdNameFields() {
  static const NameFieldMap kFields = {
      {"events_1", "event_name"},      {"events_2", "event_name"},
      {"events_3", "event_name"},      {"homes_1", "property_name"},
      {"homes_2", "property_name"},    {"hotels_1", "hotel_name"},
      {"hotels_2", "address"},         {"hotels_3", "hotel_name"},
      {"hotels_4", "place_name"},      {"media_1", "title"},
      {"media_2", "movie_name"},       {"media_3", "title"},
      {"messaging_1", "contact_name"}, {"movies_1", "movie_name"},
      {"movies_2", "title"},           {"movies_3", "movie_title"},
      {"music_1", "song_name"},        {"music_2", "song_name"},
      {"music_3", "track"},            {"restaurants_1", "restaurant_name"},
      {"restaurants_2", "restaurant_name"}, {"services_1", "stylist_name"},
      {"services_2", "dentist_name"},  {"services_3", "doctor_name"},
      {"services_4", "therapist_name"}, {"travel_1", "attraction_name"},
  };
  return kFields;
}

void ValidateDialog(const Dialog &dialog) {
  const std::string where = "dialog " + dialog.id;
  if (dialog.id.empty()) Mismatch("dialog with empty id");
  std::set<std::string> services(dialog.services.begin(), dialog.services.end());
  for (size_t i = 0; i < dialog.turns.size(); ++i) {
    const Turn &turn = dialog.turns[i];
    const std::string tw = where + " turn " + std::to_string(i);
    if (i > 0 && dialog.turns[i - 1].speaker == turn.speaker) {
      Mismatch(tw + ": speakers do not alternate");
    }
    if (turn.speaker == Speaker::kUser && turn.search_results) {
      Mismatch(tw + ": search_results on a user turn");
    }
    for (const Frame &f : turn.frames) {
      if (!services.contains(f.service)) {
        Mismatch(tw + ": frame service '" + f.service + "' not in dialog services");
      }
      for (const auto &[slot, values] : f.slot_values) {
        if (slot.empty()) Mismatch(tw + ": empty slot name");
        for (const std::string &v : values) {
          if (v.empty()) Mismatch(tw + ": empty value for slot '" + slot + "'");
        }
      }
    }
    if (turn.search_results) {
      for (const Entity &e : *turn.search_results) {
        if (e.name.empty()) Mismatch(tw + ": search result with empty name");
      }
    }
  }
}

void ValidateCorpus(const Corpus &corpus) {
  std::set<std::string> ids;
  for (const Dialog &d : corpus.dialogs) {
    if (!ids.insert(d.id).second) Mismatch("duplicate dialog id '" + d.id + "'");
    ValidateDialog(d);
  }
}

Json EntityToJson(const Entity &entity) {
  Json j = Json::object();
  j["domain"] = entity.domain;
  j["name"] = entity.name;
  Json attrs = Json::object();
  for (const auto &[k, v] : entity.attributes) attrs[k] = v;
  j["attributes"] = attrs;
  return j;
}

Entity EntityFromJson(const Json &json) {
  Entity e;
  e.domain = RequireString(json, "domain", "entity");
  e.name = RequireString(json, "name", "entity");
  if (json.contains("attributes")) {
    const Json &attrs = json.at("attributes");
    if (!attrs.is_object()) Mismatch("entity " + e.name + ": attributes must be an object");
    for (auto it = attrs.begin(); it != attrs.end(); ++it) {
      if (auto v = ScalarToString(it.value())) e.attributes[it.key()] = *v;
    }
  }
  return e;
}

Json DialogToJson(const Dialog &dialog) {
  Json d = Json::object();
  d["dialog_id"] = dialog.id;
  d["services"] = dialog.services;
  Json turns = Json::array();
  for (const Turn &turn : dialog.turns) {
    Json t = Json::object();
    t["speaker"] = std::string(SpeakerName(turn.speaker));
    t["utterance"] = turn.utterance;
    Json frames = Json::array();
    for (const Frame &f : turn.frames) {
      Json fj = Json::object();
      fj["service"] = f.service;
      Json values = Json::object();
      for (const auto &[slot, vals] : f.slot_values) values[slot] = vals;
      fj["slot_values"] = values;
      fj["requested_slots"] = f.requested_slots;
      if (!f.extras.empty()) fj["extras"] = f.extras;
      frames.push_back(fj);
    }
    t["frames"] = frames;
    if (turn.search_results) {
      Json results = Json::array();
      for (const Entity &e : *turn.search_results) results.push_back(EntityToJson(e));
      t["search_results"] = results;
    }
    if (!turn.extras.empty()) t["extras"] = turn.extras;
    turns.push_back(t);
  }
  d["turns"] = turns;
  if (!dialog.extras.empty()) d["extras"] = dialog.extras;
  return d;
}

Dialog DialogFromJson(const Json &json) {
  Dialog dialog;
  dialog.id = RequireString(json, "dialog_id", "dialog");
  const std::string where = "dialog " + dialog.id;
  if (json.contains("services")) dialog.services = StringList(json.at("services"), where);
  const Json &turns = Require(json, "turns", where);
  if (!turns.is_array()) Mismatch(where + ": 'turns' is not an array");
  if (json.contains("extras")) dialog.extras = json.at("extras");
  for (size_t i = 0; i < turns.size(); ++i) {
    const Json &t = turns[i];
    const std::string tw = where + " turn " + std::to_string(i);
    Turn turn;
    turn.speaker = ParseSpeaker(RequireString(t, "speaker", tw), tw);
    turn.utterance = RequireString(t, "utterance", tw);
    if (t.contains("frames")) {
      const Json &frames = t.at("frames");
      if (!frames.is_array()) Mismatch(tw + ": 'frames' is not an array");
      for (const Json &fj : frames) {
        Frame f;
        f.service = RequireString(fj, "service", tw);
        if (fj.contains("slot_values")) f.slot_values = SlotValues(fj.at("slot_values"), tw);
        if (fj.contains("requested_slots")) {
          f.requested_slots = StringList(fj.at("requested_slots"), tw);
        }
        if (fj.contains("extras")) f.extras = fj.at("extras");
        turn.frames.push_back(std::move(f));
      }
    }
    if (t.contains("search_results")) {
      const Json &results = t.at("search_results");
      if (!results.is_array()) Mismatch(tw + ": search_results is not an array");
      turn.search_results.emplace();
      for (const Json &r : results) turn.search_results->push_back(EntityFromJson(r));
    }
    if (t.contains("extras")) turn.extras = t.at("extras");
    dialog.turns.push_back(std::move(turn));
  }
  return dialog;
}

std::string SerializeNative(const Corpus &corpus) {
  std::string out;
  Json header = Json::object();
  header["corpus"] = {{"split", corpus.split_name},
                      {"source_format", std::string(SourceFormatName(corpus.source_format))}};
  out += header.dump() + "\n";
  for (const Dialog &d : corpus.dialogs) out += DialogToJson(d).dump() + "\n";
  return out;
}

Corpus ParseNative(std::string_view text) {
  Corpus corpus;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = ParseJson(line, "line " + std::to_string(line_no));
    if (j.is_object() && j.contains("corpus") && !j.contains("dialog_id")) {
      const Json &h = j.at("corpus");
      corpus.split_name = h.value("split", corpus.split_name);
      corpus.source_format = ParseSourceFormat(h.value("source_format", "native"));
      continue;
    }
    corpus.dialogs.push_back(DialogFromJson(j));
  }
  ValidateCorpus(corpus);
  return corpus;
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path &path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

Corpus LoadCorpus(const fs::path &path, SourceFormat format, const LoadOptions &options) {
  if (format == SourceFormat::kNative) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
      throw Error(ErrorCode::kIoError, path.string() + " is a directory");
    }
    return ParseNative(ReadFile(path));
  }
  Corpus corpus;
  corpus.source_format = format;
  corpus.split_name = options.split_name;
  for (const fs::path &file : DatasetFiles(path)) {
    Json j = ParseJson(ReadFile(file), file.string());
    if (!j.is_array()) Mismatch(file.string() + ": expected a list of dialogues");
    for (const Json &d : j) corpus.dialogs.push_back(DialogFromDataset(d, format, options));
  }
  ValidateCorpus(corpus);
  return corpus;
}

void WriteCorpus(const Corpus &corpus, const fs::path &path, SourceFormat format,
                 const LoadOptions &options) {
  if (format == SourceFormat::kNative) {
    WriteFile(path, SerializeNative(corpus));
    return;
  }
  Json arr = Json::array();
  for (const Dialog &d : corpus.dialogs) arr.push_back(DialogToDataset(d, options));
  WriteFile(path, arr.dump(2) + "\n");
}

void Database::AddDomain(std::string_view domain, DomainTable table) {
  const std::string key = ToLower(domain);
  if (table.name_field.empty()) {
    throw Error(ErrorCode::kSchemaMismatch, "domain " + key + " has no name field");
  }
  if (table.noun.empty()) table.noun = DefaultNoun(key);
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < table.entities.size(); ++i) {
    Entity &e = table.entities[i];
    e.domain = key;
    if (e.name.empty()) throw Error(ErrorCode::kSchemaMismatch, "empty name in " + key);
    e.attributes.erase(table.name_field);
    if (!index.emplace(NormalizeName(e.name), i).second) {
      throw Error(ErrorCode::kDuplicateEntity, key + ": '" + e.name + "'");
    }
  }
  by_name_[key] = std::move(index);
  tables_[key] = std::move(table);
}

bool Database::HasDomain(std::string_view domain) const {
  return tables_.contains(ToLower(domain));
}

const DomainTable &Database::Table(std::string_view domain) const {
  auto it = tables_.find(ToLower(domain));
  if (it == tables_.end()) throw Error(ErrorCode::kUnknownDomain, std::string(domain));
  return it->second;
}

std::vector<std::string> Database::Domains() const {
  std::vector<std::string> out;
  for (const auto &[k, v] : tables_) out.push_back(k);
  return out;
}

std::string Database::Noun(std::string_view domain) const { return Table(domain).noun; }

const Entity *Database::Find(std::string_view domain, std::string_view name) const {
  const std::string key = ToLower(domain);
  auto t = by_name_.find(key);
  if (t == by_name_.end()) return nullptr;
  auto it = t->second.find(NormalizeName(name));
  if (it == t->second.end()) return nullptr;
  return &tables_.at(key).entities[it->second];
}

bool Database::IsNameSlot(std::string_view domain, std::string_view slot) const {
  auto it = tables_.find(ToLower(domain));
  if (it == tables_.end()) return false;
  const std::string s = ToLower(slot);
  const std::string &field = it->second.name_field;
  return s == field || s == it->first + "-" + field;
}

Database ParseDatabase(const Json &json) {
  const Json &fields = Require(json, "name_fields", "database");
  const Json &tables = Require(json, "tables", "database");
  if (!fields.is_object() || !tables.is_object()) {
    Mismatch("database: name_fields and tables must be objects");
  }
  Json nouns = json.value("nouns", Json::object());
  Database db;
  for (auto it = tables.begin(); it != tables.end(); ++it) {
    const std::string &domain = it.key();
    if (!fields.contains(domain) || !fields.at(domain).is_string()) {
      Mismatch("database: domain '" + domain + "' has no name field declaration");
    }
    if (!it.value().is_array()) Mismatch("database: table '" + domain + "' is not a list");
    DomainTable table;
    table.name_field = fields.at(domain).get<std::string>();
    table.noun = nouns.value(domain, std::string());
    for (const Json &record : it.value()) {
      table.entities.push_back(
          RecordToEntity(record, domain, table.name_field, "database." + domain));
    }
    db.AddDomain(domain, std::move(table));
  }
  return db;
}

Database LoadDatabase(const fs::path &path) {
  return ParseDatabase(ParseJson(ReadFile(path), path.string()));
}

Json DatabaseToJson(const Database &db) {
  Json fields = Json::object();
  Json nouns = Json::object();
  Json tables = Json::object();
  for (const std::string &d : db.Domains()) {
    const DomainTable &t = db.Table(d);
    fields[d] = t.name_field;
    nouns[d] = t.noun;
    Json records = Json::array();
    for (const Entity &e : t.entities) records.push_back(EntityToRecord(e, t.name_field));
    tables[d] = records;
  }
  return {{"name_fields", fields}, {"nouns", nouns}, {"tables", tables}};
}

Database BuildDatabaseFromSearchResults(const Corpus &corpus) {
  std::map<std::string, DomainTable> tables;
  std::map<std::string, std::set<std::string>> seen;
  for (const Dialog &d : corpus.dialogs) {
    for (const Turn &t : d.turns) {
      if (!t.search_results) continue;
      for (const Entity &e : *t.search_results) {
        const std::string key = ToLower(e.domain);
        if (!seen[key].insert(NormalizeName(e.name)).second) continue;
        DomainTable &table = tables[key];
        table.name_field = DefaultNameField(key, DefaultSgdNameFields());
        table.entities.push_back(e);
      }
    }
  }
  Database db;
  for (auto &[domain, table] : tables) db.AddDomain(domain, std::move(table));
  return db;
}

size_t AttachSearchResults(Corpus &corpus, const Database &db) {
  size_t populated = 0;
  for (Dialog &dialog : corpus.dialogs) {
    for (size_t i = 1; i < dialog.turns.size(); ++i) {
      Turn &turn = dialog.turns[i];
      const Turn &prev = dialog.turns[i - 1];
      if (turn.speaker != Speaker::kSystem || turn.search_results ||
          prev.speaker != Speaker::kUser) {
        continue;
      }
      std::vector<Entity> results;
      for (const Frame &f : prev.frames) {
        if (!db.HasDomain(f.service)) continue;
        const DomainTable &table = db.Table(f.service);
        std::map<std::string, std::vector<std::string>> constraints;
        for (const auto &[slot, values] : f.slot_values) {
          if (db.IsNameSlot(f.service, slot)) continue;
          std::string attr = ToLower(slot);
          if (attr.rfind(ToLower(f.service) + "-", 0) == 0) {
            attr = attr.substr(f.service.size() + 1);
          }
          if (attr.rfind("book", 0) == 0) continue;
          std::vector<std::string> wanted;
          for (const std::string &v : values) {
            if (v != "dontcare") wanted.push_back(NormalizeName(v));
          }
          if (!wanted.empty()) constraints[attr] = wanted;
        }
        if (constraints.empty()) continue;
        for (const Entity &e : table.entities) {
          bool ok = true;
          for (const auto &[attr, wanted] : constraints) {
            auto it = e.attributes.find(attr);
            ok = ok && it != e.attributes.end() &&
                 std::find(wanted.begin(), wanted.end(), NormalizeName(it->second)) !=
                     wanted.end();
          }
          if (ok) results.push_back(e);
        }
      }
      if (!results.empty()) {
        turn.search_results = std::move(results);
        ++populated;
      }
    }
  }
  return populated;
}

std::vector<Entity> SampleEntities(const Database &db, std::string_view domain, size_t n,
                                   uint64_t seed) {
  const DomainTable &table = db.Table(domain);
  if (n > table.entities.size()) {
    throw Error(ErrorCode::kNotEnoughEntities,
                "have " + std::to_string(table.entities.size()) + ", want " +
                    std::to_string(n));
  }
  Rng rng(seed);
  std::vector<Entity> out;
  for (size_t i : rng.SampleIndices(table.entities.size(), n)) {
    out.push_back(table.entities[i]);
  }
  return out;
}

}  // namespace dsr
