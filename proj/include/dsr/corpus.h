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

#ifndef DSR_CORPUS_H_
#define DSR_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dsr {

using Json = nlohmann::ordered_json;

enum class Speaker { kUser, kSystem };

std::string_view SpeakerName(Speaker speaker);

// One database record. `name` is the entity's surface form; attributes never
// repeat the name field.
struct Entity {
  std::string domain;
  std::string name;
  std::map<std::string, std::string> attributes;

  bool operator==(const Entity &) const = default;
};

// Per-service annotation of a turn. For user turns slot_values is the
// (cumulative) dialog state of that service.
struct Frame {
  std::string service;
  std::map<std::string, std::vector<std::string>> slot_values;
  std::vector<std::string> requested_slots;
  Json extras = Json::object();  // fields the model does not cover

  bool operator==(const Frame &) const = default;
};

struct Turn {
  Speaker speaker = Speaker::kUser;
  std::string utterance;
  std::vector<Frame> frames;
  std::optional<std::vector<Entity>> search_results;  // system turns only
  Json extras = Json::object();

  bool operator==(const Turn &) const = default;
};

struct Dialog {
  std::string id;
  std::vector<std::string> services;
  std::vector<Turn> turns;
  Json extras = Json::object();

  bool operator==(const Dialog &) const = default;
};

enum class SourceFormat { kNative, kSgd, kMultiwoz22 };

std::string_view SourceFormatName(SourceFormat format);
SourceFormat ParseSourceFormat(std::string_view name);

struct Corpus {
  std::vector<Dialog> dialogs;
  std::string split_name = "test";
  SourceFormat source_format = SourceFormat::kNative;

  bool operator==(const Corpus &) const = default;
};

// Validates every type invariant; throws kSchemaMismatch on the first
// violation. Never repairs.
void ValidateDialog(const Dialog &dialog);
void ValidateCorpus(const Corpus &corpus);

// Service name (lowercase) -> record field holding the entity name, for
// SGD-style service_results.
using NameFieldMap = std::map<std::string, std::string>;
const NameFieldMap &DefaultSgdNameFields();

struct LoadOptions {
  NameFieldMap name_fields = DefaultSgdNameFields();
  std::string split_name = "test";
};

// `path` is a native JSONL file, or an SGD / MultiWOZ 2.2 dialogue file or
// directory of dialogue files (schema.json is ignored).
Corpus LoadCorpus(const std::filesystem::path &path, SourceFormat format,
                  const LoadOptions &options = {});
void WriteCorpus(const Corpus &corpus, const std::filesystem::path &path,
                 SourceFormat format, const LoadOptions &options = {});

// Native JSONL encoding: an optional header line {"corpus": {...}} followed by
// one dialog object per line.
Json DialogToJson(const Dialog &dialog);
Dialog DialogFromJson(const Json &json);
std::string SerializeNative(const Corpus &corpus);
Corpus ParseNative(std::string_view text);

Json EntityToJson(const Entity &entity);
Entity EntityFromJson(const Json &json);

struct DomainTable {
  std::string name_field;
  std::string noun;  // natural-language type noun, e.g. "restaurant"
  std::vector<Entity> entities;
};

// Per-domain entity tables. Domain keys are matched case-insensitively.
class Database {
 public:
  // Throws kDuplicateEntity if two names collide after NormalizeName.
  void AddDomain(std::string_view domain, DomainTable table);

  bool HasDomain(std::string_view domain) const;
  const DomainTable &Table(std::string_view domain) const;  // kUnknownDomain
  std::vector<std::string> Domains() const;
  std::string Noun(std::string_view domain) const;

  // Lookup by normalized name; nullptr when absent.
  const Entity *Find(std::string_view domain, std::string_view name) const;

  // True if `slot` is how dialog states name this domain's entity field,
  // i.e. "<field>" or "<domain>-<field>".
  bool IsNameSlot(std::string_view domain, std::string_view slot) const;

 private:
  std::map<std::string, DomainTable> tables_;
  std::map<std::string, std::map<std::string, size_t>> by_name_;
};

// {"name_fields": {domain: field}, "nouns": {domain: noun},
//  "tables": {domain: [record, ...]}}; "nouns" is optional.
Database ParseDatabase(const Json &json);
Database LoadDatabase(const std::filesystem::path &path);
Json DatabaseToJson(const Database &db);

// Rebuilds per-domain tables from the union of search results in a corpus
// (SGD has no standalone database). First occurrence of a name wins.
Database BuildDatabaseFromSearchResults(const Corpus &corpus);

// Fills missing system-turn search results by querying `db` with the
// informable constraints of the preceding user state (MultiWOZ keeps no
// per-turn results). Returns the number of turns populated.
size_t AttachSearchResults(Corpus &corpus, const Database &db);

// n distinct entities drawn without replacement, in draw order.
std::vector<Entity> SampleEntities(const Database &db, std::string_view domain,
                                   size_t n, uint64_t seed);

std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, std::string_view data);

}  // namespace dsr

#endif  // DSR_CORPUS_H_
