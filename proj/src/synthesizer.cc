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

#include "dsr/synthesizer.h"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>

#include "dsr/error.h"
#include "dsr/parallel.h"
#include "dsr/random.h"
#include "dsr/resolver.h"
#include "dsr/text.h"

namespace dsr {
namespace {

constexpr std::string_view kOrdinalWords[] = {"first", "second", "third", "fourth", "fifth"};
constexpr std::string_view kOrdinalNumerals[] = {"1st", "2nd", "3rd", "4th", "5th"};
constexpr int kMaxTypoAttempts = 10;
constexpr int kMaxExampleAttempts = 64;

void CheckTargets(size_t n, std::span<const size_t> targets, AddressingMethod method) {
  std::set<size_t> seen;
  for (size_t t : targets) {
    if (t >= n || !seen.insert(t).second) {
      throw Error(ErrorCode::kInvalidTargetArity, "invalid or repeated target index");
    }
  }
  const bool multiple = method == AddressingMethod::kMultiple;
  if (multiple ? targets.size() < 2 : targets.size() != 1) {
    throw Error(ErrorCode::kInvalidTargetArity,
                std::string(MethodName(method)) + " with " + std::to_string(targets.size()) +
                    " targets");
  }
}

std::string Positional(size_t position, size_t size, Rng &rng) {
  std::vector<std::string> forms = {
      "the " + std::string(kOrdinalWords[position - 1]) + " one",
      "the " + std::string(kOrdinalNumerals[position - 1]) + " one",
  };
  if (position == size) forms.push_back("the last one");
  return forms[rng.Uniform(forms.size())];
}

// Shortest name prefix that no other candidate contains, else the shortest
// (then leftmost) such window anywhere in the name.
std::string Partial(std::span<const Entity> candidates, size_t target) {
  const std::vector<std::string> words = SplitWhitespace(candidates[target].name);
  auto unique = [&](size_t begin, size_t end) {
    std::vector<std::string> window(words.begin() + begin, words.begin() + end);
    std::vector<std::string> norm = Normalize(Join(window, " "));
    if (norm.empty()) return false;
    if (std::all_of(norm.begin(), norm.end(), [](const std::string &t) { return IsStopword(t); })) {
      return false;
    }
    for (size_t c = 0; c < candidates.size(); ++c) {
      if (c != target && ContainsWindow(Normalize(candidates[c].name), norm)) return false;
    }
    return true;
  };
  auto render = [&](size_t begin, size_t end) {
    return Join(std::vector<std::string>(words.begin() + begin, words.begin() + end), " ");
  };
  for (size_t len = 1; len < words.size(); ++len) {
    if (unique(0, len)) return render(0, len);
  }
  for (size_t len = 1; len < words.size(); ++len) {
    for (size_t start = 1; start + len <= words.size(); ++start) {
      if (unique(start, start + len)) return render(start, start + len);
    }
  }
  throw Error(ErrorCode::kNoUniquePartial, candidates[target].name);
}

bool ValidTypo(const std::string &typo, std::span<const Entity> candidates, size_t target) {
  const std::string &name = candidates[target].name;
  if (typo == name || EditDistance(typo, name) != 1) return false;
  const std::string norm = NormalizeName(typo);
  for (const Entity &c : candidates) {
    if (typo == c.name || norm == NormalizeName(c.name)) return false;
  }
  return !norm.empty();
}

std::string ApplyEdit(const std::string &name, int kind, size_t pos, char letter) {
  std::string out = name;
  switch (kind) {
    case 0: out[pos] = letter; break;                      // substitution
    case 1: out.erase(pos, 1); break;                      // deletion
    case 2: out.insert(out.begin() + pos, letter); break;  // insertion
    case 3: std::swap(out[pos], out[pos + 1]); break;      // transposition
  }
  return out;
}

std::string Typo(std::span<const Entity> candidates, size_t target, Rng &rng) {
  const std::string &name = candidates[target].name;
  const size_t n = name.size();
  for (int attempt = 0; attempt < kMaxTypoAttempts; ++attempt) {
    const int kind = static_cast<int>(rng.Uniform(4));
    const char letter = static_cast<char>('a' + rng.Uniform(26));
    size_t pos = 0;
    if (kind == 2) {
      pos = rng.Uniform(n + 1);
    } else if (kind == 3) {
      if (n < 2) continue;
      pos = rng.Uniform(n - 1);
    } else {
      pos = rng.Uniform(n);
    }
    std::string typo = ApplyEdit(name, kind, pos, letter);
    if (ValidTypo(typo, candidates, target)) return typo;
  }
  // Every random draw collided; take the first valid edit in a fixed order.
  for (int kind = 0; kind < 4; ++kind) {
    for (size_t pos = 0; pos < n + (kind == 2 ? 1 : 0); ++pos) {
      if (kind == 3 && pos + 1 >= n) break;
      for (char letter = 'a'; letter <= 'z'; ++letter) {
        std::string typo = ApplyEdit(name, kind, pos, letter);
        if (ValidTypo(typo, candidates, target)) return typo;
        if (kind == 1 || kind == 3) break;
      }
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "no single-edit typo of '" + name + "' is valid");
}

std::string Conjoin(std::span<const Entity> candidates, std::span<const size_t> targets,
                    Rng &rng) {
  std::vector<std::string> names;
  for (size_t t : targets) names.push_back(candidates[t].name);
  if (names.size() == 2) {
    const std::string pair = names[0] + " and " + names[1];
    return rng.Uniform(2) == 0 ? pair : "both " + pair;
  }
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) {
    if (i + 1 == names.size()) {
      out += "and " + names[i];
    } else {
      out += names[i] + ", ";
    }
  }
  return out;
}

std::string Display(std::string_view attr) {
  std::string out(attr);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string UpperKey(std::string_view attr) {
  std::string out;
  for (char c : attr) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c))
                      ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                      : '_');
  }
  return out;
}

// A value identifies the target if it shares no token window with any other
// candidate's values, in either direction.
bool Distinguishes(std::span<const Entity> candidates, size_t target, const std::string &value) {
  std::vector<std::string> v = Normalize(value);
  if (v.empty() || std::all_of(v.begin(), v.end(), [](const std::string &t) { return IsStopword(t); })) {
    return false;
  }
  for (size_t c = 0; c < candidates.size(); ++c) {
    if (c == target) continue;
    for (const auto &[attr, other] : candidates[c].attributes) {
      const std::vector<std::string> w = Normalize(other);
      if (ContainsWindow(w, v) || (!w.empty() && ContainsWindow(v, w))) return false;
    }
  }
  return true;
}

std::string AttributePhrase(const std::string &attr, const std::string &value,
                            std::string_view noun, const Grammar *grammar, Rng &rng) {
  const uint64_t seed = rng.Next();
  if (grammar != nullptr) {
    const std::string specific = std::string(kAttributeMention) + "_" + UpperKey(attr);
    const std::string start = grammar->HasRule(specific) ? specific
                              : grammar->HasRule(kAttributeMention)
                                  ? std::string(kAttributeMention)
                                  : std::string();
    if (!start.empty()) {
      Bindings b = {{std::string(kEntityTypeSlot), std::string(noun)},
                    {std::string(kAttributeSlot), Display(attr)},
                    {std::string(kValueSlot), value}};
      return Fill(Sample(*grammar, start, seed), b);
    }
  }
  if (attr == "area") return "the " + std::string(noun) + " in the " + value + " of the city";
  return "the " + std::string(noun) + " with " + Display(attr) + " " + value;
}

std::string Attribute(std::span<const Entity> candidates, size_t target, std::string_view noun,
                      const Grammar *grammar, Rng &rng) {
  const Entity &e = candidates[target];
  std::vector<std::string> single;
  for (const auto &[attr, value] : e.attributes) {
    if (Distinguishes(candidates, target, value)) single.push_back(attr);
  }
  if (!single.empty()) {
    const std::string &attr = single[rng.Uniform(single.size())];
    return AttributePhrase(attr, e.attributes.at(attr), noun, grammar, rng);
  }
  // No single value is unique; look for a pair no other candidate shares.
  std::vector<std::pair<std::string, std::string>> pairs;
  for (auto a = e.attributes.begin(); a != e.attributes.end(); ++a) {
    for (auto b = std::next(a); b != e.attributes.end(); ++b) {
      if (Normalize(a->second).empty() || Normalize(b->second).empty()) continue;
      bool shared = false;
      for (size_t c = 0; c < candidates.size() && !shared; ++c) {
        if (c == target) continue;
        const auto &attrs = candidates[c].attributes;
        auto ia = attrs.find(a->first);
        auto ib = attrs.find(b->first);
        shared = ia != attrs.end() && ib != attrs.end() &&
                 NormalizeName(ia->second) == NormalizeName(a->second) &&
                 NormalizeName(ib->second) == NormalizeName(b->second);
      }
      if (!shared) pairs.emplace_back(a->first, b->first);
    }
  }
  if (pairs.empty()) throw Error(ErrorCode::kNoDiscriminatingAttribute, e.name);
  const auto &[first, second] = pairs[rng.Uniform(pairs.size())];
  return "the " + std::string(noun) + " with " + Display(first) + " " +
         e.attributes.at(first) + " and " + Display(second) + " " + e.attributes.at(second);
}

}  // namespace

std::string_view MethodName(AddressingMethod method) {
  switch (method) {
    case AddressingMethod::kExact: return "EXACT";
    case AddressingMethod::kPositional: return "POSITIONAL";
    case AddressingMethod::kPartial: return "PARTIAL";
    case AddressingMethod::kTypo: return "TYPO";
    case AddressingMethod::kMultiple: return "MULTIPLE";
    case AddressingMethod::kAttribute: return "ATTRIBUTE";
  }
  return "EXACT";
}

AddressingMethod ParseMethod(std::string_view name) {
  std::string upper;
  for (char c : name) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (AddressingMethod m : kAllMethods) {
    if (MethodName(m) == upper) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown addressing method '" + std::string(name) + "'");
}

std::vector<std::string> SingleTurnExample::TargetNames() const {
  std::vector<std::string> names;
  for (size_t t : targets) names.push_back(candidates[t].name);
  return names;
}

std::string FormatOptionList(const std::vector<std::string> &names) {
  if (names.size() <= 1) return names.empty() ? std::string() : names[0];
  if (names.size() == 2) return names[0] + " or " + names[1];
  std::string out;
  for (size_t i = 0; i + 1 < names.size(); ++i) out += names[i] + ", ";
  return out + "or " + names.back();
}

std::string ApplyAddressing(std::span<const Entity> candidates, std::span<const size_t> targets,
                            AddressingMethod method, uint64_t seed, const Grammar *grammar,
                            std::string_view noun) {
  CheckTargets(candidates.size(), targets, method);
  Rng rng(seed);
  const size_t target = targets[0];
  const std::string type = noun.empty() ? candidates[target].domain : std::string(noun);
  switch (method) {
    case AddressingMethod::kExact:
      return candidates[target].name;
    case AddressingMethod::kPositional:
      if (target >= std::size(kOrdinalWords)) {
        throw Error(ErrorCode::kInvalidArgument, "no ordinal beyond the fifth position");
      }
      return Positional(target + 1, candidates.size(), rng);
    case AddressingMethod::kPartial:
      return Partial(candidates, target);
    case AddressingMethod::kTypo:
      return Typo(candidates, target, rng);
    case AddressingMethod::kMultiple:
      return Conjoin(candidates, targets, rng);
    case AddressingMethod::kAttribute:
      return Attribute(candidates, target, type, grammar, rng);
  }
  return candidates[target].name;
}

SingleTurnExample SynthesizeExample(const Database &db, const Grammar &grammar,
                                    std::string_view domain, AddressingMethod method,
                                    uint64_t seed) {
  for (std::string_view start : {kSystemQuestion, kUserAnswer}) {
    if (!grammar.HasRule(start)) {
      throw Error(ErrorCode::kGrammarMissingStart, std::string(start));
    }
  }
  const std::string noun = db.Noun(domain);
  Rng outer(seed);
  // Drawn once so that re-draws below cannot skew the count distribution.
  const size_t count = static_cast<size_t>(outer.UniformIn(3, 5));

  std::optional<Error> last_error;
  for (int attempt = 0; attempt < kMaxExampleAttempts; ++attempt) {
    Rng rng(DeriveSeed(seed, {static_cast<uint64_t>(attempt)}));
    SingleTurnExample ex;
    ex.method = method;
    ex.domain = db.Table(domain).entities.empty() ? std::string(domain)
                                                  : db.Table(domain).entities[0].domain;
    ex.seed = seed;
    ex.candidates = SampleEntities(db, domain, count, rng.Next());
    if (method == AddressingMethod::kMultiple) {
      const size_t m = static_cast<size_t>(rng.UniformIn(2, static_cast<int64_t>(count)));
      ex.targets = rng.SampleIndices(count, m);
      std::sort(ex.targets.begin(), ex.targets.end());
    } else {
      ex.targets = {static_cast<size_t>(rng.Uniform(count))};
    }
    const uint64_t mention_seed = rng.Next();
    const uint64_t system_seed = rng.Next();
    const uint64_t user_seed = rng.Next();
    std::string mention;
    try {
      mention = ApplyAddressing(ex.candidates, ex.targets, method, mention_seed, &grammar, noun);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kNoUniquePartial &&
          e.code() != ErrorCode::kNoDiscriminatingAttribute) {
        throw;
      }
      last_error = e;
      continue;
    }
    std::vector<std::string> names;
    for (const Entity &c : ex.candidates) names.push_back(c.name);
    ex.system_utterance = Fill(Sample(grammar, kSystemQuestion, system_seed),
                               {{std::string(kOptionListSlot), FormatOptionList(names)},
                                {std::string(kEntityTypeSlot), noun}});
    ex.user_utterance = Fill(Sample(grammar, kUserAnswer, user_seed),
                             {{std::string(kMentionSlot), mention},
                              {std::string(kEntityTypeSlot), noun}});
    return ex;
  }
  throw *last_error;
}

Dataset SynthesizeDataset(const Database &db, const Grammar &grammar,
                          const DatasetConfig &config) {
  std::vector<std::string> domains = config.domains.empty() ? db.Domains() : config.domains;
  if (domains.empty()) throw Error(ErrorCode::kUnknownDomain, "database has no domains");

  struct Job {
    size_t split;
    size_t method;
    size_t index;
    size_t global;
  };
  const size_t counts[3] = {config.train, config.dev, config.test};
  const char *split_names[3] = {"train", "dev", "test"};
  Dataset out;
  std::vector<SingleTurnExample> *targets[3] = {&out.train, &out.dev, &out.test};

  for (size_t s = 0; s < 3; ++s) {
    std::vector<Job> jobs;
    size_t global = 0;
    for (size_t m = 0; m < config.methods.size(); ++m) {
      for (size_t i = 0; i < counts[s]; ++i) jobs.push_back({s, m, i, global++});
    }
    std::vector<SingleTurnExample> &split = *targets[s];
    split.resize(jobs.size());
    ParallelFor(jobs.size(), config.threads, [&](size_t j) {
      const Job &job = jobs[j];
      const AddressingMethod method = config.methods[job.method];
      // Split id is part of the stream, keeping seeds disjoint across splits.
      const uint64_t seed = DeriveSeed(config.seed, {job.split + 1,
                                                     static_cast<uint64_t>(method), job.index});
      SingleTurnExample ex = SynthesizeExample(db, grammar, domains[job.global % domains.size()],
                                               method, seed);
      std::string id = std::to_string(job.index);
      id.insert(0, id.size() < 6 ? 6 - id.size() : 0, '0');
      ex.id = std::string(split_names[s]) + "-" + ToLower(MethodName(method)) + "-" + id;
      split[j] = std::move(ex);
    });
  }
  return out;
}

Json ExampleToJson(const SingleTurnExample &example) {
  Json j = Json::object();
  j["id"] = example.id;
  j["system"] = example.system_utterance;
  j["user"] = example.user_utterance;
  Json candidates = Json::array();
  for (const Entity &e : example.candidates) candidates.push_back(EntityToJson(e));
  j["candidates"] = candidates;
  j["target_names"] = example.TargetNames();
  j["targets"] = example.targets;
  j["method"] = std::string(MethodName(example.method));
  j["domain"] = example.domain;
  j["seed"] = example.seed;
  return j;
}

SingleTurnExample ExampleFromJson(const Json &json) {
  try {
    SingleTurnExample ex;
    ex.id = json.value("id", std::string());
    ex.system_utterance = json.at("system").get<std::string>();
    ex.user_utterance = json.at("user").get<std::string>();
    for (const Json &c : json.at("candidates")) ex.candidates.push_back(EntityFromJson(c));
    if (json.contains("targets")) {
      ex.targets = json.at("targets").get<std::vector<size_t>>();
    } else {
      for (const Json &name : json.at("target_names")) {
        for (size_t i = 0; i < ex.candidates.size(); ++i) {
          if (ex.candidates[i].name == name.get<std::string>()) ex.targets.push_back(i);
        }
      }
    }
    for (size_t t : ex.targets) {
      if (t >= ex.candidates.size()) throw Error(ErrorCode::kSchemaMismatch, "target out of range");
    }
    ex.method = ParseMethod(json.at("method").get<std::string>());
    ex.domain = json.at("domain").get<std::string>();
    ex.seed = json.value("seed", uint64_t{0});
    return ex;
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("example: ") + e.what());
  }
}

std::string SerializeExamples(std::span<const SingleTurnExample> examples) {
  std::string out;
  for (const SingleTurnExample &ex : examples) out += ExampleToJson(ex).dump() + "\n";
  return out;
}

std::vector<SingleTurnExample> ParseExamples(std::string_view text) {
  std::vector<SingleTurnExample> out;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error &e) {
      throw Error(ErrorCode::kSchemaMismatch, "line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(ExampleFromJson(j));
  }
  return out;
}

Corpus ExamplesToCorpus(std::span<const SingleTurnExample> examples) {
  Corpus corpus;
  for (size_t i = 0; i < examples.size(); ++i) {
    const SingleTurnExample &ex = examples[i];
    Dialog d;
    d.id = ex.id.empty() ? "example-" + std::to_string(i) : ex.id;
    d.services = {ex.domain};
    Turn system;
    system.speaker = Speaker::kSystem;
    system.utterance = ex.system_utterance;
    system.search_results = ex.candidates;
    Turn user;
    user.speaker = Speaker::kUser;
    user.utterance = ex.user_utterance;
    Frame frame;
    frame.service = ex.domain;
    frame.slot_values["name"] = ex.TargetNames();
    user.frames.push_back(std::move(frame));
    d.turns = {std::move(system), std::move(user)};
    d.extras["method"] = std::string(MethodName(ex.method));
    corpus.dialogs.push_back(std::move(d));
  }
  return corpus;
}

}  // namespace dsr
