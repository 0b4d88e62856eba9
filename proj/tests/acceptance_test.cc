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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dsr/augmenter.h"
#include "dsr/cli.h"
#include "dsr/corpus.h"
#include "dsr/error.h"
#include "dsr/grammar.h"
#include "dsr/metrics.h"
#include "dsr/resolver.h"
#include "dsr/synthesizer.h"
#include "dsr/text.h"

namespace dsr {
namespace {

namespace fs = std::filesystem;

constexpr double kGrammarSeconds = 1.0;
constexpr long long kMinQuestions = 2000000;
constexpr long long kMinAnswers = 30000;
constexpr size_t kEnumerationLimit = 10000;

constexpr size_t kBoundsExamples = 10000;
constexpr double kChiSquareP = 0.001;
constexpr double kBoundsSeconds = 30.0;

constexpr size_t kRoundTripPerMethod = 10000;
constexpr double kTypoFloor = 0.99;
constexpr double kSeparation = 0.5;  // pairwise normalized edit distance
constexpr double kRoundTripSeconds = 60.0;

constexpr double kAugmentSeconds = 5.0;
constexpr double kTurnRatio = 0.02;
constexpr double kTurnRatioTolerance = 0.01;
constexpr double kMinDialogRatio = 0.30;

constexpr double kMetricTolerance = 1e-12;
constexpr int kPropertyTrials = 1000;

constexpr double kBaselineTolerance = 1e-9;

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Source(const std::string &relative) {
  return (fs::path(DSR_SOURCE_DIR) / relative).string();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int RunCli(const std::vector<std::string> &args, std::string *out = nullptr) {
  std::ostringstream o, e;
  const int code = Run(args, o, e);
  if (out != nullptr) *out = o.str();
  if (code != kExitOk) std::cerr << "dsr " << args[0] << ": " << e.str();
  return code;
}

const Grammar &ShippedGrammar() {
  static const Grammar g = LoadGrammarFile(Source("grammars/disambiguation.cfg"));
  return g;
}

const Database &ShippedDb() {
  static const Database db = LoadDatabase(Source("data/db/dsr_db.json"));
  return db;
}

const Corpus &Toy() {
  static const Corpus c = LoadCorpus(Source("data/toy/corpus.jsonl"), SourceFormat::kNative);
  return c;
}

const Json &ToyNotes() {
  static const Json j = Json::parse(ReadFile(Source("data/toy/annotations.json")));
  return j;
}

// 1 -------------------------------------------------------------------------

using Strings = std::set<std::vector<std::string>>;

Strings Enumerate(const Grammar &g, const std::string &name) {
  Strings out;
  for (const Alternative &alt : g.Alternatives(name)) {
    Strings partial = {{}};
    for (const Symbol &s : alt) {
      Strings pieces;
      if (s.kind == Symbol::Kind::kNonterminal) {
        pieces = Enumerate(g, s.text);
      } else if (s.kind == Symbol::Kind::kSlot) {
        pieces = {{"{" + s.text + "}"}};
      } else {
        pieces = {{s.text}};
      }
      Strings next;
      for (const auto &p : partial) {
        for (const auto &q : pieces) {
          auto joined = p;
          joined.insert(joined.end(), q.begin(), q.end());
          next.insert(joined);
        }
      }
      partial = std::move(next);
    }
    out.insert(partial.begin(), partial.end());
  }
  return out;
}

// Acyclic grammar whose alternatives each open with a fresh marker word.
std::string RandomGrammar(std::mt19937 &rng) {
  const int levels = 2 + static_cast<int>(rng() % 4);
  std::string text = "%start N0\n";
  int marker = 0;
  for (int level = 0; level < levels; ++level) {
    const int alts = 1 + static_cast<int>(rng() % 4);
    text += "N" + std::to_string(level) + " ->";
    for (int a = 0; a < alts; ++a) {
      if (a > 0) text += " |";
      text += " m" + std::to_string(marker++);
      const int len = static_cast<int>(rng() % 4);
      for (int k = 0; k < len; ++k) {
        if (level + 1 < levels && rng() % 2 == 0) {
          text += " N" + std::to_string(level + 1 + static_cast<int>(rng() % (levels - level - 1)));
        } else if (rng() % 4 == 0) {
          text += " {s}";
        } else {
          text += " w" + std::to_string(rng() % 5);
        }
      }
    }
    text += "\n";
  }
  return text;
}

Outcome GrammarCapacity() {
  Outcome r;
  const auto start = Clock::now();
  std::string q, a;
  const std::string path = Source("grammars/disambiguation.cfg");
  r.Require(RunCli({"grammar-count", path, "--start", "SYSTEM_QUESTION"}, &q) == kExitOk,
            "count questions");
  r.Require(RunCli({"grammar-count", path, "--start", "USER_ANSWER"}, &a) == kExitOk,
            "count answers");
  const double elapsed = Seconds(start);
  const long long questions = q.empty() ? 0 : std::stoll(q);
  const long long answers = a.empty() ? 0 : std::stoll(a);
  r.Require(questions >= kMinQuestions, "SYSTEM_QUESTION >= 2000000");
  r.Require(answers >= kMinAnswers, "USER_ANSWER >= 30000");
  r.Require(elapsed < kGrammarSeconds, "runtime < 1 s");

  std::vector<std::string> grammars = {
      "S -> a | b",
      "S -> A A\nA -> x | y | z",
      "S -> A B C\nA -> p | q\nB -> r | <eps>\nC -> {slot} s | t",
      "S -> go A | stop\nA -> A1 | A2\nA1 -> up | down\nA2 -> left B\nB -> now | later",
  };
  std::mt19937 rng(2024);
  for (int i = 0; i < 300; ++i) grammars.push_back(RandomGrammar(rng));
  size_t checked = 0, equal = 0;
  for (const std::string &text : grammars) {
    Grammar g = LoadGrammar(text);
    const std::string s = g.start_symbols().empty() ? "S" : g.start_symbols()[0];
    const auto count = CountLanguage(g, s);
    if (count > kEnumerationLimit) continue;
    ++checked;
    equal += count == Enumerate(g, s).size();
  }
  r.Require(checked > 100 && equal == checked, "count equals enumeration");
  r.detail << "SYSTEM_QUESTION=" << questions << " USER_ANSWER=" << answers << " in " << elapsed
           << " s; enumeration " << equal << "/" << checked << " grammars";
  return r;
}

// 2 -------------------------------------------------------------------------

Outcome CandidateBounds() {
  Outcome r;
  const auto start = Clock::now();
  const std::vector<std::string> domains = ShippedDb().Domains();
  std::map<size_t, size_t> counts;
  size_t bad = 0;
  for (size_t i = 0; i < kBoundsExamples; ++i) {
    const AddressingMethod m = kAllMethods[i % std::size(kAllMethods)];
    SingleTurnExample ex = SynthesizeExample(ShippedDb(), ShippedGrammar(),
                                             domains[i % domains.size()], m, 500000 + i);
    const size_t n = ex.candidates.size();
    ++counts[n];
    bool ok = n >= 3 && n <= 5 && !ex.targets.empty();
    std::set<size_t> seen;
    for (size_t t : ex.targets) ok = ok && t < n && seen.insert(t).second;
    ok = ok && (m == AddressingMethod::kMultiple ? ex.targets.size() >= 2 : ex.targets.size() == 1);
    bad += !ok;
  }
  const double elapsed = Seconds(start);
  // Chi-square with two degrees of freedom has survival exp(-x/2).
  const double expected = static_cast<double>(kBoundsExamples) / 3;
  double stat = 0;
  for (size_t k = 3; k <= 5; ++k) {
    const double d = static_cast<double>(counts[k]) - expected;
    stat += d * d / expected;
  }
  const double p = std::exp(-stat / 2);
  r.Require(bad == 0, "3-5 candidates with targets among them");
  r.Require(counts.size() <= 3, "no other candidate counts");
  r.Require(p > kChiSquareP, "uniform counts at p > 0.001");
  r.Require(elapsed < kBoundsSeconds, "runtime < 30 s");
  r.detail << kBoundsExamples << " examples, " << bad << " violations; counts 3/4/5 = "
           << counts[3] << "/" << counts[4] << "/" << counts[5] << ", chi2=" << stat
           << " p=" << p << ", " << elapsed << " s";
  return r;
}

// 3 -------------------------------------------------------------------------

bool Separated(const std::vector<Entity> &candidates) {
  for (size_t i = 0; i < candidates.size(); ++i) {
    for (size_t j = i + 1; j < candidates.size(); ++j) {
      if (NormalizedEditDistance(NormalizeName(candidates[i].name),
                                 NormalizeName(candidates[j].name)) <= kSeparation) {
        return false;
      }
    }
  }
  return true;
}

Outcome ResolverRoundTrip() {
  Outcome r;
  const auto start = Clock::now();
  for (AddressingMethod m : {AddressingMethod::kExact, AddressingMethod::kPositional,
                             AddressingMethod::kPartial, AddressingMethod::kTypo,
                             AddressingMethod::kMultiple}) {
    DatasetConfig config;
    config.train = kRoundTripPerMethod;
    config.dev = config.test = 0;
    config.methods = {m};
    config.seed = 17;
    const std::vector<SingleTurnExample> examples =
        SynthesizeDataset(ShippedDb(), ShippedGrammar(), config).train;
    size_t scored = 0, correct = 0;
    for (const SingleTurnExample &ex : examples) {
      if (m == AddressingMethod::kTypo && !Separated(ex.candidates)) continue;
      ++scored;
      std::vector<size_t> got;
      try {
        got = Resolve(ex.candidates, ex.user_utterance).selected;
      } catch (const Error &) {
      }
      std::sort(got.begin(), got.end());
      correct += got == ex.targets;
    }
    const double acc = scored == 0 ? 0 : static_cast<double>(correct) / scored;
    const bool ok = m == AddressingMethod::kTypo ? acc >= kTypoFloor && scored > 0
                                                 : correct == scored && scored == examples.size();
    r.Require(ok, std::string(MethodName(m)));
    r.detail << MethodName(m) << "=" << correct << "/" << scored << " ";
  }
  const double elapsed = Seconds(start);
  r.Require(elapsed < kRoundTripSeconds, "runtime < 60 s");
  r.detail << "in " << elapsed << " s";
  return r;
}

// 4 and 5 ------------------------------------------------------------------

std::set<TurnKey> AnnotatedTurns() {
  std::set<TurnKey> out;
  for (const Json &a : ToyNotes().at("augmentable_turns")) {
    out.insert({a.at("dialog_id").get<std::string>(), a.at("turn_index").get<size_t>()});
  }
  return out;
}

Outcome AugmentationIdentity() {
  Outcome r;
  const std::set<TurnKey> annotated = AnnotatedTurns();
  double worst = 0;
  size_t diffs = 0;
  for (uint64_t seed : {0u, 1u, 2u}) {
    const auto start = Clock::now();
    AugmentOptions options;
    options.seed = seed;
    AugmentedCorpus out = AugmentCorpus(Toy(), ShippedDb(), ShippedGrammar(), options);
    AugmentedCorpus again = AugmentCorpus(out.corpus, ShippedDb(), ShippedGrammar(), options);
    worst = std::max(worst, Seconds(start));

    std::set<TurnKey> modified;
    for (const AugmentationRecord &rec : out.records) {
      if (!rec.skipped_reason) modified.insert({rec.dialog_id, rec.turn_index});
    }
    r.Require(modified == annotated, "modified turns equal the annotated set");

    // Structural diff: which (dialog, turn) pairs changed at all.
    std::set<TurnKey> changed;
    bool states_equal = Toy().dialogs.size() == out.corpus.dialogs.size();
    for (size_t i = 0; states_equal && i < Toy().dialogs.size(); ++i) {
      const Dialog &a = Toy().dialogs[i];
      const Dialog &b = out.corpus.dialogs[i];
      states_equal = a.id == b.id && a.services == b.services && a.extras == b.extras &&
                     a.turns.size() == b.turns.size();
      for (size_t t = 0; states_equal && t < a.turns.size(); ++t) {
        states_equal = a.turns[t].frames == b.turns[t].frames &&
                       a.turns[t].speaker == b.turns[t].speaker;
        if (!(a.turns[t] == b.turns[t])) changed.insert({a.id, t});
      }
    }
    std::set<TurnKey> allowed;
    for (const auto &[id, t] : annotated) {
      allowed.insert({id, t});
      allowed.insert({id, t + 1});
    }
    diffs += changed.size();
    r.Require(states_equal, "dialog states identical");
    r.Require(changed == allowed, "changes only at the annotated exchanges");
    r.Require(again.stats.turns_modified == 0 && again.corpus == out.corpus, "idempotent");
  }
  r.Require(worst < kAugmentSeconds, "runtime < 5 s");
  r.detail << annotated.size() << " annotated exchanges, " << diffs / 3
           << " changed turns per run over 3 seeds, idempotent; worst " << worst << " s";
  return r;
}

Outcome StatisticsShape() {
  Outcome r;
  AugmentedCorpus out = AugmentCorpus(Toy(), ShippedDb(), ShippedGrammar(), {});
  const AugmentationStats &s = out.stats;
  const double turns = static_cast<double>(s.turns_modified) / s.turns_total;
  const double dialogs = static_cast<double>(s.dialogs_modified) / s.dialogs_total;
  r.Require(std::abs(turns - kTurnRatio) <= kTurnRatioTolerance, "turn ratio 0.02 +- 0.01");
  r.Require(dialogs >= kMinDialogRatio, "dialog ratio >= 0.30");

  const MultiResultReport report = ComputeMultiResultReport(Toy());
  const Json &notes = ToyNotes().at("multi_result");
  bool match = report.dialogs_total == ToyNotes().at("dialogs_total").get<size_t>() &&
               report.overall == notes.at("overall").get<double>() &&
               report.per_service.size() == notes.at("per_service").size();
  for (const auto &[service, counts] : notes.at("per_service").items()) {
    const size_t n = counts.at("dialogs").get<size_t>();
    const size_t with = counts.at("with_multi_results").get<size_t>();
    match = match && report.dialogs_per_service.count(service) &&
            report.dialogs_per_service.at(service) == n &&
            report.per_service.at(service) == static_cast<double>(with) / n;
  }
  r.Require(match, "multi-result report equals the hand count");
  r.detail << "turns " << s.turns_modified << "/" << s.turns_total << " = " << turns
           << ", dialogs " << s.dialogs_modified << "/" << s.dialogs_total << " = " << dialogs
           << ", multi-result overall " << report.overall;
  return r;
}

// 6 -------------------------------------------------------------------------

bool Near(const Bucket &b, double want) {
  return b.value.has_value() && std::abs(*b.value - want) <= kMetricTolerance;
}

Outcome MetricCorrectness() {
  Outcome r;
  const Corpus gold =
      LoadCorpus(Source("tests/fixtures/metrics/gold.jsonl"), SourceFormat::kNative);
  const PredictionFile preds =
      ParsePredictions(ReadFile(Source("tests/fixtures/metrics/preds.jsonl")));
  const std::vector<AugmentationRecord> records =
      ParseRecords(ReadFile(Source("tests/fixtures/metrics/records.jsonl")));
  ScoreReport report = Score(preds, gold, records);
  r.Require(report.entity_all.correct == 7 && report.entity_all.scored == 10 &&
                Near(report.entity_all, 0.7),
            "entity accuracy 7/10");
  r.Require(report.jga_all.correct == 13 && report.jga_all.scored == 20 &&
                Near(report.jga_all, 0.65),
            "JGA 13/20");

  const std::vector<GoldTurn> turns = ExtractGold(gold);
  PredictionFile perfect;
  for (const GoldTurn &g : turns) {
    perfect.Add({g.dialog_id, g.turn_index, {g.targets.begin(), g.targets.end()}, g.state});
  }
  ScoreReport best = Score(perfect, gold, records);
  r.Require(Near(best.entity_all, 1.0) && Near(best.jga_all, 1.0) && Near(best.slot_all, 1.0) &&
                Near(best.entity_augmented, 1.0) && Near(best.jga_augmented, 1.0),
            "perfect predictions score 1.0");

  std::set<std::string> slots;
  std::set<std::string> values;
  for (const GoldTurn &g : turns) {
    for (const auto &[slot, vs] : g.state) {
      slots.insert(slot);
      values.insert(vs.begin(), vs.end());
    }
  }
  slots.insert("hotel/hotel-area");
  values.insert("nowhere");
  const std::vector<std::string> slot_list(slots.begin(), slots.end());
  const std::vector<std::string> value_list(values.begin(), values.end());
  std::mt19937_64 rng(99);
  int violations = 0;
  for (int trial = 0; trial < kPropertyTrials; ++trial) {
    PredictionFile p;
    for (const GoldTurn &g : turns) {
      FlatState s = g.state;
      if (rng() % 2) {
        for (const std::string &slot : slot_list) {
          const uint64_t roll = rng() % 4;
          if (roll == 0) s.erase(slot);
          if (roll == 1) s[slot] = {value_list[rng() % value_list.size()]};
        }
      }
      p.Add({g.dialog_id, g.turn_index, {}, s});
    }
    violations += *JointGoalAccuracy(p, turns).value > *SlotAccuracy(p, turns).value;
  }
  r.Require(violations == 0, "JGA <= slot accuracy");
  r.detail << "entity " << *report.entity_all.value << " JGA " << *report.jga_all.value
           << "; perfect = 1.0; JGA > slot in " << violations << "/" << kPropertyTrials
           << " random trials";
  return r;
}

// 7 -------------------------------------------------------------------------

std::map<std::string, std::string> ReadDir(const fs::path &dir) {
  std::map<std::string, std::string> out;
  for (const auto &entry : fs::directory_iterator(dir)) {
    out[entry.path().filename().string()] = ReadFile(entry.path());
  }
  return out;
}

Outcome Determinism(const fs::path &work) {
  Outcome r;
  size_t files = 0;
  auto same = [&](const std::vector<std::vector<std::string>> &runs, const std::string &what) {
    std::vector<std::map<std::string, std::string>> outputs;
    for (size_t i = 0; i < runs.size(); ++i) {
      const fs::path dir = work / (what + std::to_string(i));
      std::vector<std::string> args = runs[i];
      args.push_back("--out-dir");
      args.push_back(dir.string());
      r.Require(RunCli(args) == kExitOk, what + " run");
      outputs.push_back(fs::exists(dir) ? ReadDir(dir) : std::map<std::string, std::string>{});
    }
    bool equal = !outputs[0].empty();
    for (const auto &o : outputs) equal = equal && o == outputs[0];
    r.Require(equal, what + " outputs byte-identical");
    files += outputs[0].size();
  };
  const std::vector<std::string> synth = {"synth", "--per-method", "300,50,50", "--seed", "5"};
  std::vector<std::vector<std::string>> synth_runs;
  for (const char *threads : {"1", "1", "8", "8"}) {
    synth_runs.push_back(synth);
    synth_runs.back().insert(synth_runs.back().end(), {"--threads", threads});
  }
  same(synth_runs, "synth");
  for (bool mix : {false, true}) {
    std::vector<std::string> augment = {"augment", "--input", Source("data/toy/corpus.jsonl"),
                                        "--seed", "5"};
    if (mix) augment.push_back("--mix-methods");
    std::vector<std::vector<std::string>> runs;
    for (const char *threads : {"1", "1", "8", "8"}) {
      runs.push_back(augment);
      runs.back().insert(runs.back().end(), {"--threads", threads});
    }
    same(runs, mix ? "augment_mix" : "augment");
  }
  r.detail << files << " output files identical across 2 runs x threads {1, 8}";
  return r;
}

// 8 -------------------------------------------------------------------------

Outcome BaselineReporting(const fs::path &work) {
  Outcome r;
  const auto start = Clock::now();
  // Split seeds do not depend on the other split sizes, so the default test
  // split can be produced without the training split.
  const fs::path small_full = work / "split_full";
  const fs::path small_test = work / "split_test";
  r.Require(RunCli({"synth", "--per-method", "40,4,4", "--out-dir", small_full.string()}) ==
                    kExitOk &&
                RunCli({"synth", "--per-method", "0,0,4", "--out-dir", small_test.string()}) ==
                    kExitOk,
            "synth");
  r.Require(ReadFile(small_full / "test.jsonl") == ReadFile(small_test / "test.jsonl"),
            "test split independent of other splits");

  const fs::path data = work / "default";
  const std::string test = (data / "test.jsonl").string();
  const std::string preds = (work / "preds.jsonl").string();
  const std::string report_path = (work / "report.json").string();
  r.Require(RunCli({"synth", "--per-method", "0,0,10000", "--out-dir", data.string()}) == kExitOk,
            "synth default test split");
  r.Require(RunCli({"resolve", "--input", test, "--out", preds}) == kExitOk, "resolve");
  r.Require(RunCli({"score", "--preds", preds, "--gold", test, "--out", report_path}) == kExitOk,
            "score");
  if (!r.pass) return r;
  const Json report = Json::parse(ReadFile(report_path));
  const Json &per = report.at("entity_accuracy_per_method");
  const Json baseline = Json::parse(ReadFile(Source("baselines/resolver_baseline.json")));
  const Json &want = baseline.at("entity_accuracy_per_method");
  bool match = per.size() == want.size();
  for (const auto &[method, bucket] : want.items()) {
    match = match && per.contains(method) &&
            per[method].at("scored") == bucket.at("scored") &&
            per[method].at("correct") == bucket.at("correct") &&
            std::abs(per[method].at("value").get<double>() - bucket.at("value").get<double>()) <=
                kBaselineTolerance;
  }
  r.Require(match, "per-method table equals the tracked baseline");
  const double exact = per.at("EXACT").at("value").get<double>();
  const double multiple = per.at("MULTIPLE").at("value").get<double>();
  r.Require(multiple <= exact, "MULTIPLE <= EXACT");
  r.detail << "overall " << report.at("entity_accuracy_all").at("value").get<double>() << ";";
  for (const auto &[method, bucket] : per.items()) {
    r.detail << " " << method << "=" << bucket.at("value").get<double>();
  }
  r.detail << "; " << Seconds(start) << " s";
  return r;
}

int Main() {
  const fs::path work = fs::temp_directory_path() / "dsr_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"grammar capacity", GrammarCapacity},
      {"candidate bounds", CandidateBounds},
      {"resolver round trip", ResolverRoundTrip},
      {"augmentation identity", AugmentationIdentity},
      {"statistics shape", StatisticsShape},
      {"metric correctness", MetricCorrectness},
      {"determinism", [&] { return Determinism(work); }},
      {"baseline reporting", [&] { return BaselineReporting(work); }},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception &e) {
      r.pass = false;
      r.detail << "exception: " << e.what();
    }
    failed += !r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": "
              << r.detail.str() << std::endl;
  }
  fs::remove_all(work);
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace dsr

int main() { return dsr::Main(); }
