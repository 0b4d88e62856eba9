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

#include "dsr/cli.h"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dsr/augmenter.h"
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

const std::string kSourceDir = DSR_SOURCE_DIR;

std::string DefaultGrammar() { return kSourceDir + "/grammars/disambiguation.cfg"; }
std::string DefaultDatabase() { return kSourceDir + "/data/db/dsr_db.json"; }

struct Options {
  std::string grammar = DefaultGrammar();
  std::string db;
  std::vector<std::string> starts;
  std::string per_method = "100000,10000,10000";
  std::vector<std::string> methods;
  std::vector<std::string> domains;
  uint64_t seed = 0;
  size_t threads = 1;
  std::string input;
  std::string format = "native";
  std::string allow_list;
  bool mix_methods = false;
  std::string out_dir;
  std::string out;
  std::string records;
  double factor = 1.0;
  double max_fuzzy = kDefaultMaxFuzzy;
  std::string kind = "auto";
  std::string preds;
  std::string gold;
  std::string gold_format = "auto";
  std::string subset = "all";
};

// Refuses to write over any input file.
void GuardOutput(const fs::path &output, const std::vector<std::string> &inputs) {
  for (const std::string &in : inputs) {
    if (in.empty()) continue;
    std::error_code ec;
    if (fs::exists(output, ec) && fs::equivalent(output, in, ec)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "output " + output.string() + " would overwrite input " + in);
    }
  }
}

void WriteOutput(const fs::path &path, std::string_view data,
                 const std::vector<std::string> &inputs) {
  GuardOutput(path, inputs);
  WriteFile(path, data);
}

std::vector<std::string> SplitComma(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) out.push_back(part);
  return out;
}

size_t ParseCount(const std::string &text) {
  size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text[0] == '-') {
    throw Error(ErrorCode::kInvalidArgument, "bad count '" + text + "'");
  }
  return static_cast<size_t>(v);
}

// "N" means N/N÷10/N÷10; "N,D,T" sets each split.
void ParsePerMethod(const std::string &text, DatasetConfig &config) {
  std::vector<std::string> parts = SplitComma(text);
  if (parts.size() == 1) {
    config.train = ParseCount(parts[0]);
    config.dev = config.test = config.train / 10;
  } else if (parts.size() == 3) {
    config.train = ParseCount(parts[0]);
    config.dev = ParseCount(parts[1]);
    config.test = ParseCount(parts[2]);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--per-method takes N or N,DEV,TEST");
  }
}

Database OpenDatabase(const Options &o) { return LoadDatabase(o.db.empty() ? DefaultDatabase() : o.db); }

int GrammarCount(const Options &o, std::ostream &out) {
  Grammar g = LoadGrammarFile(o.grammar);
  if (o.starts.size() == 1) {
    out << CountLanguage(g, o.starts[0]) << "\n";
    return kExitOk;
  }
  std::vector<std::string> starts = o.starts.empty() ? g.start_symbols() : o.starts;
  for (const std::string &s : starts) out << s << "\t" << CountLanguage(g, s) << "\n";
  return kExitOk;
}

int Synth(const Options &o) {
  if (o.out_dir.empty()) throw Error(ErrorCode::kInvalidArgument, "--out-dir is required");
  Grammar g = LoadGrammarFile(o.grammar);
  Database db = OpenDatabase(o);
  DatasetConfig config;
  ParsePerMethod(o.per_method, config);
  if (!o.methods.empty()) {
    config.methods.clear();
    for (const std::string &m : o.methods) config.methods.push_back(ParseMethod(m));
  }
  config.domains = o.domains;
  config.seed = o.seed;
  config.threads = o.threads;
  Dataset data = SynthesizeDataset(db, g, config);
  fs::create_directories(o.out_dir);
  const std::vector<std::string> inputs = {o.grammar, o.db};
  const fs::path dir = o.out_dir;
  WriteOutput(dir / "train.jsonl", SerializeExamples(data.train), inputs);
  WriteOutput(dir / "dev.jsonl", SerializeExamples(data.dev), inputs);
  WriteOutput(dir / "test.jsonl", SerializeExamples(data.test), inputs);
  return kExitOk;
}

Corpus OpenCorpus(const Options &o, std::optional<Database> *db) {
  const SourceFormat format = ParseSourceFormat(o.format);
  Corpus corpus = LoadCorpus(o.input, format);
  if (db != nullptr) {
    if (!o.db.empty() || format == SourceFormat::kNative) {
      *db = OpenDatabase(o);
    } else if (format == SourceFormat::kSgd) {
      *db = BuildDatabaseFromSearchResults(corpus);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "--db is required for multiwoz22 input");
    }
    if (format == SourceFormat::kMultiwoz22) AttachSearchResults(corpus, **db);
  }
  return corpus;
}

int Augment(const Options &o, std::ostream &err) {
  if (o.input.empty() || o.out_dir.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--input and --out-dir are required");
  }
  std::optional<Database> db;
  Corpus corpus = OpenCorpus(o, &db);
  Grammar g = LoadGrammarFile(o.grammar);
  AugmentOptions options;
  options.seed = o.seed;
  options.mix_methods = o.mix_methods;
  options.threads = o.threads;
  if (!o.allow_list.empty()) options.allowed = ParseAllowList(Json::parse(ReadFile(o.allow_list)));
  AugmentedCorpus result = AugmentCorpus(corpus, *db, g, options);
  fs::create_directories(o.out_dir);
  const std::vector<std::string> inputs = {o.input, o.grammar, o.db, o.allow_list};
  const fs::path dir = o.out_dir;
  WriteOutput(dir / "corpus.jsonl", SerializeNative(result.corpus), inputs);
  WriteOutput(dir / "records.jsonl", SerializeRecords(result.records), inputs);
  WriteOutput(dir / "stats.json", StatsToJson(result.stats).dump(2) + "\n", inputs);
  err << "modified " << result.stats.turns_modified << " of " << result.stats.turns_total
      << " turns in " << result.stats.dialogs_modified << " of " << result.stats.dialogs_total
      << " dialogs\n";
  return kExitOk;
}

int Stats(const Options &o, std::ostream &out) {
  if (o.input.empty()) throw Error(ErrorCode::kInvalidArgument, "--input is required");
  Corpus corpus = OpenCorpus(o, nullptr);
  const std::string report = MultiResultReportToJson(ComputeMultiResultReport(corpus)).dump(2) + "\n";
  if (o.out.empty()) {
    out << report;
  } else {
    WriteOutput(o.out, report, {o.input});
  }
  return kExitOk;
}

int UpsampleCommand(const Options &o) {
  if (o.input.empty() || o.records.empty() || o.out.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--input, --records and --out are required");
  }
  Corpus corpus = ParseNative(ReadFile(o.input));
  std::vector<AugmentationRecord> records = ParseRecords(ReadFile(o.records));
  WriteOutput(o.out, SerializeNative(Upsample(corpus, records, o.factor)), {o.input, o.records});
  return kExitOk;
}

std::string FirstLine(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  }
  return {};
}

int ResolveCommand(const Options &o) {
  if (o.input.empty() || o.out.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--input and --out are required");
  }
  const std::string text = ReadFile(o.input);
  std::string kind = o.kind;
  if (kind == "auto") {
    const std::string first = FirstLine(text);
    kind = "examples";
    if (!first.empty()) {
      Json j = Json::parse(first, nullptr, false);
      if (j.is_object() && j.contains("new_system")) kind = "records";
    }
  }
  std::vector<PredictionRow> rows;
  if (kind == "examples") {
    rows = ResolveExamples(ParseExamples(text), o.max_fuzzy, o.threads);
  } else if (kind == "records") {
    rows = ResolveRecords(ParseRecords(text), o.max_fuzzy);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--kind must be auto, examples or records");
  }
  WriteOutput(o.out, SerializePredictions(rows), {o.input});
  return kExitOk;
}

int ScoreCommand(const Options &o, std::ostream &out) {
  if (o.preds.empty() || o.gold.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--preds and --gold are required");
  }
  const std::string gold_text = ReadFile(o.gold);
  std::string format = o.gold_format;
  if (format == "auto") {
    Json j = Json::parse(FirstLine(gold_text), nullptr, false);
    format = j.is_object() && j.contains("candidates") ? "synth" : "native";
  }
  Corpus gold;
  if (format == "synth") {
    gold = ExamplesToCorpus(ParseExamples(gold_text));
  } else if (format == "native") {
    gold = ParseNative(gold_text);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--gold-format must be auto, native or synth");
  }
  std::vector<AugmentationRecord> records;
  if (!o.records.empty()) records = ParseRecords(ReadFile(o.records));
  std::optional<Database> db;
  if (!o.db.empty()) db = LoadDatabase(o.db);
  Subset subset = Subset::kAll;
  if (o.subset == "augmented") {
    subset = Subset::kAugmentedOnly;
  } else if (o.subset != "all") {
    throw Error(ErrorCode::kInvalidArgument, "--subset must be all or augmented");
  }
  ScoreReport report = Score(ParsePredictions(ReadFile(o.preds)), gold, records,
                             db ? &*db : nullptr, subset);
  const std::string text = ScoreReportToJson(report).dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    WriteOutput(o.out, text, {o.preds, o.gold, o.records, o.db});
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app{"Synthesize, inject and score database-search-result disambiguation turns."};
  app.name("dsr");
  app.set_config("--config", "", "TOML/INI file whose keys mirror the flags");
  app.require_subcommand(1);

  auto add_seed = [&](CLI::App *c) {
    c->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    c->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  CLI::App *count = app.add_subcommand("grammar-count", "Count the strings a grammar generates");
  count->add_option("grammar", o.grammar, "Grammar file")->capture_default_str();
  count->add_option("--start", o.starts, "Start symbol (repeatable; default all)");

  CLI::App *synth = app.add_subcommand("synth", "Synthesize single-turn examples");
  synth->add_option("--grammar", o.grammar, "Grammar file")->capture_default_str();
  synth->add_option("--db", o.db, "Entity database JSON");
  synth->add_option("--per-method", o.per_method, "N or N,DEV,TEST per method")
      ->capture_default_str();
  synth->add_option("--methods", o.methods, "Addressing methods (default all)")->delimiter(',');
  synth->add_option("--domains", o.domains, "Domains to cycle (default all)")->delimiter(',');
  synth->add_option("--out-dir", o.out_dir, "Directory for train/dev/test.jsonl");
  add_seed(synth);

  CLI::App *augment = app.add_subcommand("augment", "Inject disambiguation turns into a corpus");
  augment->add_option("--input", o.input, "Corpus file or directory");
  augment->add_option("--format", o.format, "native, sgd or multiwoz22")
      ->check(CLI::IsMember({"native", "sgd", "multiwoz22"}))
      ->capture_default_str();
  augment->add_option("--db", o.db, "Entity database JSON");
  augment->add_option("--grammar", o.grammar, "Grammar file")->capture_default_str();
  augment->add_option("--allow-list", o.allow_list, "JSON list of allowed domains");
  augment->add_flag("--mix-methods", o.mix_methods, "Vary the addressing of the user prefix");
  augment->add_option("--out-dir", o.out_dir, "Directory for corpus/records/stats");
  add_seed(augment);

  CLI::App *stats = app.add_subcommand("stats", "Report dialogs with multi-result turns");
  stats->add_option("--input", o.input, "Corpus file or directory");
  stats->add_option("--format", o.format, "native, sgd or multiwoz22")
      ->check(CLI::IsMember({"native", "sgd", "multiwoz22"}))
      ->capture_default_str();
  stats->add_option("--out", o.out, "Report JSON (default stdout)");

  CLI::App *upsample = app.add_subcommand("upsample", "Duplicate dialogs with augmented turns");
  upsample->add_option("--input", o.input, "Augmented native corpus");
  upsample->add_option("--records", o.records, "Augmentation records");
  upsample->add_option("--factor", o.factor, "Duplicates as a multiple of the corpus size")
      ->capture_default_str();
  upsample->add_option("--out", o.out, "Output corpus");

  CLI::App *resolve = app.add_subcommand("resolve", "Run the rule-based resolver");
  resolve->add_option("--input", o.input, "Examples or records JSONL");
  resolve->add_option("--kind", o.kind, "auto, examples or records")
      ->check(CLI::IsMember({"auto", "examples", "records"}))
      ->capture_default_str();
  resolve->add_option("--max-fuzzy", o.max_fuzzy, "Fuzzy match threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  resolve->add_option("--out", o.out, "Prediction JSONL");
  resolve->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);

  CLI::App *score = app.add_subcommand("score", "Score predictions against gold");
  score->add_option("--preds", o.preds, "Prediction JSONL");
  score->add_option("--gold", o.gold, "Gold corpus or synthesized examples");
  score->add_option("--gold-format", o.gold_format, "auto, native or synth")
      ->check(CLI::IsMember({"auto", "native", "synth"}))
      ->capture_default_str();
  score->add_option("--records", o.records, "Augmentation records");
  score->add_option("--db", o.db, "Database naming the entity slots");
  score->add_option("--subset", o.subset, "all or augmented")
      ->check(CLI::IsMember({"all", "augmented"}))
      ->capture_default_str();
  score->add_option("--out", o.out, "Report JSON (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << e.what() << "\n" << app.help();
    return kExitInvalid;
  }

  try {
    if (count->parsed()) return GrammarCount(o, out);
    if (synth->parsed()) return Synth(o);
    if (augment->parsed()) return Augment(o, err);
    if (stats->parsed()) return Stats(o, out);
    if (upsample->parsed()) return UpsampleCommand(o);
    if (resolve->parsed()) return ResolveCommand(o);
    if (score->parsed()) return ScoreCommand(o, out);
  } catch (const Error &e) {
    err << "dsr: " << e.what() << "\n";
    return e.code() == ErrorCode::kIoError ? kExitIo : kExitInvalid;
  } catch (const fs::filesystem_error &e) {
    err << "dsr: " << e.what() << "\n";
    return kExitIo;
  } catch (const Json::exception &e) {
    err << "dsr: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace dsr
