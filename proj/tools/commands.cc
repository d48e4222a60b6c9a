//
// Copyright 2026 The bioner-gen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "bioner/bias.h"
#include "bioner/dictionary.h"
#include "bioner/eval.h"
#include "bioner/experiments.h"
#include "bioner/formats.h"
#include "bioner/hash.h"
#include "bioner/partition.h"
#include "bioner/report.h"
#include "bioner/tagger.h"
#include "run_context.h"

namespace bioner::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Raised for a failed --check; carries exit code 3.
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string format = "pubtator";
  std::string tokenizer = "punct";
  std::string entity_type;
  std::string collapse_types;
  int threads = 1;
  bool lenient = false;
  std::string out;
  std::string check;
  std::string dataset;
};

void AddCommon(CLI::App* app, CommonOptions& o, bool corpus_flags = true) {
  if (corpus_flags) {
    app->add_option("--format", o.format, "pubtator, conll or json")
        ->check(CLI::IsMember({"pubtator", "conll", "json", "jsonl"}));
    app->add_option("--tokenizer", o.tokenizer, "punct or whitespace")
        ->check(CLI::IsMember({"punct", "whitespace"}));
    app->add_option("--entity-type", o.entity_type,
                    "keep only mentions of this type");
    app->add_option("--collapse-types", o.collapse_types,
                    "relabel every mention with this type");
    app->add_option("--dataset", o.dataset, "dataset name used in reports");
  }
  app->add_option("--threads", o.threads, "worker threads (results do not change)")
      ->check(CLI::PositiveNumber);
  app->add_flag("--lenient", o.lenient, "continue despite input error records");
  app->add_option("--out", o.out, "output directory")->required();
  app->add_option("--check", o.check, "golden JSON to compare against");
}

json CorpusConfig(const CommonOptions& o) {
  return {{"format", o.format},
          {"tokenizer", o.tokenizer},
          {"entity_type", o.entity_type},
          {"collapse_types", o.collapse_types},
          {"dataset", o.dataset}};
}

Corpus Load(const std::string& path, SplitRole role, const CommonOptions& o,
            RunContext& ctx) {
  LoadOptions lo;
  lo.role = role;
  lo.tokenizer = TokenizerModeFromString(o.tokenizer);
  lo.keep_type = o.entity_type;
  lo.collapse_type = o.collapse_types;
  if (!fs::is_regular_file(path)) throw Error("missing input file '" + path + "'");
  Corpus corpus = LoadCorpus(path, CorpusFormatFromString(o.format), lo);
  ctx.AddInput(path);
  for (const Issue& issue : corpus.issues) {
    std::cerr << path << ": " << issue.kind << " (doc " << issue.doc_id
              << ", line " << issue.line << "): " << issue.message << '\n';
  }
  if (!corpus.issues.empty() && !o.lenient) {
    throw Error(path + ": " + std::to_string(corpus.issues.size()) +
                " error record(s); rerun with --lenient to continue");
  }
  if (const auto problems = CheckInvariants(corpus); !problems.empty()) {
    throw Error(path + ": corpus invariant violated: " + problems.front());
  }
  return corpus;
}

void RunCheck(const CommonOptions& o, RunContext& ctx,
              const std::string& actual_json) {
  if (o.check.empty()) return;
  ctx.AddInput(o.check);
  const auto checks = CheckGolden(actual_json, ReadFile(o.check));
  const std::string text = FormatGoldenChecks(checks);
  ctx.WriteOutput("check.txt", text);
  std::cout << text;
  if (!std::all_of(checks.begin(), checks.end(),
                   [](const GoldenCheck& c) { return c.pass; })) {
    ctx.Finish();
    throw CheckFailed("golden check failed against '" + o.check + "'");
  }
}

std::string DatasetName(const CommonOptions& o, const std::string& path) {
  return o.dataset.empty() ? fs::path(path).stem().string() : o.dataset;
}

std::string PredictionsText(const std::vector<Prediction>& preds) {
  std::ostringstream out;
  WritePredictions(out, preds);
  return out.str();
}

std::string CorpusText(const Corpus& corpus) {
  std::ostringstream out;
  WriteJsonl(out, corpus);
  return out.str();
}

SplitReport ComputeSplits(const Corpus& train, const Corpus& eval,
                          const std::string& dataset, int threads) {
  SplitReport r = PartitionCorpus(eval, BuildTrainSets(train),
                                  DatasetKindOf(train, eval), threads);
  r.dataset = dataset;
  return r;
}

// ---- partition -------------------------------------------------------------

struct PartitionArgs {
  CommonOptions common;
  std::string train;
  std::string dev;
  std::string eval;
};

void Partition(const PartitionArgs& a, const std::vector<std::string>& args) {
  if (a.dev.empty() && a.eval.empty()) {
    throw CLI::ValidationError("partition", "give --dev and/or --eval");
  }
  RunContext ctx("partition", args, a.common.out);
  ctx.SetConfig(CorpusConfig(a.common));
  const Corpus train = Load(a.train, SplitRole::kTrain, a.common, ctx);
  const std::string name = DatasetName(a.common, a.train);

  std::vector<SplitReport> reports;
  json summary;
  summary["dataset"] = name;
  for (const auto& [path, role] : {std::pair{a.dev, SplitRole::kDev},
                                   std::pair{a.eval, SplitRole::kTest}}) {
    if (path.empty()) continue;
    const Corpus eval = Load(path, role, a.common, ctx);
    SplitReport r = ComputeSplits(train, eval, name, a.common.threads);
    const std::string role_name(ToString(role));
    ctx.WriteOutput(role_name + ".splits.json", SplitReportToJson(r));
    json part;
    part["total"] = r.total();
    for (Split s : kAllSplits) {
      part["counts"][std::string(ToString(s))] = r.count(s);
    }
    for (Split s : kAllSplits) {
      part["percent"][std::string(ToString(s))] =
          std::stod(FormatPercent(r.Percent(s)));
    }
    part["reasons"] = r.reason_counts;
    summary[role_name] = std::move(part);
    reports.push_back(std::move(r));
  }
  const std::string markdown = SplitReportMarkdown(reports);
  ctx.WriteOutput("splits.md", markdown);
  const std::string summary_text = summary.dump(2) + "\n";
  ctx.WriteOutput("summary.json", summary_text);
  std::cout << markdown;
  RunCheck(a.common, ctx, summary_text);
  ctx.Finish();
}

// ---- dict ------------------------------------------------------------------

struct DictArgs {
  CommonOptions common;
  std::string train;
  std::string eval;
  std::string role = "test";
  std::string synonyms;
};

std::string EvalSummary(const EvalReport& r) {
  std::ostringstream out;
  out << r.name << ": P " << FormatPercent(r.precision) << " R "
      << FormatPercent(r.recall) << " F1 " << FormatPercent(r.f1);
  if (r.per_split) {
    for (Split s : kAllSplits) {
      const auto pct = (*r.per_split)[static_cast<std::size_t>(s)].percent();
      out << ' ' << ToString(s) << ' '
          << (pct ? FormatPercent(*pct) : std::string("-"));
    }
  }
  out << '\n';
  return out.str();
}

void Dict(const DictArgs& a, const std::vector<std::string>& args) {
  RunContext ctx("dict", args, a.common.out);
  json config = CorpusConfig(a.common);
  config["role"] = a.role;
  config["synonyms"] = !a.synonyms.empty();
  ctx.SetConfig(config);
  const Corpus train = Load(a.train, SplitRole::kTrain, a.common, ctx);
  const Corpus eval = Load(a.eval, SplitRoleFromString(a.role), a.common, ctx);

  EntityDictionary dict(train.tokenizer);
  std::string name;
  if (a.synonyms.empty()) {
    dict = BuildDictTrain(train);
    name = "DICT_train";
  } else {
    ctx.AddInput(a.synonyms);
    dict = BuildDictSyn(train, LoadSynonyms(a.synonyms));
    name = "DICT_syn";
  }
  std::ostringstream dict_text;
  dict.Export(dict_text);
  ctx.WriteOutput("dictionary.tsv", dict_text.str());

  const auto preds = ExtractCorpus(dict, eval, a.common.threads);
  ctx.WriteOutput("predictions.jsonl", PredictionsText(preds));
  const SplitReport splits =
      ComputeSplits(train, eval, DatasetName(a.common, a.train), a.common.threads);
  ctx.WriteOutput("splits.json", SplitReportToJson(splits));
  EvalReport report = Evaluate(eval, preds, &splits);
  report.name = name;
  const std::string report_json = EvalReportToJson(report);
  ctx.WriteOutput("eval.json", report_json);
  ctx.WriteOutput("eval.md", ComparisonMarkdown({report}));
  std::cout << EvalSummary(report);
  RunCheck(a.common, ctx, report_json);
  ctx.Finish();
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
  CommonOptions common;
  std::string train;
  std::string dev;
  TaggerConfig tagger;
  std::optional<double> temperature;
};

void TrainCmd(TrainArgs a, const std::vector<std::string>& args) {
  RunContext ctx("train", args, a.common.out);
  a.tagger.temperature = a.temperature;
  a.tagger.threads = a.common.threads;
  json config = CorpusConfig(a.common);
  config["learning_rate"] = a.tagger.learning_rate;
  config["epochs"] = a.tagger.epochs;
  config["l2"] = a.tagger.l2;
  config["batch_size"] = a.tagger.batch_size;
  config["hash_bits"] = a.tagger.hash_bits;
  config["debias"] = a.tagger.debias;
  config["temperature"] =
      a.temperature ? json(*a.temperature) : json(nullptr);
  ctx.SetConfig(config);
  ctx.SetSeed(a.tagger.seed);

  const Corpus train = Load(a.train, SplitRole::kTrain, a.common, ctx);
  std::optional<BiasTable> table;
  if (a.tagger.debias) {
    table = BiasTable::Build(train, TagScheme(train.entity_types));
    std::ostringstream t;
    table->Write(t);
    ctx.WriteOutput("bias_table.jsonl", t.str());
  }
  TaggerModel model;
  try {
    model = Train(train, table ? &*table : nullptr, a.tagger);
  } catch (const TrainingDiverged& e) {
    std::ostringstream m;
    e.last_finite().Save(m);
    ctx.WriteOutput("model.last_finite.json", m.str());
    ctx.Finish();
    throw;
  }
  std::ostringstream m;
  model.Save(m);
  ctx.WriteOutput("model.json", m.str());

  if (!a.dev.empty()) {
    const Corpus dev = Load(a.dev, SplitRole::kDev, a.common, ctx);
    const auto preds = PredictCorpus(model, dev, a.common.threads);
    ctx.WriteOutput("dev.predictions.jsonl", PredictionsText(preds));
    const SplitReport splits = ComputeSplits(
        train, dev, DatasetName(a.common, a.train), a.common.threads);
    EvalReport report = Evaluate(dev, preds, &splits);
    report.name = a.tagger.debias ? "tagger+debias" : "tagger";
    const std::string report_json = EvalReportToJson(report);
    ctx.WriteOutput("dev.eval.json", report_json);
    std::cout << EvalSummary(report);
    RunCheck(a.common, ctx, report_json);
  }
  ctx.Finish();
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  CommonOptions common;
  std::string model;
  std::string predictions;
  std::string eval;
  std::string role = "test";
  std::string train;
  std::string splits;
  std::string target_surface;
  bool relaxed_substring = false;
  std::vector<std::string> subsets;
  std::string name;
};

void EvalCmd(const EvalArgs& a, const std::vector<std::string>& args) {
  if (a.model.empty() == a.predictions.empty()) {
    throw CLI::ValidationError("eval", "give exactly one of --model or --predictions");
  }
  if (a.train.empty() && a.splits.empty() && !a.subsets.empty()) {
    // Subsets without splits are allowed; split-restricted ones are not.
    for (const std::string& s : a.subsets) {
      if (s.find('/') != std::string::npos) {
        throw CLI::ValidationError("eval", "split-restricted subsets need --train or --splits");
      }
    }
  }
  RunContext ctx("eval", args, a.common.out);
  json config = CorpusConfig(a.common);
  config["role"] = a.role;
  config["target_surface"] = a.target_surface;
  config["relaxed_substring"] = a.relaxed_substring;
  config["subsets"] = a.subsets;
  config["name"] = a.name;
  ctx.SetConfig(config);
  const Corpus eval = Load(a.eval, SplitRoleFromString(a.role), a.common, ctx);

  std::vector<Prediction> preds;
  std::string name = a.name;
  if (!a.model.empty()) {
    ctx.AddInput(a.model);
    std::ifstream in(a.model);
    if (!in) throw Error("cannot open model '" + a.model + "'");
    const TaggerModel model = TaggerModel::Load(in);
    preds = PredictCorpus(model, eval, a.common.threads);
    ctx.WriteOutput("predictions.jsonl", PredictionsText(preds));
    if (name.empty()) name = model.config().debias ? "tagger+debias" : "tagger";
  } else {
    ctx.AddInput(a.predictions);
    std::ifstream in(a.predictions);
    if (!in) throw Error("cannot open predictions '" + a.predictions + "'");
    preds = ReadPredictions(in);
    if (name.empty()) name = fs::path(a.predictions).stem().string();
  }

  std::optional<SplitReport> splits;
  if (!a.splits.empty()) {
    ctx.AddInput(a.splits);
    splits = SplitReportFromJson(ReadFile(a.splits));
  } else if (!a.train.empty()) {
    const Corpus train = Load(a.train, SplitRole::kTrain, a.common, ctx);
    splits = ComputeSplits(train, eval, DatasetName(a.common, a.train),
                           a.common.threads);
  }
  const SplitReport* split_ptr = splits ? &*splits : nullptr;
  EvalReport report = Evaluate(eval, preds, split_ptr);
  report.name = name;
  if (!a.target_surface.empty()) {
    report.relaxed = RelaxedResult{
        a.target_surface,
        RelaxedRecall(eval, preds, a.target_surface,
                      a.relaxed_substring ? RelaxedMode::kSubstring
                                          : RelaxedMode::kRangeContainment)};
  }
  for (const std::string& spec : a.subsets) {
    // "CON/abbreviation" restricts the subset to one split.
    std::optional<Split> only;
    std::string predicate = spec;
    if (const auto slash = spec.find('/');
        slash != std::string::npos && slash == 3) {
      only = SplitFromString(spec.substr(0, 3));
      predicate = spec.substr(4);
    }
    if (predicate.starts_with("surfaces:")) {
      ctx.AddInput(predicate.substr(9));
    }
    report.subsets[spec] = SubsetRecall(eval, preds, MakeSubsetPredicate(predicate),
                                        split_ptr, only);
  }
  const std::string report_json = EvalReportToJson(report);
  ctx.WriteOutput("eval.json", report_json);
  ctx.WriteOutput("eval.md", ComparisonMarkdown({report}));
  std::cout << EvalSummary(report);
  RunCheck(a.common, ctx, report_json);
  ctx.Finish();
}

// ---- perturb ---------------------------------------------------------------

struct PerturbArgs {
  CommonOptions common;
  std::string corpus;
  std::string manifest;
  std::string role = "train";
};

void Perturb(const PerturbArgs& a, const std::vector<std::string>& args) {
  RunContext ctx("perturb", args, a.common.out);
  ctx.AddInput(a.manifest);
  const auto steps = PerturbationsFromJson(ReadFile(a.manifest));
  json config = CorpusConfig(a.common);
  config["role"] = a.role;
  config["perturbations"] = json::parse(PerturbationsToJson(steps));
  ctx.SetConfig(config);
  if (!steps.empty()) ctx.SetSeed(steps.front().seed);
  const Corpus corpus = Load(a.corpus, SplitRoleFromString(a.role), a.common, ctx);

  std::vector<std::map<std::string, std::string>> log;
  const Corpus out = ApplyPerturbations(corpus, steps, &log);
  if (const auto problems = CheckInvariants(out); !problems.empty()) {
    throw Error("perturbed corpus invariant violated: " + problems.front());
  }
  ctx.WriteOutput("corpus.jsonl", CorpusText(out));
  json replacements = json::array();
  for (const auto& step : log) replacements.push_back(step);
  ctx.WriteOutput("replacements.json", replacements.dump(2) + "\n");
  std::cout << "perturbed " << out.documents.size() << " documents, "
            << out.MentionCount() << " mentions\n";
  ctx.Finish();
}

// ---- report ----------------------------------------------------------------

struct ReportArgs {
  CommonOptions common;
  std::vector<std::string> runs;
};

void ReportCmd(const ReportArgs& a, const std::vector<std::string>& args) {
  RunContext ctx("report", args, a.common.out);
  for (const std::string& dir : a.runs) {
    const fs::path eval = fs::path(dir) / "eval.json";
    if (fs::is_regular_file(eval)) ctx.AddInput(eval.string());
  }
  const MergedReport merged = MergeRunDirectories(a.runs);
  ctx.WriteOutput("report.md", merged.markdown);
  ctx.WriteOutput("report.json", merged.json);
  std::cout << merged.markdown;
  RunCheck(a.common, ctx, merged.json);
  ctx.Finish();
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
  CommonOptions common;
  std::string config;
  std::uint64_t seed = 1;
  std::optional<std::size_t> planted;
};

void Synth(const SynthArgs& a, const std::vector<std::string>& args) {
  RunContext ctx("synth", args, a.common.out);
  BiasedCorpusConfig config;
  if (!a.config.empty()) {
    ctx.AddInput(a.config);
    config = BiasedCorpusConfigFromJson(ReadFile(a.config));
  }
  if (a.planted) config.planted_words = *a.planted;
  ctx.SetConfig(json::parse(BiasedCorpusConfigToJson(config)));
  ctx.SetSeed(a.seed);
  const BiasedCorpus corpus = MakeBiasedCorpus(config, a.seed);
  ctx.WriteOutput("train.jsonl", CorpusText(corpus.train));
  ctx.WriteOutput("dev.jsonl", CorpusText(corpus.dev));
  ctx.WriteOutput("test.jsonl", CorpusText(corpus.test));
  std::string planted;
  for (const std::string& w : corpus.planted_words) planted += w + "\n";
  ctx.WriteOutput("planted.txt", planted);
  std::cout << "wrote " << corpus.train.MentionCount() << "/"
            << corpus.dev.MentionCount() << "/" << corpus.test.MentionCount()
            << " train/dev/test mentions\n";
  ctx.Finish();
}

// ---- config merging --------------------------------------------------------

bool HasFlag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.starts_with(flag + "=");
  });
}

// Expands `--config file.json` into flags; flags already on the command line
// win.
std::vector<std::string> MergeConfig(std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  std::string path;
  if (it != args.end()) {
    if (it + 1 == args.end()) throw CLI::ValidationError("--config", "missing path");
    path = *(it + 1);
    args.erase(it, it + 2);
  } else {
    auto eq = std::find_if(args.begin(), args.end(), [](const std::string& a) {
      return a.starts_with("--config=");
    });
    if (eq == args.end()) return args;
    path = eq->substr(9);
    args.erase(eq);
  }
  json config;
  try {
    config = json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    throw Error("invalid config file '" + path + "': " + e.what());
  }
  if (!config.is_object()) throw Error("config file must hold a JSON object");
  for (const auto& [key, value] : config.items()) {
    const std::string flag = "--" + key;
    if (HasFlag(args, flag)) continue;
    auto scalar = [](const json& v) {
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      for (const json& v : value) {
        args.push_back(flag);
        args.push_back(scalar(v));
      }
    } else if (!value.is_null()) {
      args.push_back(flag);
      args.push_back(scalar(value));
    }
  }
  return args;
}

int Rerun(const std::string& manifest_path, const std::string& out,
          std::optional<int> threads) {
  json m;
  try {
    m = json::parse(ReadFile(manifest_path));
  } catch (const json::exception& e) {
    throw Error("invalid manifest '" + manifest_path + "': " + e.what());
  }
  if (m.value("version", "") != BIONER_VERSION) {
    std::cerr << "note: manifest written by version " << m.value("version", "?")
              << ", running " << BIONER_VERSION << '\n';
  }
  for (const json& input : m.at("inputs")) {
    const std::string path = input.at("path").get<std::string>();
    const std::string digest = HexDigest(Fnv1a64(ReadFile(path)));
    if (digest != input.at("fnv1a64").get<std::string>()) {
      throw Error("input '" + path + "' changed since the manifest was written");
    }
  }
  std::vector<std::string> args = m.at("args").get<std::vector<std::string>>();
  auto set_flag = [&](const std::string& flag, const std::string& value) {
    auto it = std::find(args.begin(), args.end(), flag);
    if (it != args.end() && it + 1 != args.end()) {
      *(it + 1) = value;
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  };
  set_flag("--out", out);
  if (threads) set_flag("--threads", std::to_string(*threads));
  const int code = RunCli(args);
  if (code != kExitOk) return code;

  const json again = json::parse(ReadFile(fs::path(out) / "manifest.json"));
  if (again.at("config_hash") != m.at("config_hash")) {
    std::cerr << "config hash differs from the manifest\n";
    return kExitCheck;
  }
  bool same = true;
  for (const auto& [name, digest] : m.at("outputs").items()) {
    const auto& now = again.at("outputs");
    if (!now.contains(name) || now[name] != digest) {
      std::cerr << "output " << name << " differs from the manifest\n";
      same = false;
    }
  }
  if (same) std::cout << "rerun reproduced " << m.at("outputs").size() << " outputs\n";
  return same ? kExitOk : kExitCheck;
}

}  // namespace

int RunCli(std::vector<std::string> args) {
  try {
    args = MergeConfig(std::move(args));
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }

  CLI::App app{"Biomedical NER benchmark analysis toolkit", "bioner"};
  app.set_version_flag("--version", BIONER_VERSION);
  app.require_subcommand(1);

  PartitionArgs part;
  auto* p = app.add_subcommand("partition", "split evaluation mentions into MEM/SYN/CON");
  p->add_option("--train", part.train, "training corpus")->required();
  p->add_option("--dev", part.dev, "development corpus");
  p->add_option("--eval", part.eval, "test corpus");
  AddCommon(p, part.common);

  DictArgs dict;
  auto* d = app.add_subcommand("dict", "dictionary-matching baseline");
  d->add_option("--train", dict.train, "training corpus")->required();
  d->add_option("--eval", dict.eval, "evaluation corpus")->required();
  d->add_option("--role", dict.role, "role of the evaluation corpus")
      ->check(CLI::IsMember({"dev", "test"}));
  d->add_option("--synonyms", dict.synonyms, "JSON lines {cui, surfaces}");
  AddCommon(d, dict.common);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "train the sparse tagger");
  t->add_option("--train", train.train, "training corpus")->required();
  t->add_option("--dev", train.dev, "development corpus to score");
  t->add_flag("--debias", train.tagger.debias, "train with the bias product");
  t->add_option("--temperature", train.temperature, "bias smoothing temperature")
      ->check(CLI::PositiveNumber);
  t->add_option("--seed", train.tagger.seed, "shuffle seed");
  t->add_option("--epochs", train.tagger.epochs)->check(CLI::NonNegativeNumber);
  t->add_option("--lr", train.tagger.learning_rate)->check(CLI::PositiveNumber);
  t->add_option("--l2", train.tagger.l2)->check(CLI::NonNegativeNumber);
  t->add_option("--batch-size", train.tagger.batch_size)->check(CLI::PositiveNumber);
  t->add_option("--hash-bits", train.tagger.hash_bits)->check(CLI::Range(8, 26));
  AddCommon(t, train.common);

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "score predictions or a model");
  e->add_option("--model", eval.model, "model checkpoint");
  e->add_option("--predictions", eval.predictions, "JSON lines predictions");
  e->add_option("--eval", eval.eval, "gold corpus")->required();
  e->add_option("--role", eval.role, "role of the gold corpus")
      ->check(CLI::IsMember({"dev", "test"}));
  e->add_option("--train", eval.train, "training corpus for split assignment");
  e->add_option("--splits", eval.splits, "split report from `partition`");
  e->add_option("--target-surface", eval.target_surface, "relaxed recall target");
  e->add_flag("--relaxed-substring", eval.relaxed_substring,
              "count a hit when the predicted text contains the target");
  e->add_option("--subset", eval.subsets,
                "abbreviation, name_regularity or surfaces:<file>, optionally "
                "prefixed with MEM/, SYN/ or CON/");
  e->add_option("--name", eval.name, "column name in reports");
  AddCommon(e, eval.common);

  PerturbArgs perturb;
  auto* pt = app.add_subcommand("perturb", "apply a perturbation manifest");
  pt->add_option("--corpus", perturb.corpus, "input corpus")->required();
  pt->add_option("--manifest", perturb.manifest, "perturbation JSON")->required();
  pt->add_option("--role", perturb.role)->check(CLI::IsMember({"train", "dev", "test"}));
  AddCommon(pt, perturb.common);

  ReportArgs report;
  auto* r = app.add_subcommand("report", "merge eval reports from run directories");
  r->add_option("runs", report.runs, "run directories")->required();
  AddCommon(r, report.common, false);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "write the synthetic biased corpus");
  s->add_option("--generator-config", synth.config, "generator config JSON");
  s->add_option("--seed", synth.seed);
  s->add_option("--planted", synth.planted, "number of planted bias words");
  AddCommon(s, synth.common, false);

  std::string rerun_manifest;
  std::string rerun_out;
  std::optional<int> rerun_threads;
  auto* rr = app.add_subcommand("rerun", "re-execute a run from its manifest");
  rr->add_option("manifest", rerun_manifest, "manifest.json")->required();
  rr->add_option("--out", rerun_out, "output directory")->required();
  rr->add_option("--threads", rerun_threads)->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kExitUsage;
  }

  try {
    if (*p) Partition(part, args);
    if (*d) Dict(dict, args);
    if (*t) TrainCmd(train, args);
    if (*e) EvalCmd(eval, args);
    if (*pt) Perturb(perturb, args);
    if (*r) ReportCmd(report, args);
    if (*s) Synth(synth, args);
    if (*rr) return Rerun(rerun_manifest, rerun_out, rerun_threads);
  } catch (const CLI::ValidationError& ex) {
    std::cerr << "usage error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const CheckFailed& ex) {
    std::cerr << ex.what() << '\n';
    return kExitCheck;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace bioner::cli
