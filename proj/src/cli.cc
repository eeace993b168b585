// Copyright 2026 The numprobe Authors
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

#include "numprobe/cli.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "numprobe/dataset.h"
#include "numprobe/embedding_io.h"
#include "numprobe/errors.h"
#include "numprobe/number_grammar.h"
#include "numprobe/probe.h"
#include "numprobe/templates.h"
#include "numprobe/ungrammatical_synthesis.h"

namespace numprobe {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kEnvPrefix = "NUMPROBE_";

struct GenDataArgs {
  std::string lang, task, variant, out_dir, templates;
  std::uint64_t seed = 1;
  std::size_t train_size = 30'000, val_size = 10'000, test_size = 10'000;
  std::int64_t min_value = 0, max_value = 999;
  bool allow_repeats = false;
};

struct CheckArgs {
  std::string lang, input;
  bool lexicon = false;
};

struct SynthArgs {
  std::string lang;
  std::size_t count = 10;
  std::uint64_t seed = 1;
  std::int64_t min_value = 0, max_value = 999;
  std::size_t max_length = 0;
};

struct ManifestArgs {
  std::string lang, task, variant, data_dir, split, out, templates;
};

struct TrainArgs {
  std::string embeddings, val_embeddings, test_embeddings, config, model_out,
      metrics_out;
  std::string lang, task, variant, model;
  std::optional<std::uint64_t> seed;
};

struct EvalArgs {
  std::string embeddings, model_in, metrics_out;
  std::string lang, task, variant, model;
};

struct ReportArgs {
  std::string metrics_dir;
};

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

// Binds NUMPROBE_<LONG_NAME> to every long option of every subcommand.
void BindEnvironment(CLI::App& app) {
  for (CLI::App* sub : app.get_subcommands({})) {
    for (CLI::Option* opt : sub->get_options()) {
      const std::string& name = opt->get_single_name();
      if (opt->get_lnames().empty() || name == "help") continue;
      std::string env = kEnvPrefix;
      for (char c : opt->get_lnames().front()) {
        env += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      }
      opt->envname(env);
    }
  }
}

TemplateSet TemplatesFrom(const std::string& path) {
  return path.empty() ? DefaultTemplates() : LoadTemplates(path);
}

TaskVariant ParseTaskVariant(const std::string& task, const std::string& variant) {
  return TaskVariant{ParseTask(task), ParseVariant(variant)};
}

std::string FormatRatio(std::size_t part, std::size_t whole) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << (whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole));
  return os.str();
}

int RunGenData(const GenDataArgs& a, std::ostream& out) {
  const Language lang = ParseLanguage(a.lang);
  const TaskVariant tv = ParseTaskVariant(a.task, a.variant);
  SplitSpec spec;
  spec.train_size = a.train_size;
  spec.val_size = a.val_size;
  spec.test_size = a.test_size;
  spec.seed = a.seed;
  spec.min_value = a.min_value;
  spec.max_value = a.max_value;
  spec.allow_grammatical_repeats = a.allow_repeats;
  const TemplateSet templates = TemplatesFrom(a.templates);
  const DatasetBundle bundle = BuildDataset(lang, tv, spec, templates);

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw FormatError("cannot create " + a.out_dir + ": " + ec.message());
  const std::vector<std::string> paths = WriteDataset(bundle, a.out_dir);
  for (std::size_t s = 0; s < kAllSplits.size(); ++s) {
    const auto& rows = bundle.split(kAllSplits[s]);
    const auto ones = static_cast<std::size_t>(std::count_if(
        rows.begin(), rows.end(), [](const LabeledExample& e) { return e.label == 1; }));
    out << SplitName(kAllSplits[s]) << '\t' << paths[s] << "\trows=" << rows.size()
        << "\tlabel0=" << FormatRatio(rows.size() - ones, rows.size())
        << "\tlabel1=" << FormatRatio(ones, rows.size()) << '\n';
  }
  return kExitOk;
}

std::optional<std::int64_t> AsInteger(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return std::nullopt;
  }
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return kMaxValue + 1;
  return v;
}

int RunCheck(const CheckArgs& a, std::ostream& out) {
  const Language lang = ParseLanguage(a.lang);
  if (a.lexicon) {
    out << GetLanguageSpec(lang).DumpLexicon();
    if (a.input.empty()) return kExitOk;
  }
  if (a.input.empty()) throw UsageError("check needs a word or a value");
  if (const auto v = AsInteger(a.input)) {
    if (*v > kMaxValue) {
      out << "out-of-range\n";
    } else {
      out << ToWords(*v, lang) << '\n';
    }
    return kExitOk;
  }
  if (const auto v = TryParseWords(a.input, lang)) {
    out << "grammatical " << *v << '\n';
  } else {
    out << "ungrammatical\n";
  }
  return kExitOk;
}

int RunSynth(const SynthArgs& a, std::ostream& out) {
  SynthConfig cfg;
  cfg.language = ParseLanguage(a.lang);
  cfg.min_value = a.min_value;
  cfg.max_value = a.max_value;
  if (a.max_length > 0) cfg.max_length = a.max_length;
  cfg.seed = a.seed;
  SynthesisStream stream(cfg);
  for (std::size_t i = 0; i < a.count; ++i) out << stream.Next() << '\n';
  return kExitOk;
}

int RunManifest(const ManifestArgs& a, std::ostream& out) {
  const Language lang = ParseLanguage(a.lang);
  const TaskVariant tv = ParseTaskVariant(a.task, a.variant);
  const TemplateSet templates = TemplatesFrom(a.templates);
  if (!a.split.empty() && a.split != "train" && a.split != "val" && a.split != "test") {
    throw UsageError("unknown split '" + a.split + "'");
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary);
    if (!file) throw FormatError("cannot write " + a.out);
    sink = &file;
  }
  std::size_t rows = 0;
  for (Split split : kAllSplits) {
    if (!a.split.empty() && a.split != SplitName(split)) continue;
    const std::string path = (fs::path(a.data_dir) / DatasetFileName(lang, tv, split)).string();
    const auto examples = ParseSplit(ReadFileBytes(path), lang, tv, templates);
    for (const LabeledExample& ex : examples) {
      Json row;
      row["id"] = ex.id;
      row["split"] = SplitName(split);
      row["lang"] = LanguageCode(lang);
      row["task"] = TaskName(tv.task);
      row["variant"] = VariantName(tv.variant);
      row["label"] = ex.label;
      row["x0"] = ex.x0;
      row["x1"] = ex.x1 ? Json(*ex.x1) : Json(nullptr);
      row["template_id"] = ex.template_id ? Json(*ex.template_id) : Json(nullptr);
      *sink << row.dump() << '\n';
      ++rows;
    }
  }
  if (file.is_open()) {
    file.flush();
    if (!file) throw FormatError("failed writing " + a.out);
    out << "wrote " << rows << " rows to " << a.out << '\n';
  }
  return kExitOk;
}

ProbeConfig LoadProbeConfig(const std::string& path) {
  ProbeConfig cfg;
  if (path.empty()) return cfg;
  Json j;
  try {
    j = Json::parse(ReadFileBytes(path));
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  if (!j.is_object()) throw FormatError(path + ": config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "hidden_dim") cfg.hidden_dim = value.get<std::size_t>();
      else if (key == "activation") cfg.activation = ParseActivation(value.get<std::string>());
      else if (key == "epochs") cfg.epochs = value.get<int>();
      else if (key == "learning_rate") cfg.learning_rate = value.get<double>();
      else if (key == "batch_size") cfg.batch_size = value.get<std::size_t>();
      else if (key == "beta1") cfg.beta1 = value.get<double>();
      else if (key == "beta2") cfg.beta2 = value.get<double>();
      else if (key == "epsilon") cfg.epsilon = value.get<double>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else throw FormatError(path + ": unknown config key '" + key + "'");
    }
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  } catch (const UsageError& e) {
    throw FormatError(path + ": " + e.what());
  }
  return cfg;
}

// Grouping keys for `report`. Explicit flags win; otherwise they are
// recovered from a dataset name such as "en_task1_bare_test.tsv".
void AddGroupKeys(Json& m, const EmbeddingSet& set, const std::string& lang,
                  const std::string& task, const std::string& variant,
                  const std::string& model) {
  static const std::regex kDatasetName(
      R"(^(en|da|fr|ja)_(task[12])_(bare|sentence)(_|\.|$))");
  std::smatch match;
  const std::string base = fs::path(set.dataset).filename().string();
  const bool named = std::regex_search(base, match, kDatasetName);
  auto pick = [&](const std::string& flag, int group) -> Json {
    if (!flag.empty()) return flag;
    if (named) return match[group].str();
    return nullptr;
  };
  m["language"] = lang.empty() ? pick("", 1) : Json(std::string(LanguageCode(ParseLanguage(lang))));
  m["model"] = !model.empty() ? Json(model)
               : set.source_model.empty() ? Json(nullptr) : Json(set.source_model);
  m["task"] = task.empty() ? pick("", 2) : Json(std::string(TaskName(ParseTask(task))));
  m["variant"] = variant.empty() ? pick("", 3)
                                 : Json(std::string(VariantName(ParseVariant(variant))));
}

void EmitMetrics(const Json& m, const std::string& path, std::ostream& out) {
  const std::string text = m.dump(2) + "\n";
  out << text;
  if (!path.empty()) WriteFileBytes(path, text);
}

int RunTrain(const TrainArgs& a, std::ostream& out) {
  const EmbeddingSet train = ReadEmbeddings(a.embeddings);
  const EmbeddingSet val = ReadEmbeddings(a.val_embeddings);
  std::optional<EmbeddingSet> test;
  if (!a.test_embeddings.empty()) test = ReadEmbeddings(a.test_embeddings);
  if (val.dim() != train.dim() || (test && test->dim() != train.dim())) {
    throw DimensionError("embedding files disagree on dimension");
  }

  ProbeConfig cfg = LoadProbeConfig(a.config);
  if (a.seed) cfg.seed = *a.seed;
  cfg.input_dim = train.dim();
  const TrainResult result = TrainProbe(train, val, cfg);

  if (!a.model_out.empty()) {
    Checkpoint ckpt;
    ckpt.model = result.model;
    ckpt.config = cfg;
    ckpt.epochs_run = cfg.epochs;
    ckpt.best_epoch = result.best_epoch;
    ckpt.source_model = train.source_model;
    ckpt.dataset = train.dataset;
    WriteCheckpoint(ckpt, a.model_out);
  }

  Json m;
  m["verb"] = "train-probe";
  AddGroupKeys(m, train, a.lang, a.task, a.variant, a.model);
  const double test_acc = test ? Evaluate(result.model, *test) : 0.0;
  m["accuracy"] = test ? test_acc : result.best_val_accuracy;
  m["accuracy_split"] = test ? "test" : "val";
  m["val_accuracy"] = result.best_val_accuracy;
  m["test_accuracy"] = test ? Json(test_acc) : Json(nullptr);
  m["best_epoch"] = result.best_epoch;
  m["epochs_run"] = cfg.epochs;
  m["seed"] = cfg.seed;
  m["activation"] = ActivationName(cfg.activation);
  m["hidden_dim"] = cfg.hidden_dim;
  m["learning_rate"] = cfg.learning_rate;
  m["batch_size"] = cfg.batch_size;
  m["train_count"] = train.size();
  m["val_count"] = val.size();
  m["test_count"] = test ? Json(test->size()) : Json(nullptr);
  m["initial_train_loss"] = result.initial_train_loss;
  Json history = Json::array();
  for (const EpochStats& h : result.history) {
    history.push_back({{"epoch", h.epoch}, {"train_loss", h.train_loss},
                       {"val_accuracy", h.val_accuracy}});
  }
  m["history"] = std::move(history);
  EmitMetrics(m, a.metrics_out, out);
  return kExitOk;
}

int RunEval(const EvalArgs& a, std::ostream& out) {
  const Checkpoint ckpt = ReadCheckpoint(a.model_in);
  const EmbeddingSet data = ReadEmbeddings(a.embeddings);
  if (data.dim() != ckpt.model.input_dim) {
    throw DimensionError(a.embeddings + ": dimension " + std::to_string(data.dim()) +
                         " does not match model input " +
                         std::to_string(ckpt.model.input_dim));
  }
  Json m;
  m["verb"] = "eval-probe";
  AddGroupKeys(m, data, a.lang, a.task, a.variant,
               a.model.empty() ? ckpt.source_model : a.model);
  m["accuracy"] = Evaluate(ckpt.model, data);
  m["accuracy_split"] = "eval";
  m["count"] = data.size();
  m["best_epoch"] = ckpt.best_epoch;
  m["epochs_run"] = ckpt.epochs_run;
  m["seed"] = ckpt.config.seed;
  EmitMetrics(m, a.metrics_out, out);
  return kExitOk;
}

std::string Cell(const Json& m, const char* key) {
  const auto it = m.find(key);
  if (it == m.end() || it->is_null()) return "-";
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_float()) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(4);
    os << it->get<double>();
    return os.str();
  }
  return it->dump();
}

int RunReport(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(a.metrics_dir)) {
    throw FormatError("not a directory: " + a.metrics_dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.metrics_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  struct Row {
    Json metrics;
    fs::file_time_type mtime;
    std::string file;
  };
  static constexpr const char* kKeys[] = {"language", "model", "task", "variant"};
  std::map<std::vector<std::string>, Row> rows;
  for (const fs::path& path : files) {
    Json m;
    try {
      m = Json::parse(ReadFileBytes(path.string()));
    } catch (const Json::exception& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
    if (!m.is_object()) throw FormatError(path.string() + ": metrics must be a JSON object");
    if (m.contains("accuracy") && !m["accuracy"].is_number()) {
      throw FormatError(path.string() + ": accuracy must be a number");
    }
    std::vector<std::string> key;
    for (const char* k : kKeys) key.push_back(Cell(m, k));
    Row row{std::move(m), fs::last_write_time(path), path.filename().string()};
    auto [it, fresh] = rows.try_emplace(key, row);
    if (!fresh) {
      // Latest mtime wins; files are visited in name order, so on a tie
      // the later name replaces the earlier one.
      const bool replace = row.mtime >= it->second.mtime;
      const std::string& kept = replace ? row.file : it->second.file;
      const std::string& dropped = replace ? it->second.file : row.file;
      err << "warning: duplicate combination " << key[0] << '/' << key[1] << '/'
          << key[2] << '/' << key[3] << ": using " << kept << ", ignoring "
          << dropped << '\n';
      if (replace) it->second = std::move(row);
    }
  }

  out << "language\tmodel\ttask\tvariant\taccuracy\taccuracy_split\tval_accuracy"
         "\tepochs_run\tbest_epoch\tseed\tfile\n";
  for (const auto& [key, row] : rows) {
    for (const auto& k : key) out << k << '\t';
    for (const char* c : {"accuracy", "accuracy_split", "val_accuracy", "epochs_run",
                          "best_epoch", "seed"}) {
      out << Cell(row.metrics, c) << '\t';
    }
    out << row.file << '\n';
  }
  return kExitOk;
}

int Fail(std::ostream& err, const char* kind, const std::string& what, int code) {
  err << "error: " << kind << ": " << OneLine(what) << '\n';
  return code;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Spelled-out number datasets and numeracy probes", "numprobe"};
  app.require_subcommand(1);

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Build one task/variant dataset bundle");
  gen_cmd->add_option("--lang", gen.lang, "en, da, fr or ja")->required();
  gen_cmd->add_option("--task", gen.task, "1 (grammaticality) or 2 (comparison)")->required();
  gen_cmd->add_option("--variant", gen.variant, "bare or sentence")->required();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out-dir", gen.out_dir)->required();
  gen_cmd->add_option("--templates", gen.templates, "Template TSV file");
  gen_cmd->add_option("--train-size", gen.train_size)->capture_default_str();
  gen_cmd->add_option("--val-size", gen.val_size)->capture_default_str();
  gen_cmd->add_option("--test-size", gen.test_size)->capture_default_str();
  gen_cmd->add_option("--min-value", gen.min_value)->capture_default_str();
  gen_cmd->add_option("--max-value", gen.max_value)->capture_default_str();
  gen_cmd->add_flag("--allow-grammatical-repeats", gen.allow_repeats,
                    "Task 1: let grammatical inputs repeat when the range is too small");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Spell out a value or judge a word");
  check_cmd->add_option("--lang", check.lang)->required();
  check_cmd->add_flag("--lexicon", check.lexicon, "Dump the lexicon as token/role/weight");
  check_cmd->add_option("input", check.input, "Integer or number word");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth-ungrammatical", "Print ungrammatical number words");
  synth_cmd->add_option("--lang", synth.lang)->required();
  synth_cmd->add_option("--count", synth.count)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--min-value", synth.min_value)->capture_default_str();
  synth_cmd->add_option("--max-value", synth.max_value)->capture_default_str();
  synth_cmd->add_option("--max-length", synth.max_length,
                        "Code points; default is the longest canonical word in range");

  ManifestArgs manifest;
  auto* manifest_cmd = app.add_subcommand("extract-manifest", "List dataset rows as JSON lines");
  manifest_cmd->add_option("--lang", manifest.lang)->required();
  manifest_cmd->add_option("--task", manifest.task)->required();
  manifest_cmd->add_option("--variant", manifest.variant)->required();
  manifest_cmd->add_option("--data-dir", manifest.data_dir)->required();
  manifest_cmd->add_option("--split", manifest.split, "train, val or test (default all)");
  manifest_cmd->add_option("--out", manifest.out, "Write JSONL here instead of stdout");
  manifest_cmd->add_option("--templates", manifest.templates);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train-probe", "Train the MLP probe on embeddings");
  train_cmd->add_option("--embeddings", train.embeddings, "Training embeddings")->required();
  train_cmd->add_option("--val-embeddings", train.val_embeddings)->required();
  train_cmd->add_option("--test-embeddings", train.test_embeddings);
  train_cmd->add_option("--config", train.config, "Probe config JSON");
  train_cmd->add_option("--seed", train.seed, "Overrides the config seed");
  train_cmd->add_option("--model-out", train.model_out);
  train_cmd->add_option("--metrics-out", train.metrics_out);
  train_cmd->add_option("--lang", train.lang);
  train_cmd->add_option("--task", train.task);
  train_cmd->add_option("--variant", train.variant);
  train_cmd->add_option("--model", train.model, "Source model name for reporting");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval-probe", "Score a trained probe");
  eval_cmd->add_option("--embeddings", eval.embeddings)->required();
  eval_cmd->add_option("--model-in", eval.model_in)->required();
  eval_cmd->add_option("--metrics-out", eval.metrics_out);
  eval_cmd->add_option("--lang", eval.lang);
  eval_cmd->add_option("--task", eval.task);
  eval_cmd->add_option("--variant", eval.variant);
  eval_cmd->add_option("--model", eval.model);

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Aggregate metric files into a TSV table");
  report_cmd->add_option("--metrics-dir", report.metrics_dir)->required();

  BindEnvironment(app);

  if (!args.empty() && !args.front().starts_with("-") &&
      app.get_subcommand_no_throw(args.front()) == nullptr) {
    return Fail(err, "usage", "unknown verb '" + args.front() + "'", kExitUsage);
  }

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("numprobe");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    return Fail(err, "usage", e.what(), kExitUsage);
  }

  try {
    if (gen_cmd->parsed()) return RunGenData(gen, out);
    if (check_cmd->parsed()) return RunCheck(check, out);
    if (synth_cmd->parsed()) return RunSynth(synth, out);
    if (manifest_cmd->parsed()) return RunManifest(manifest, out);
    if (train_cmd->parsed()) return RunTrain(train, out);
    if (eval_cmd->parsed()) return RunEval(eval, out);
    if (report_cmd->parsed()) return RunReport(report, out, err);
    return Fail(err, "usage", "no verb given", kExitUsage);
  } catch (const RangeError& e) {
    return Fail(err, "range", e.what(), kExitUsage);
  } catch (const UsageError& e) {
    return Fail(err, "usage", e.what(), kExitUsage);
  } catch (const DimensionError& e) {
    return Fail(err, "dimension", e.what(), kExitData);
  } catch (const TemplateError& e) {
    return Fail(err, "template", e.what(), kExitData);
  } catch (const FormatError& e) {
    return Fail(err, "format", e.what(), kExitData);
  } catch (const ParseError& e) {
    return Fail(err, "parse", e.what(), kExitData);
  } catch (const TrainingError& e) {
    return Fail(err, "training", e.what(), kExitData);
  } catch (const CapacityError& e) {
    return Fail(err, "capacity", e.what(), kExitCapacity);
  } catch (const SynthesisError& e) {
    return Fail(err, "synthesis", e.what(), kExitCapacity);
  } catch (const fs::filesystem_error& e) {
    return Fail(err, "io", e.what(), kExitData);
  }
}

}  // namespace numprobe
