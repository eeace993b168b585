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

#include "numprobe/dataset.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "numprobe/errors.h"
#include "numprobe/random.h"
#include "numprobe/ungrammatical_synthesis.h"

namespace numprobe {
namespace {

// Consecutive duplicate draws tolerated before declaring capacity exhausted.
constexpr int kMaxDuplicateRun = 20'000;

std::size_t Idx(Split s) { return static_cast<std::size_t>(s); }

// Template ids for `n` rows: 0..10 repeated, shuffled. Every template gets
// floor(n/11) or ceil(n/11) rows, independent of the label.
std::vector<int> TemplateCycle(std::size_t n, Rng& rng) {
  std::vector<int> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids[i] = static_cast<int>(i % kTemplatesPerLanguage);
  }
  rng.Shuffle(ids);
  return ids;
}

// `k` distinct values from [lo, hi]. Dense requests enumerate and shuffle;
// sparse ones use rejection sampling.
std::vector<std::int64_t> DistinctValues(std::int64_t lo, std::int64_t hi,
                                         std::size_t k, Rng& rng) {
  const auto n = static_cast<std::size_t>(hi - lo + 1);
  if (k > n) {
    throw CapacityError("need " + std::to_string(k) +
                        " distinct values but the range holds " +
                        std::to_string(n));
  }
  std::vector<std::int64_t> out;
  out.reserve(k);
  if (2 * k > n) {
    std::vector<std::int64_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = lo + static_cast<std::int64_t>(i);
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(all[i], all[i + rng.Index(n - i)]);
      out.push_back(all[i]);
    }
    return out;
  }
  std::unordered_set<std::int64_t> seen;
  while (out.size() < k) {
    const std::int64_t v = rng.UniformInt(lo, hi);
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

// `k` distinct unordered pairs {a, b}, a > b, returned as (a, b).
std::vector<std::pair<std::int64_t, std::int64_t>> DistinctPairs(
    std::int64_t lo, std::int64_t hi, std::size_t k, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(hi - lo + 1);
  const std::uint64_t capacity = n * (n - 1) / 2;
  if (k > capacity) {
    throw CapacityError("need " + std::to_string(k) +
                        " distinct ordered pairs per label but the range "
                        "admits " +
                        std::to_string(capacity));
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  out.reserve(k);
  if (2 * k > capacity) {
    std::vector<std::pair<std::int64_t, std::int64_t>> all;
    all.reserve(capacity);
    for (std::int64_t a = lo; a <= hi; ++a) {
      for (std::int64_t b = lo; b < a; ++b) all.emplace_back(a, b);
    }
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(all[i], all[i + rng.Index(all.size() - i)]);
      out.push_back(all[i]);
    }
    return out;
  }
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  while (out.size() < k) {
    std::int64_t a = rng.UniformInt(lo, hi);
    std::int64_t b = rng.UniformInt(lo, hi);
    if (a == b) continue;
    if (a < b) std::swap(a, b);
    if (seen.emplace(a, b).second) out.emplace_back(a, b);
  }
  return out;
}

std::string Wrap(const TemplateSet& templates, Language lang,
                 std::optional<int> tid, const std::string& word) {
  if (!tid) return word;
  return RenderInTemplate(templates.Get(lang, *tid), word);
}

// Shuffles both label strata, cuts each 60-20-20 so every split is exactly
// balanced, shuffles within splits and numbers the rows.
DatasetBundle Assemble(Language lang, TaskVariant tv, const SplitSpec& spec,
                       std::vector<LabeledExample> zeros,
                       std::vector<LabeledExample> ones, Rng& rng) {
  if (spec.shuffle) {
    rng.Shuffle(zeros);
    rng.Shuffle(ones);
  }
  DatasetBundle bundle;
  bundle.variant = tv;
  bundle.language = lang;
  const std::array<std::size_t, 3> sizes = {spec.train_size, spec.val_size,
                                            spec.test_size};
  std::size_t offset = 0;
  std::int64_t next_id = 0;
  for (Split s : kAllSplits) {
    const std::size_t half = sizes[Idx(s)] / 2;
    auto& rows = bundle.splits[Idx(s)];
    rows.reserve(sizes[Idx(s)]);
    for (std::size_t i = 0; i < half; ++i) rows.push_back(std::move(zeros[offset + i]));
    for (std::size_t i = 0; i < half; ++i) rows.push_back(std::move(ones[offset + i]));
    offset += half;
    if (spec.shuffle) rng.Shuffle(rows);
    for (auto& row : rows) row.id = next_id++;
  }
  return bundle;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

template <typename T>
bool ParseInt(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

void CheckField(std::string_view text, std::int64_t id) {
  if (text.find_first_of("\t\n\r") != std::string_view::npos) {
    throw FormatError("example " + std::to_string(id) +
                      " contains a tab or newline");
  }
}

}  // namespace

std::string_view TaskName(Task task) {
  return task == Task::kGrammaticality ? "task1" : "task2";
}

Task ParseTask(std::string_view name) {
  if (name == "1" || name == "task1" || name == "grammaticality") {
    return Task::kGrammaticality;
  }
  if (name == "2" || name == "task2" || name == "comparison") {
    return Task::kComparison;
  }
  throw UsageError("unknown task '" + std::string(name) +
                   "' (expected 1 or 2)");
}

std::string_view VariantName(Variant variant) {
  return variant == Variant::kBare ? "bare" : "sentence";
}

Variant ParseVariant(std::string_view name) {
  if (name == "bare") return Variant::kBare;
  if (name == "sentence") return Variant::kSentence;
  throw UsageError("unknown variant '" + std::string(name) +
                   "' (expected bare or sentence)");
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTest:
      return "test";
  }
  return "?";
}

void ValidateSplitSpec(const SplitSpec& spec) {
  if (spec.val_size == 0 || spec.train_size != 3 * spec.val_size ||
      spec.test_size != spec.val_size) {
    throw UsageError("split sizes must be in 60-20-20 ratio");
  }
  if (spec.val_size % 2 != 0) {
    throw UsageError("split sizes must be even for exact label balance");
  }
  if (spec.min_value < 0 || spec.max_value > kMaxValue ||
      spec.min_value >= spec.max_value) {
    throw UsageError("value range must be a non-trivial sub-range of "
                     "[0, 100000000]");
  }
}

DatasetBundle BuildTask1(Language lang, Variant variant, const SplitSpec& spec,
                         const TemplateSet& templates) {
  ValidateSplitSpec(spec);
  const bool sentence = variant == Variant::kSentence;
  const std::size_t half = spec.total() / 2;
  const auto range = static_cast<std::size_t>(spec.max_value - spec.min_value + 1);
  Rng rng(spec.seed);

  if (!spec.allow_grammatical_repeats) {
    const std::size_t capacity = range * (sentence ? kTemplatesPerLanguage : 1);
    if (half > capacity) {
      throw CapacityError(
          "task1 needs " + std::to_string(half) +
          " distinct grammatical inputs but [" +
          std::to_string(spec.min_value) + ", " +
          std::to_string(spec.max_value) + "] yields only " +
          std::to_string(capacity) + " (" + std::string(VariantName(variant)) +
          "); allow grammatical repeats or shrink the splits");
    }
  }

  // Grammatical stratum, label 0.
  std::vector<LabeledExample> zeros;
  zeros.reserve(half);
  {
    std::vector<int> tids;
    if (sentence) tids = TemplateCycle(half, rng);
    std::vector<std::int64_t> values;
    if (spec.allow_grammatical_repeats) {
      values.reserve(half);
      for (std::size_t i = 0; i < half; ++i) {
        values.push_back(rng.UniformInt(spec.min_value, spec.max_value));
      }
    } else if (!sentence) {
      values = DistinctValues(spec.min_value, spec.max_value, half, rng);
    } else {
      // Distinct within each template is distinct overall.
      std::array<std::size_t, kTemplatesPerLanguage> counts{};
      for (int t : tids) ++counts[t];
      std::array<std::vector<std::int64_t>, kTemplatesPerLanguage> per_template;
      for (int t = 0; t < kTemplatesPerLanguage; ++t) {
        per_template[t] =
            DistinctValues(spec.min_value, spec.max_value, counts[t], rng);
      }
      std::array<std::size_t, kTemplatesPerLanguage> used{};
      for (int t : tids) values.push_back(per_template[t][used[t]++]);
    }
    for (std::size_t i = 0; i < half; ++i) {
      LabeledExample ex;
      if (sentence) ex.template_id = tids[i];
      ex.x0 = Wrap(templates, lang, ex.template_id, ToWords(values[i], lang));
      ex.label = 0;
      ex.values = {values[i]};
      zeros.push_back(std::move(ex));
    }
  }

  // Ungrammatical stratum, label 1.
  std::vector<LabeledExample> ones;
  ones.reserve(half);
  {
    std::vector<int> tids;
    if (sentence) tids = TemplateCycle(half, rng);
    SynthConfig cfg;
    cfg.language = lang;
    cfg.min_value = spec.min_value;
    cfg.max_value = spec.max_value;
    cfg.seed = spec.seed;
    const UngrammaticalSynthesizer synth(cfg);
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < half; ++i) {
      LabeledExample ex;
      if (sentence) ex.template_id = tids[i];
      ex.label = 1;
      int run = 0;
      while (true) {
        ex.x0 = Wrap(templates, lang, ex.template_id, synth.Generate(rng));
        if (seen.insert(ex.x0).second) break;
        if (++run >= kMaxDuplicateRun) {
          throw CapacityError("ungrammatical inputs exhausted after " +
                              std::to_string(i) + " distinct strings");
        }
      }
      ones.push_back(std::move(ex));
    }
  }

  return Assemble(lang, {Task::kGrammaticality, variant}, spec,
                  std::move(zeros), std::move(ones), rng);
}

DatasetBundle BuildTask2(Language lang, Variant variant, const SplitSpec& spec,
                         const TemplateSet& templates) {
  ValidateSplitSpec(spec);
  const bool sentence = variant == Variant::kSentence;
  const std::size_t half = spec.total() / 2;
  Rng rng(spec.seed);

  // Label 0 rows put the larger value first, label 1 rows the smaller. The
  // strata are drawn independently, so (a, b) and (b, a) may both occur, but
  // no ordered pair repeats.
  std::array<std::vector<LabeledExample>, 2> strata;
  for (int label = 0; label < 2; ++label) {
    std::vector<int> tids;
    if (sentence) tids = TemplateCycle(half, rng);
    const auto pairs = DistinctPairs(spec.min_value, spec.max_value, half, rng);
    auto& rows = strata[label];
    rows.reserve(half);
    for (std::size_t i = 0; i < half; ++i) {
      auto [s0, s1] = pairs[i];
      if (label == 1) std::swap(s0, s1);
      LabeledExample ex;
      if (sentence) ex.template_id = tids[i];
      ex.x0 = Wrap(templates, lang, ex.template_id, ToWords(s0, lang));
      ex.x1 = Wrap(templates, lang, ex.template_id, ToWords(s1, lang));
      ex.label = label;
      ex.values = {s0, s1};
      rows.push_back(std::move(ex));
    }
  }
  return Assemble(lang, {Task::kComparison, variant}, spec,
                  std::move(strata[0]), std::move(strata[1]), rng);
}

DatasetBundle BuildDataset(Language lang, TaskVariant tv,
                           const SplitSpec& spec,
                           const TemplateSet& templates) {
  return tv.task == Task::kGrammaticality
             ? BuildTask1(lang, tv.variant, spec, templates)
             : BuildTask2(lang, tv.variant, spec, templates);
}

std::string DatasetFileName(Language lang, TaskVariant tv, Split split) {
  std::string out(LanguageCode(lang));
  out += '_';
  out += TaskName(tv.task);
  out += '_';
  out += VariantName(tv.variant);
  out += '_';
  out += SplitName(split);
  out += ".tsv";
  return out;
}

std::string SerializeSplit(const DatasetBundle& bundle, Split split) {
  std::string out;
  const std::string_view task = TaskName(bundle.variant.task);
  const std::string_view variant = VariantName(bundle.variant.variant);
  const std::string_view lang = LanguageCode(bundle.language);
  for (const auto& ex : bundle.split(split)) {
    CheckField(ex.x0, ex.id);
    if (ex.x1) CheckField(*ex.x1, ex.id);
    out += std::to_string(ex.id);
    out += '\t';
    out += task;
    out += '\t';
    out += variant;
    out += '\t';
    out += lang;
    out += '\t';
    out += ex.x0;
    out += '\t';
    out += ex.x1 ? *ex.x1 : "-";
    out += '\t';
    out += ex.label == 0 ? '0' : '1';
    out += '\t';
    out += ex.template_id ? std::to_string(*ex.template_id) : "-";
    out += '\n';
  }
  return out;
}

std::vector<std::string> WriteDataset(const DatasetBundle& bundle,
                                      const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::vector<std::string> paths;
  for (Split s : kAllSplits) {
    const std::string path =
        (std::filesystem::path(dir) /
         DatasetFileName(bundle.language, bundle.variant, s))
            .string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path);
    out << SerializeSplit(bundle, s);
    out.close();
    if (!out) throw FormatError("failed writing " + path);
    paths.push_back(path);
  }
  return paths;
}

std::vector<std::string> NumberWords(const LabeledExample& ex, Language lang,
                                     Variant variant,
                                     const TemplateSet& templates) {
  std::vector<std::string> texts = {ex.x0};
  if (ex.x1) texts.push_back(*ex.x1);
  if (variant == Variant::kBare) return texts;
  if (!ex.template_id) {
    throw FormatError("sentence example " + std::to_string(ex.id) +
                      " has no template id");
  }
  const Template& t = templates.Get(lang, *ex.template_id);
  for (auto& text : texts) {
    auto word = ExtractFromTemplate(t, text);
    if (!word) {
      throw FormatError("example " + std::to_string(ex.id) +
                        " does not fit template " +
                        std::to_string(*ex.template_id));
    }
    text = std::move(*word);
  }
  return texts;
}

std::vector<LabeledExample> ParseSplit(std::string_view text, Language lang,
                                       TaskVariant tv,
                                       const TemplateSet& templates) {
  std::vector<LabeledExample> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    const auto f = SplitFields(line);
    if (f.size() != 8) {
      throw FormatError("expected 8 tab-separated fields, got " +
                        std::to_string(f.size()),
                        line_no);
    }
    LabeledExample ex;
    if (!ParseInt(f[0], ex.id) || ex.id < 0) {
      throw FormatError("bad id '" + std::string(f[0]) + "'", line_no);
    }
    if (f[1] != TaskName(tv.task) || f[2] != VariantName(tv.variant) ||
        f[3] != LanguageCode(lang)) {
      throw FormatError("record is " + std::string(f[1]) + "/" +
                            std::string(f[2]) + "/" + std::string(f[3]) +
                            ", file is " + std::string(TaskName(tv.task)) +
                            "/" + std::string(VariantName(tv.variant)) + "/" +
                            std::string(LanguageCode(lang)),
                        line_no);
    }
    if (f[4].empty()) throw FormatError("empty x0", line_no);
    ex.x0 = std::string(f[4]);
    const bool pair = tv.task == Task::kComparison;
    if (pair == (f[5] == "-")) {
      throw FormatError(pair ? "task2 record lacks x1"
                             : "task1 record must have x1 '-'",
                        line_no);
    }
    if (pair) ex.x1 = std::string(f[5]);
    if (f[6] != "0" && f[6] != "1") {
      throw FormatError("label must be 0 or 1, got '" + std::string(f[6]) +
                            "'",
                        line_no);
    }
    ex.label = f[6] == "1" ? 1 : 0;
    if (tv.variant == Variant::kBare) {
      if (f[7] != "-") {
        throw FormatError("bare record must have template_id '-'", line_no);
      }
    } else {
      int tid = -1;
      if (!ParseInt(f[7], tid) || tid < 0 || tid >= kTemplatesPerLanguage) {
        throw FormatError("bad template_id '" + std::string(f[7]) + "'",
                          line_no);
      }
      ex.template_id = tid;
    }

    std::vector<std::string> words;
    try {
      words = NumberWords(ex, lang, tv.variant, templates);
    } catch (const FormatError& e) {
      throw FormatError(e.what(), line_no);
    }
    if (!pair) {
      const auto v = TryParseWords(words[0], lang);
      if (v.has_value() != (ex.label == 0)) {
        throw FormatError("label " + std::to_string(ex.label) +
                              " contradicts grammaticality of '" + words[0] +
                              "'",
                          line_no);
      }
      if (v) ex.values = {*v};
    } else {
      const auto a = TryParseWords(words[0], lang);
      const auto b = TryParseWords(words[1], lang);
      if (!a || !b || *a == *b) {
        throw FormatError("task2 record needs two distinct number words",
                          line_no);
      }
      if ((*a < *b) != (ex.label == 1)) {
        throw FormatError("label " + std::to_string(ex.label) +
                              " contradicts values " + std::to_string(*a) +
                              ", " + std::to_string(*b),
                          line_no);
      }
      ex.values = {*a, *b};
    }
    out.push_back(std::move(ex));
  }
  return out;
}

DatasetBundle ReadDataset(const std::string& dir, Language lang,
                          TaskVariant tv, const TemplateSet& templates) {
  DatasetBundle bundle;
  bundle.language = lang;
  bundle.variant = tv;
  for (Split s : kAllSplits) {
    const std::string path =
        (std::filesystem::path(dir) / DatasetFileName(lang, tv, s)).string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      bundle.splits[Idx(s)] = ParseSplit(ss.str(), lang, tv, templates);
    } catch (const FormatError& e) {
      throw FormatError(path + ": " + e.what());
    }
  }
  return bundle;
}

}  // namespace numprobe
