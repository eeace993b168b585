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

#ifndef NUMPROBE_DATASET_H_
#define NUMPROBE_DATASET_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "numprobe/number_grammar.h"
#include "numprobe/templates.h"

namespace numprobe {

enum class Task { kGrammaticality, kComparison };
enum class Variant { kBare, kSentence };
enum class Split { kTrain, kVal, kTest };

inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kVal,
                                                    Split::kTest};

struct TaskVariant {
  Task task = Task::kGrammaticality;
  Variant variant = Variant::kBare;

  bool operator==(const TaskVariant&) const = default;
};

// "task1" / "task2"; ParseTask also accepts "1", "2" and the long names.
std::string_view TaskName(Task task);
Task ParseTask(std::string_view name);
std::string_view VariantName(Variant variant);  // "bare" / "sentence"
Variant ParseVariant(std::string_view name);
std::string_view SplitName(Split split);  // "train" / "val" / "test"

struct LabeledExample {
  std::int64_t id = 0;
  std::string x0;
  std::optional<std::string> x1;  // Task 2 only
  int label = 0;
  // Values the inputs denote: {v} for a grammatical Task 1 row, {} for an
  // ungrammatical one, {value(s0), value(s1)} for Task 2.
  std::vector<std::int64_t> values;
  std::optional<int> template_id;

  bool operator==(const LabeledExample&) const = default;
};

struct DatasetBundle {
  TaskVariant variant;
  Language language = Language::kEnglish;
  std::array<std::vector<LabeledExample>, 3> splits;

  const std::vector<LabeledExample>& split(Split s) const {
    return splits[static_cast<std::size_t>(s)];
  }
  std::size_t size() const {
    return splits[0].size() + splits[1].size() + splits[2].size();
  }
  bool operator==(const DatasetBundle&) const = default;
};

struct SplitSpec {
  std::size_t train_size = 30'000;
  std::size_t val_size = 10'000;
  std::size_t test_size = 10'000;
  std::uint64_t seed = 1;
  std::int64_t min_value = 0;
  std::int64_t max_value = 999;
  bool shuffle = true;
  // Task 1 only. The grammatical half needs as many distinct inputs as rows;
  // when the range cannot supply them, this permits grammatical inputs to
  // repeat instead of failing. Ungrammatical inputs stay unique.
  bool allow_grammatical_repeats = false;

  std::size_t total() const { return train_size + val_size + test_size; }
};

// Throws UsageError unless sizes are 60-20-20, every split is even (for exact
// balance) and the range lies in [0, kMaxValue].
void ValidateSplitSpec(const SplitSpec& spec);

// Task 1: label 1 iff the embedded number word is ungrammatical.
// Throws CapacityError when distinct inputs run out.
DatasetBundle BuildTask1(Language lang, Variant variant, const SplitSpec& spec,
                         const TemplateSet& templates = DefaultTemplates());

// Task 2: label 0 iff value(s0) > value(s1).
DatasetBundle BuildTask2(Language lang, Variant variant, const SplitSpec& spec,
                         const TemplateSet& templates = DefaultTemplates());

DatasetBundle BuildDataset(Language lang, TaskVariant tv,
                           const SplitSpec& spec,
                           const TemplateSet& templates = DefaultTemplates());

// "{lang}_{task}_{variant}_{split}.tsv"
std::string DatasetFileName(Language lang, TaskVariant tv, Split split);

// One record per line:
// id TAB task TAB variant TAB lang TAB x0 TAB x1 TAB y TAB template_id
// with "-" for an absent x1 or template_id.
std::string SerializeSplit(const DatasetBundle& bundle, Split split);

// Writes the three split files into `dir` (created if missing). Returns the
// written paths in train/val/test order.
std::vector<std::string> WriteDataset(const DatasetBundle& bundle,
                                      const std::string& dir);

// Parses one split file. Values are recovered by re-parsing the number words
// (unwrapped from their templates for the sentence variant). Throws
// FormatError naming the line on malformed input.
std::vector<LabeledExample> ParseSplit(std::string_view text, Language lang,
                                       TaskVariant tv,
                                       const TemplateSet& templates =
                                           DefaultTemplates());

DatasetBundle ReadDataset(const std::string& dir, Language lang,
                          TaskVariant tv,
                          const TemplateSet& templates = DefaultTemplates());

// The bare number word(s) of an example: x0/x1 themselves, or the slot
// fillers of their template.
std::vector<std::string> NumberWords(const LabeledExample& ex, Language lang,
                                     Variant variant,
                                     const TemplateSet& templates =
                                         DefaultTemplates());

}  // namespace numprobe

#endif  // NUMPROBE_DATASET_H_
