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

#ifndef NUMPROBE_TEMPLATES_H_
#define NUMPROBE_TEMPLATES_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "numprobe/number_grammar.h"

namespace numprobe {

inline constexpr int kTemplatesPerLanguage = 11;
inline constexpr std::string_view kSlot = "{N}";

struct Template {
  int id = 0;
  Language language = Language::kEnglish;
  std::string pattern;  // exactly one kSlot
};

// Substitutes `word` into the slot. Throws TemplateError unless the pattern
// has exactly one slot.
std::string RenderInTemplate(const Template& t, std::string_view word);

// Inverse of RenderInTemplate: the slot filler, if `sentence` fits `t`.
std::optional<std::string> ExtractFromTemplate(const Template& t,
                                               std::string_view sentence);

// Eleven templates per language, indexed by id.
class TemplateSet {
 public:
  // Throws TemplateError unless every language has ids 0..10, each once,
  // and every pattern has exactly one slot.
  explicit TemplateSet(std::vector<Template> templates);

  const Template& Get(Language lang, int id) const;
  const std::array<Template, kTemplatesPerLanguage>& ForLanguage(
      Language lang) const;

  // "lang<TAB>id<TAB>pattern" lines, languages in kAllLanguages order.
  std::string Serialize() const;

 private:
  std::array<std::array<Template, kTemplatesPerLanguage>, 4> table_;
};

const TemplateSet& DefaultTemplates();

// Reads the Serialize() format; '#' lines and blank lines are skipped.
TemplateSet LoadTemplates(const std::string& path);
TemplateSet ParseTemplates(std::string_view text);

}  // namespace numprobe

#endif  // NUMPROBE_TEMPLATES_H_
