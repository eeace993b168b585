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

#include "numprobe/templates.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "numprobe/errors.h"

namespace numprobe {
namespace {

std::size_t CountSlots(std::string_view pattern) {
  std::size_t n = 0;
  for (auto at = pattern.find(kSlot); at != std::string_view::npos;
       at = pattern.find(kSlot, at + kSlot.size())) {
    ++n;
  }
  return n;
}

std::size_t LanguageIndex(Language lang) {
  return static_cast<std::size_t>(lang);
}

// The first two English patterns come from published sample data; the rest
// are plain declaratives with one countable noun each.
constexpr std::string_view kDefaultTemplates = R"(# lang	id	pattern
en	0	He could eat {N} oranges
en	1	There are {N} books in the library
en	2	She bought {N} apples at the market
en	3	We counted {N} birds in the park
en	4	The school has {N} students
en	5	They planted {N} trees last spring
en	6	The farmer owns {N} sheep
en	7	I found {N} coins in the drawer
en	8	The museum displays {N} paintings
en	9	My grandmother baked {N} cookies
en	10	The train carried {N} passengers
da	0	Han kunne spise {N} appelsiner
da	1	Der er {N} bøger i biblioteket
da	2	Hun købte {N} æbler på markedet
da	3	Vi talte {N} fugle i parken
da	4	Skolen har {N} elever
da	5	De plantede {N} træer sidste forår
da	6	Landmanden ejer {N} får
da	7	Jeg fandt {N} mønter i skuffen
da	8	Museet udstiller {N} malerier
da	9	Min bedstemor bagte {N} småkager
da	10	Toget kørte med {N} passagerer
fr	0	Il pourrait manger {N} oranges
fr	1	Il y a {N} livres dans la bibliothèque
fr	2	Elle a acheté {N} pommes au marché
fr	3	Nous avons compté {N} oiseaux dans le parc
fr	4	L'école a {N} élèves
fr	5	Ils ont planté {N} arbres au printemps dernier
fr	6	Le fermier possède {N} moutons
fr	7	J'ai trouvé {N} pièces dans le tiroir
fr	8	Le musée expose {N} tableaux
fr	9	Ma grand-mère a fait {N} biscuits
fr	10	Le train transportait {N} passagers
ja	0	彼はオレンジを{N}個食べられた
ja	1	図書館には本が{N}冊あります
ja	2	彼女は市場でりんごを{N}個買った
ja	3	公園で鳥を{N}羽数えた
ja	4	その学校には生徒が{N}人いる
ja	5	彼らは去年の春に木を{N}本植えた
ja	6	その農家は羊を{N}頭飼っている
ja	7	引き出しの中で硬貨を{N}枚見つけた
ja	8	その美術館は絵画を{N}点展示している
ja	9	祖母はクッキーを{N}枚焼いた
ja	10	その電車は乗客を{N}人運んだ
)";

}  // namespace

std::string RenderInTemplate(const Template& t, std::string_view word) {
  const std::size_t slots = CountSlots(t.pattern);
  if (slots != 1) {
    throw TemplateError("template " + std::to_string(t.id) + " has " +
                        std::to_string(slots) + " slots, expected 1");
  }
  std::string out = t.pattern;
  out.replace(out.find(kSlot), kSlot.size(), word);
  return out;
}

std::optional<std::string> ExtractFromTemplate(const Template& t,
                                               std::string_view sentence) {
  const auto at = t.pattern.find(kSlot);
  if (at == std::string::npos) return std::nullopt;
  const std::string_view prefix = std::string_view(t.pattern).substr(0, at);
  const std::string_view suffix =
      std::string_view(t.pattern).substr(at + kSlot.size());
  if (sentence.size() < prefix.size() + suffix.size() ||
      !sentence.starts_with(prefix) || !sentence.ends_with(suffix)) {
    return std::nullopt;
  }
  return std::string(sentence.substr(
      prefix.size(), sentence.size() - prefix.size() - suffix.size()));
}

TemplateSet::TemplateSet(std::vector<Template> templates) {
  std::array<std::array<bool, kTemplatesPerLanguage>, 4> seen{};
  for (auto& t : templates) {
    if (t.id < 0 || t.id >= kTemplatesPerLanguage) {
      throw TemplateError("template id " + std::to_string(t.id) +
                          " outside 0..10");
    }
    const std::size_t slots = CountSlots(t.pattern);
    if (slots != 1) {
      throw TemplateError(std::string(LanguageCode(t.language)) +
                          " template " + std::to_string(t.id) + " has " +
                          std::to_string(slots) + " slots, expected 1");
    }
    bool& flag = seen[LanguageIndex(t.language)][t.id];
    if (flag) {
      throw TemplateError("duplicate " + std::string(LanguageCode(t.language)) +
                          " template id " + std::to_string(t.id));
    }
    flag = true;
    table_[LanguageIndex(t.language)][t.id] = std::move(t);
  }
  for (Language lang : kAllLanguages) {
    for (int id = 0; id < kTemplatesPerLanguage; ++id) {
      if (!seen[LanguageIndex(lang)][id]) {
        throw TemplateError("missing " + std::string(LanguageCode(lang)) +
                            " template id " + std::to_string(id));
      }
    }
  }
}

const Template& TemplateSet::Get(Language lang, int id) const {
  if (id < 0 || id >= kTemplatesPerLanguage) {
    throw TemplateError("template id " + std::to_string(id) +
                        " outside 0..10");
  }
  return table_[LanguageIndex(lang)][id];
}

const std::array<Template, kTemplatesPerLanguage>& TemplateSet::ForLanguage(
    Language lang) const {
  return table_[LanguageIndex(lang)];
}

std::string TemplateSet::Serialize() const {
  std::ostringstream os;
  for (Language lang : kAllLanguages) {
    for (const auto& t : ForLanguage(lang)) {
      os << LanguageCode(lang) << '\t' << t.id << '\t' << t.pattern << '\n';
    }
  }
  return os.str();
}

TemplateSet ParseTemplates(std::string_view text) {
  std::vector<Template> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string_view::npos
                          ? std::string_view::npos
                          : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos) {
      throw TemplateError("expected lang<TAB>id<TAB>pattern", line_no);
    }
    Template t;
    try {
      t.language = ParseLanguage(line.substr(0, tab1));
    } catch (const UsageError& e) {
      throw TemplateError(e.what(), line_no);
    }
    const std::string_view id = line.substr(tab1 + 1, tab2 - tab1 - 1);
    auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), t.id);
    if (ec != std::errc() || ptr != id.data() + id.size()) {
      throw TemplateError("bad template id '" + std::string(id) + "'",
                          line_no);
    }
    t.pattern = std::string(line.substr(tab2 + 1));
    out.push_back(std::move(t));
  }
  return TemplateSet(std::move(out));
}

TemplateSet LoadTemplates(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open template file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseTemplates(ss.str());
}

const TemplateSet& DefaultTemplates() {
  static const TemplateSet kSet = ParseTemplates(kDefaultTemplates);
  return kSet;
}

}  // namespace numprobe
