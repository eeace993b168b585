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

#include "numprobe/number_grammar.h"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>
#include <variant>

#include "numprobe/errors.h"

namespace numprobe {
namespace {

constexpr std::int64_t kMillion = 1'000'000;

// ---------------------------------------------------------------------------
// Merge rules. Each combines two adjacent terms of a decomposition; a smaller
// right term is added, a larger right term multiplies.
// ---------------------------------------------------------------------------

Term MergeEnglish(const Term& l, const Term& r) {
  if (l.value == 1 && r.value < 100) return r;
  if (100 > l.value && l.value > r.value) {
    return {l.text + "-" + r.text, l.value + r.value};
  }
  if (l.value >= 100 && 100 > r.value) {
    return {l.text + " and " + r.text, l.value + r.value};
  }
  if (r.value > l.value) return {l.text + " " + r.text, l.value * r.value};
  return {l.text + ", " + r.text, l.value + r.value};
}

Term MergeDanish(const Term& l, const Term& r) {
  std::string ctext = l.text;
  std::string ntext = r.text;
  const std::int64_t cnum = l.value;
  const std::int64_t nnum = r.value;
  if (cnum == 1) {
    // "et" is glued onto a bare hundred or thousand.
    if (nnum < kMillion) {
      return {(nnum == 100 || nnum == 1000) ? "et" + r.text : r.text, nnum};
    }
    ctext = "en";
  }
  std::int64_t value;
  if (nnum > cnum) {
    if (nnum >= kMillion) ctext += " ";
    value = cnum * nnum;
  } else {
    if (cnum >= 100 && cnum < 1000) {
      ctext += " og ";
    } else if (cnum >= 1000 && cnum <= 100'000) {
      ctext += "e og ";
    }
    if (nnum < 10 && 10 < cnum && cnum < 100) {
      // Units precede tens: "enogtyve".
      if (nnum == 1) ntext = "en";
      std::swap(ctext, ntext);
      ctext += "og";
    } else if (cnum >= kMillion) {
      ctext += " ";
    }
    value = cnum + nnum;
  }
  return {ctext + ntext, value};
}

Term MergeFrench(const Term& l, const Term& r) {
  std::string ctext = l.text;
  std::string ntext = r.text;
  const std::int64_t cnum = l.value;
  const std::int64_t nnum = r.value;
  if (cnum == 1) {
    if (nnum < kMillion) return r;
  } else {
    // Plural -s survives only at the end of quatre-vingts and N cents.
    if (((cnum - 80) % 100 == 0 || (cnum % 100 == 0 && cnum < 1000)) &&
        nnum < kMillion && ctext.back() == 's') {
      ctext.pop_back();
    }
    if (cnum < 1000 && nnum != 1000 && ntext.back() != 's' &&
        nnum % 100 == 0) {
      ntext += "s";
    }
  }
  if (nnum < cnum && cnum < 100) {
    if (nnum % 10 == 1 && cnum != 80) {
      return {ctext + " et " + ntext, cnum + nnum};
    }
    return {ctext + "-" + ntext, cnum + nnum};
  }
  if (nnum > cnum) return {ctext + " " + ntext, cnum * nnum};
  return {ctext + " " + ntext, cnum + nnum};
}

Term MergeJapanese(const Term& l, const Term& r) {
  if (l.value == 1 && r.value < 10'000) return r;
  if (l.value > r.value) return {l.text + r.text, l.value + r.value};
  return {l.text + r.text, l.value * r.value};
}

// ---------------------------------------------------------------------------
// Decomposition. SplitNum produces a nested list of terms which Clean folds
// pairwise, left to right, with the language's merge rule.
// ---------------------------------------------------------------------------

struct Node;
using NodeList = std::vector<Node>;
struct Node {
  std::variant<Term, NodeList> item;
};

const Term& CardTerm(const LanguageSpec& spec, std::int64_t value,
                     Term& storage) {
  for (const auto& card : spec.cards()) {
    if (card.value == value) {
      storage = Term{std::string(card.text), card.value};
      return storage;
    }
  }
  throw Error("missing card");
}

NodeList SplitNum(const LanguageSpec& spec, std::int64_t value) {
  for (const auto& card : spec.cards()) {
    if (card.value > value) continue;
    NodeList out;
    std::int64_t div = 1;
    std::int64_t mod = 0;
    if (value != 0) {
      div = value / card.value;
      mod = value % card.value;
    }
    Term one;
    if (div == 1) {
      out.push_back({CardTerm(spec, 1, one)});
    } else {
      out.push_back({SplitNum(spec, div)});
    }
    out.push_back({Term{std::string(card.text), card.value}});
    if (mod != 0) out.push_back({SplitNum(spec, mod)});
    return out;
  }
  throw RangeError("no card covers " + std::to_string(value));
}

Node Clean(const LanguageSpec& spec, NodeList val) {
  NodeList out = val;
  while (val.size() != 1) {
    out.clear();
    const auto* left = std::get_if<Term>(&val[0].item);
    const auto* right = std::get_if<Term>(&val[1].item);
    if (left != nullptr && right != nullptr) {
      out.push_back({spec.Merge(*left, *right)});
      if (val.size() > 2) {
        out.push_back({NodeList(val.begin() + 2, val.end())});
      }
    } else {
      for (auto& elem : val) {
        if (auto* list = std::get_if<NodeList>(&elem.item)) {
          if (list->size() == 1) {
            out.push_back(std::move((*list)[0]));
          } else {
            out.push_back(Clean(spec, std::move(*list)));
          }
        } else {
          out.push_back(std::move(elem));
        }
      }
    }
    val = out;
  }
  return out[0];
}

// ---------------------------------------------------------------------------
// Language tables.
// ---------------------------------------------------------------------------

using R = TokenRole;

LanguageSpec MakeEnglish() {
  std::vector<LexiconEntry> lex = {
      {"zero", R::kUnit, 0},        {"one", R::kUnit, 1},
      {"two", R::kUnit, 2},         {"three", R::kUnit, 3},
      {"four", R::kUnit, 4},        {"five", R::kUnit, 5},
      {"six", R::kUnit, 6},         {"seven", R::kUnit, 7},
      {"eight", R::kUnit, 8},       {"nine", R::kUnit, 9},
      {"ten", R::kUnit, 10},        {"eleven", R::kUnit, 11},
      {"twelve", R::kUnit, 12},     {"thirteen", R::kUnit, 13},
      {"fourteen", R::kUnit, 14},   {"fifteen", R::kUnit, 15},
      {"sixteen", R::kUnit, 16},    {"seventeen", R::kUnit, 17},
      {"eighteen", R::kUnit, 18},   {"nineteen", R::kUnit, 19},
      {"twenty", R::kTen, 20},      {"thirty", R::kTen, 30},
      {"forty", R::kTen, 40},       {"fifty", R::kTen, 50},
      {"sixty", R::kTen, 60},       {"seventy", R::kTen, 70},
      {"eighty", R::kTen, 80},      {"ninety", R::kTen, 90},
      {"hundred", R::kScale, 100},  {"thousand", R::kScale, 1000},
      {"million", R::kScale, kMillion}, {"and", R::kConnector, 0},
  };
  std::vector<LanguageSpec::Card> cards = {
      {kMillion, "million"}, {1000, "thousand"}, {100, "hundred"},
      {90, "ninety"},        {80, "eighty"},     {70, "seventy"},
      {60, "sixty"},         {50, "fifty"},      {40, "forty"},
      {30, "thirty"},        {20, "twenty"},     {19, "nineteen"},
      {18, "eighteen"},      {17, "seventeen"},  {16, "sixteen"},
      {15, "fifteen"},       {14, "fourteen"},   {13, "thirteen"},
      {12, "twelve"},        {11, "eleven"},     {10, "ten"},
      {9, "nine"},           {8, "eight"},       {7, "seven"},
      {6, "six"},            {5, "five"},        {4, "four"},
      {3, "three"},          {2, "two"},         {1, "one"},
      {0, "zero"},
  };
  return LanguageSpec(Language::kEnglish, std::move(lex), std::move(cards),
                      &MergeEnglish, "-,", " ", 1000);
}

LanguageSpec MakeDanish() {
  std::vector<LexiconEntry> lex = {
      {"nul", R::kUnit, 0},          {"en", R::kUnit, 1},
      {"et", R::kUnit, 1},           {"to", R::kUnit, 2},
      {"tre", R::kUnit, 3},          {"fire", R::kUnit, 4},
      {"fem", R::kUnit, 5},          {"seks", R::kUnit, 6},
      {"syv", R::kUnit, 7},          {"otte", R::kUnit, 8},
      {"ni", R::kUnit, 9},           {"ti", R::kUnit, 10},
      {"elleve", R::kUnit, 11},      {"tolv", R::kUnit, 12},
      {"tretten", R::kUnit, 13},     {"fjorten", R::kUnit, 14},
      {"femten", R::kUnit, 15},      {"seksten", R::kUnit, 16},
      {"sytten", R::kUnit, 17},      {"atten", R::kUnit, 18},
      {"nitten", R::kUnit, 19},      {"tyve", R::kTen, 20},
      {"tredive", R::kTen, 30},      {"fyrre", R::kTen, 40},
      {"halvtreds", R::kTen, 50},    {"treds", R::kTen, 60},
      {"halvfjerds", R::kTen, 70},   {"firs", R::kTen, 80},
      {"halvfems", R::kTen, 90},     {"hundrede", R::kScale, 100},
      {"tusind", R::kScale, 1000},   {"tusinde", R::kScale, 1000},
      {"millioner", R::kScale, kMillion}, {"og", R::kConnector, 0},
  };
  std::vector<LanguageSpec::Card> cards = {
      {kMillion, "millioner"}, {1000, "tusind"}, {100, "hundrede"},
      {90, "halvfems"},        {80, "firs"},     {70, "halvfjerds"},
      {60, "treds"},           {50, "halvtreds"}, {40, "fyrre"},
      {30, "tredive"},         {20, "tyve"},     {19, "nitten"},
      {18, "atten"},           {17, "sytten"},   {16, "seksten"},
      {15, "femten"},          {14, "fjorten"},  {13, "tretten"},
      {12, "tolv"},            {11, "elleve"},   {10, "ti"},
      {9, "ni"},               {8, "otte"},      {7, "syv"},
      {6, "seks"},             {5, "fem"},       {4, "fire"},
      {3, "tre"},              {2, "to"},        {1, "et"},
      {0, "nul"},
  };
  return LanguageSpec(Language::kDanish, std::move(lex), std::move(cards),
                      &MergeDanish, "-", " ", 1000);
}

LanguageSpec MakeFrench() {
  std::vector<LexiconEntry> lex = {
      {"zéro", R::kUnit, 0},         {"un", R::kUnit, 1},
      {"deux", R::kUnit, 2},         {"trois", R::kUnit, 3},
      {"quatre", R::kUnit, 4},       {"cinq", R::kUnit, 5},
      {"six", R::kUnit, 6},          {"sept", R::kUnit, 7},
      {"huit", R::kUnit, 8},         {"neuf", R::kUnit, 9},
      {"dix", R::kUnit, 10},         {"onze", R::kUnit, 11},
      {"douze", R::kUnit, 12},       {"treize", R::kUnit, 13},
      {"quatorze", R::kUnit, 14},    {"quinze", R::kUnit, 15},
      {"seize", R::kUnit, 16},       {"vingt", R::kTen, 20},
      {"vingts", R::kTen, 20},       {"trente", R::kTen, 30},
      {"quarante", R::kTen, 40},     {"cinquante", R::kTen, 50},
      {"soixante", R::kTen, 60},     {"cent", R::kScale, 100},
      {"cents", R::kScale, 100},     {"mille", R::kScale, 1000},
      {"million", R::kScale, kMillion}, {"millions", R::kScale, kMillion},
      {"et", R::kConnector, 0},
  };
  std::vector<LanguageSpec::Card> cards = {
      {kMillion, "million"}, {1000, "mille"},       {100, "cent"},
      {80, "quatre-vingts"}, {60, "soixante"},      {50, "cinquante"},
      {40, "quarante"},      {30, "trente"},        {20, "vingt"},
      {19, "dix-neuf"},      {18, "dix-huit"},      {17, "dix-sept"},
      {16, "seize"},         {15, "quinze"},        {14, "quatorze"},
      {13, "treize"},        {12, "douze"},         {11, "onze"},
      {10, "dix"},           {9, "neuf"},           {8, "huit"},
      {7, "sept"},           {6, "six"},            {5, "cinq"},
      {4, "quatre"},         {3, "trois"},          {2, "deux"},
      {1, "un"},             {0, "zéro"},
  };
  return LanguageSpec(Language::kFrench, std::move(lex), std::move(cards),
                      &MergeFrench, "-", " ", 1000);
}

LanguageSpec MakeJapanese() {
  std::vector<LexiconEntry> lex = {
      {"零", R::kUnit, 0},     {"一", R::kUnit, 1},     {"二", R::kUnit, 2},
      {"三", R::kUnit, 3},     {"四", R::kUnit, 4},     {"五", R::kUnit, 5},
      {"六", R::kUnit, 6},     {"七", R::kUnit, 7},     {"八", R::kUnit, 8},
      {"九", R::kUnit, 9},     {"十", R::kScale, 10},   {"百", R::kScale, 100},
      {"千", R::kScale, 1000}, {"万", R::kScale, 10'000},
      {"億", R::kScale, 100'000'000},
  };
  std::vector<LanguageSpec::Card> cards = {
      {100'000'000, "億"}, {10'000, "万"}, {1000, "千"}, {100, "百"},
      {10, "十"},          {9, "九"},      {8, "八"},    {7, "七"},
      {6, "六"},           {5, "五"},      {4, "四"},    {3, "三"},
      {2, "二"},           {1, "一"},      {0, "零"},
  };
  return LanguageSpec(Language::kJapanese, std::move(lex), std::move(cards),
                      &MergeJapanese, "", "", 10'000);
}

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::size_t Utf8Width(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;  // stray continuation byte: treat as its own unit
}

// Sums morphemes the way canonical forms compose: units and tens accumulate,
// small scales multiply the pending amount, group scales close a group.
// Returns the value and, on failure, the token index that broke it.
struct Evaluation {
  std::int64_t value = 0;
  std::optional<std::size_t> bad_token;
};

Evaluation Evaluate(
    const LanguageSpec& spec,
    const std::vector<std::vector<const LexiconEntry*>>& morphemes) {
  constexpr std::int64_t kLimit = 10 * kMaxValue;
  std::int64_t total = 0;
  std::int64_t group = 0;
  std::int64_t pending = 0;
  const LexiconEntry* prev = nullptr;
  for (std::size_t t = 0; t < morphemes.size(); ++t) {
    for (const LexiconEntry* m : morphemes[t]) {
      switch (m->role) {
        case TokenRole::kConnector:
          break;
        case TokenRole::kUnit:
          pending += m->weight;
          break;
        case TokenRole::kTen:
          // A unit directly before a ten multiplies it: quatre-vingt.
          if (prev != nullptr && prev->role == TokenRole::kUnit) {
            pending += prev->weight * (m->weight - 1);
          } else {
            pending += m->weight;
          }
          break;
        case TokenRole::kScale:
          if (m->weight < spec.group_scale()) {
            group += std::max<std::int64_t>(pending, 1) * m->weight;
            pending = 0;
          } else {
            total += std::max<std::int64_t>(group + pending, 1) * m->weight;
            group = 0;
            pending = 0;
          }
          break;
      }
      prev = m;
      if (total > kLimit || group > kLimit || pending > kLimit) {
        return {0, t};
      }
    }
  }
  return {total + group + pending, std::nullopt};
}

}  // namespace

// ---------------------------------------------------------------------------

Language ParseLanguage(std::string_view code) {
  std::string lower(code);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "en") return Language::kEnglish;
  if (lower == "da") return Language::kDanish;
  if (lower == "fr") return Language::kFrench;
  if (lower == "ja") return Language::kJapanese;
  throw UsageError("unsupported language '" + std::string(code) +
                   "' (expected en, da, fr or ja)");
}

std::string_view LanguageCode(Language lang) {
  switch (lang) {
    case Language::kEnglish:
      return "en";
    case Language::kDanish:
      return "da";
    case Language::kFrench:
      return "fr";
    case Language::kJapanese:
      return "ja";
  }
  return "??";
}

std::string_view TokenRoleName(TokenRole role) {
  switch (role) {
    case TokenRole::kUnit:
      return "unit";
    case TokenRole::kTen:
      return "ten";
    case TokenRole::kScale:
      return "scale";
    case TokenRole::kConnector:
      return "connector";
  }
  return "?";
}

LanguageSpec::LanguageSpec(Language language, std::vector<LexiconEntry> lexicon,
                           std::vector<Card> cards, MergeFn merge,
                           std::string_view separator_chars,
                           std::string_view fragment_joiner,
                           std::int64_t group_scale)
    : language_(language),
      lexicon_(std::move(lexicon)),
      cards_(std::move(cards)),
      merge_(merge),
      separator_chars_(separator_chars),
      fragment_joiner_(fragment_joiner),
      group_scale_(group_scale) {}

const LexiconEntry* LanguageSpec::Find(std::string_view morpheme) const {
  for (const auto& entry : lexicon_) {
    if (entry.surface == morpheme) return &entry;
  }
  return nullptr;
}

bool LanguageSpec::SegmentFrom(std::string_view rest,
                               std::vector<const LexiconEntry*>& out) const {
  if (rest.empty()) return true;
  // Longest match first, backtracking on dead ends ("tusindet" is
  // tusind + et, not tusinde + t).
  std::vector<const LexiconEntry*> candidates;
  for (const auto& entry : lexicon_) {
    if (rest.starts_with(entry.surface)) candidates.push_back(&entry);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const LexiconEntry* a, const LexiconEntry* b) {
              return a->surface.size() > b->surface.size();
            });
  for (const LexiconEntry* entry : candidates) {
    out.push_back(entry);
    if (SegmentFrom(rest.substr(entry->surface.size()), out)) return true;
    out.pop_back();
  }
  return false;
}

std::optional<std::vector<const LexiconEntry*>> LanguageSpec::Segment(
    std::string_view token) const {
  if (token.empty()) return std::nullopt;
  std::vector<const LexiconEntry*> out;
  if (language_ != Language::kDanish) {
    const LexiconEntry* entry = Find(token);
    if (entry == nullptr) return std::nullopt;
    out.push_back(entry);
    return out;
  }
  if (!SegmentFrom(token, out)) return std::nullopt;
  return out;
}

std::string LanguageSpec::DumpLexicon() const {
  std::ostringstream os;
  for (const auto& entry : lexicon_) {
    os << entry.surface << '\t' << TokenRoleName(entry.role) << '\t'
       << entry.weight << '\n';
  }
  return os.str();
}

const LanguageSpec& GetLanguageSpec(Language lang) {
  static const LanguageSpec kEnglish = MakeEnglish();
  static const LanguageSpec kDanish = MakeDanish();
  static const LanguageSpec kFrench = MakeFrench();
  static const LanguageSpec kJapanese = MakeJapanese();
  switch (lang) {
    case Language::kEnglish:
      return kEnglish;
    case Language::kDanish:
      return kDanish;
    case Language::kFrench:
      return kFrench;
    case Language::kJapanese:
      return kJapanese;
  }
  throw UsageError("unsupported language");
}

std::string Tokenization::Join() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out += separators[i];
    out += tokens[i];
  }
  out += separators.back();
  return out;
}

Tokenization SplitTokens(std::string_view surface, Language lang) {
  const LanguageSpec& spec = GetLanguageSpec(lang);
  const bool per_char = lang == Language::kJapanese;
  auto is_sep = [&](char c) {
    return IsAsciiSpace(c) ||
           spec.separator_chars().find(c) != std::string_view::npos;
  };

  Tokenization out;
  std::string sep;
  std::size_t i = 0;
  while (i < surface.size()) {
    if (is_sep(surface[i])) {
      sep += surface[i++];
      continue;
    }
    out.separators.push_back(std::move(sep));
    sep.clear();
    std::size_t end = i;
    if (per_char) {
      end = std::min(surface.size(),
                     i + Utf8Width(static_cast<unsigned char>(surface[i])));
    } else {
      while (end < surface.size() && !is_sep(surface[end])) ++end;
    }
    out.tokens.emplace_back(surface.substr(i, end - i));
    i = end;
  }
  out.separators.push_back(std::move(sep));
  return out;
}

std::vector<std::string> Tokenize(std::string_view surface, Language lang) {
  return SplitTokens(surface, lang).tokens;
}

std::string ToWords(std::int64_t value, Language lang) {
  if (value < 0 || value > kMaxValue) {
    throw RangeError("value " + std::to_string(value) +
                     " outside [0, 100000000]");
  }
  const LanguageSpec& spec = GetLanguageSpec(lang);
  Node root = Clean(spec, SplitNum(spec, value));
  return std::get<Term>(root.item).text;
}

std::int64_t ParseWords(std::string_view surface, Language lang) {
  const LanguageSpec& spec = GetLanguageSpec(lang);
  const Tokenization tok = SplitTokens(surface, lang);
  if (tok.tokens.empty()) throw ParseError("empty number word", 0);

  std::vector<std::vector<const LexiconEntry*>> morphemes;
  morphemes.reserve(tok.tokens.size());
  for (std::size_t i = 0; i < tok.tokens.size(); ++i) {
    auto seg = spec.Segment(tok.tokens[i]);
    if (!seg) {
      throw ParseError("unknown token '" + tok.tokens[i] + "'", i);
    }
    morphemes.push_back(std::move(*seg));
  }

  const Evaluation eval = Evaluate(spec, morphemes);
  if (eval.bad_token || eval.value > kMaxValue) {
    std::size_t pos = eval.bad_token.value_or(tok.tokens.size() - 1);
    throw ParseError("value out of range", pos);
  }

  // The additive reading is only a candidate; the surface must be exactly
  // its canonical rendering.
  const std::string canonical = ToWords(eval.value, lang);
  if (canonical == surface) return eval.value;

  const Tokenization want = SplitTokens(canonical, lang);
  std::size_t pos = 0;
  while (pos < tok.tokens.size() && pos < want.tokens.size() &&
         tok.tokens[pos] == want.tokens[pos] &&
         tok.separators[pos] == want.separators[pos]) {
    ++pos;
  }
  pos = std::min(pos, tok.tokens.size() - 1);
  throw ParseError("'" + tok.tokens[pos] + "' breaks canonical form", pos);
}

std::optional<std::int64_t> TryParseWords(std::string_view surface,
                                          Language lang) noexcept {
  try {
    return ParseWords(surface, lang);
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool IsGrammatical(std::string_view surface, Language lang) noexcept {
  return TryParseWords(surface, lang).has_value();
}

std::size_t SurfaceLength(std::string_view surface) {
  std::size_t n = 0;
  for (unsigned char c : surface) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace numprobe
