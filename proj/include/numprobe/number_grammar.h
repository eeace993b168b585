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

#ifndef NUMPROBE_NUMBER_GRAMMAR_H_
#define NUMPROBE_NUMBER_GRAMMAR_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace numprobe {

enum class Language { kEnglish, kDanish, kFrench, kJapanese };

inline constexpr std::array<Language, 4> kAllLanguages = {
    Language::kEnglish, Language::kDanish, Language::kFrench,
    Language::kJapanese};

// Largest value with a canonical rendering.
inline constexpr std::int64_t kMaxValue = 100'000'000;

// Accepts "en", "da", "fr", "ja" (case-insensitive). Throws UsageError.
Language ParseLanguage(std::string_view code);
std::string_view LanguageCode(Language lang);

enum class TokenRole { kUnit, kTen, kScale, kConnector };

std::string_view TokenRoleName(TokenRole role);

struct LexiconEntry {
  std::string_view surface;
  TokenRole role;
  std::int64_t weight;
};

// One step of the canonical renderer: a card is a value with its word, and
// adjacent (text, value) terms are merged by a language-specific rule.
struct Term {
  std::string text;
  std::int64_t value;
};

// The lexical and compositional rules of one language. Instances are
// immutable and shared; obtain them with GetLanguageSpec().
class LanguageSpec {
 public:
  using MergeFn = Term (*)(const Term& left, const Term& right);

  struct Card {
    std::int64_t value;
    std::string_view text;
  };

  LanguageSpec(Language language, std::vector<LexiconEntry> lexicon,
               std::vector<Card> cards, MergeFn merge,
               std::string_view separator_chars,
               std::string_view fragment_joiner, std::int64_t group_scale);

  Language language() const { return language_; }

  // Morpheme-level lexicon. For EN, FR and JA every token is one entry; DA
  // writes compounds closed ("seksogfirs"), so a DA token is a run of entries.
  std::span<const LexiconEntry> lexicon() const { return lexicon_; }
  const LexiconEntry* Find(std::string_view morpheme) const;

  // Cards in strictly descending value order.
  std::span<const Card> cards() const { return cards_; }
  Term Merge(const Term& left, const Term& right) const {
    return merge_(left, right);
  }

  // Characters that separate tokens (besides ASCII whitespace).
  std::string_view separator_chars() const { return separator_chars_; }
  // String placed between fragments of different number words.
  std::string_view fragment_joiner() const { return fragment_joiner_; }
  // Scales at or above this value close a digit group (1000 for EN/DA/FR,
  // 10000 for JA); smaller scales multiply within the group.
  std::int64_t group_scale() const { return group_scale_; }

  // Splits one token into lexicon morphemes, or nullopt if impossible.
  std::optional<std::vector<const LexiconEntry*>> Segment(
      std::string_view token) const;
  bool IsLexiconToken(std::string_view token) const {
    return Segment(token).has_value();
  }

  // One "surface<TAB>role<TAB>weight" line per lexicon entry.
  std::string DumpLexicon() const;

 private:
  bool SegmentFrom(std::string_view rest,
                   std::vector<const LexiconEntry*>& out) const;

  Language language_;
  std::vector<LexiconEntry> lexicon_;
  std::vector<Card> cards_;
  MergeFn merge_;
  std::string_view separator_chars_;
  std::string_view fragment_joiner_;
  std::int64_t group_scale_;
};

const LanguageSpec& GetLanguageSpec(Language lang);

// Tokens of a surface plus the separator runs around them, so that
// separators[0] + tokens[0] + separators[1] + ... + separators[n] == surface.
struct Tokenization {
  std::vector<std::string> tokens;
  std::vector<std::string> separators;  // tokens.size() + 1 entries

  std::string Join() const;
};

// EN/DA/FR split on whitespace, hyphens (and EN commas); JA splits per
// character. Total over arbitrary UTF-8 input.
Tokenization SplitTokens(std::string_view surface, Language lang);
std::vector<std::string> Tokenize(std::string_view surface, Language lang);

// Canonical spelled-out form of `value` in [0, kMaxValue]. Throws RangeError.
std::string ToWords(std::int64_t value, Language lang);

// Inverse of ToWords under strict canonical matching. Throws ParseError
// carrying the position of the first offending token.
std::int64_t ParseWords(std::string_view surface, Language lang);

std::optional<std::int64_t> TryParseWords(std::string_view surface,
                                          Language lang) noexcept;

bool IsGrammatical(std::string_view surface, Language lang) noexcept;

// Number of Unicode code points; the unit for surface-length limits.
std::size_t SurfaceLength(std::string_view surface);

}  // namespace numprobe

#endif  // NUMPROBE_NUMBER_GRAMMAR_H_
