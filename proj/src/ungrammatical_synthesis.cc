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

#include "numprobe/ungrammatical_synthesis.h"

#include <algorithm>
#include <limits>

#include "numprobe/errors.h"

namespace numprobe {
namespace {

constexpr std::int64_t kCacheLimit = 100'000;
constexpr std::int64_t kScanLimit = 2'000'000;

// Byte offsets [begin, end) of each token inside the surface.
std::vector<std::pair<std::size_t, std::size_t>> TokenSpans(
    const Tokenization& tok) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t at = 0;
  for (std::size_t i = 0; i < tok.tokens.size(); ++i) {
    at += tok.separators[i].size();
    spans.emplace_back(at, at + tok.tokens[i].size());
    at += tok.tokens[i].size();
  }
  return spans;
}

void CheckRange(std::int64_t lo, std::int64_t hi) {
  if (lo < 0 || hi > kMaxValue || lo > hi) {
    throw UsageError("value range [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "] not within [0, 100000000]");
  }
  if (hi - lo >= kScanLimit) {
    throw UsageError("value range too wide to scan; set max_length");
  }
}

}  // namespace

std::vector<CutSet> SplitPoints(std::string_view word, Language lang) {
  const LanguageSpec& spec = GetLanguageSpec(lang);
  const Tokenization tok = SplitTokens(word, lang);
  const std::size_t n = tok.tokens.size();
  if (n == 0) return {};
  const auto spans = TokenSpans(tok);

  // ok[i][j]: tokens [i, j) form an admissible fragment.
  std::vector<std::vector<bool>> ok(n + 1, std::vector<bool>(n + 1, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      const std::string_view frag =
          word.substr(spans[i].first, spans[j - 1].second - spans[i].first);
      ok[i][j] = (j == i + 1 && spec.IsLexiconToken(tok.tokens[i])) ||
                 IsGrammatical(frag, lang);
    }
  }

  std::vector<CutSet> out;
  CutSet current;
  // Depth-first over fragment ends, emitting cut sets in lexicographic order
  // of their first fragment length (longest first, so the no-cut split leads).
  auto walk = [&](auto&& self, std::size_t start) -> void {
    if (start == n) {
      out.push_back(current);
      return;
    }
    for (std::size_t end = n; end > start; --end) {
      if (!ok[start][end]) continue;
      if (end < n) current.push_back(end);
      self(self, end);
      if (end < n) current.pop_back();
    }
  };
  walk(walk, 0);
  return out;
}

std::vector<std::string> CutFragments(std::string_view word, Language lang,
                                      const CutSet& cuts) {
  const Tokenization tok = SplitTokens(word, lang);
  const auto spans = TokenSpans(tok);
  std::vector<std::string> out;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    out.emplace_back(word.substr(spans[start].first,
                                 spans[end - 1].second - spans[start].first));
    start = end;
  };
  for (std::size_t cut : cuts) emit(cut);
  emit(tok.tokens.size());
  return out;
}

std::size_t LongestSurface(Language lang, std::int64_t lo, std::int64_t hi) {
  CheckRange(lo, hi);
  std::size_t best = 0;
  for (std::int64_t v = lo; v <= hi; ++v) {
    best = std::max(best, SurfaceLength(ToWords(v, lang)));
  }
  return best;
}

std::size_t ShortestSurface(Language lang, std::int64_t lo, std::int64_t hi) {
  CheckRange(lo, hi);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::int64_t v = lo; v <= hi; ++v) {
    best = std::min(best, SurfaceLength(ToWords(v, lang)));
  }
  return best;
}

UngrammaticalSynthesizer::UngrammaticalSynthesizer(const SynthConfig& config)
    : config_(config) {
  const std::size_t shortest =
      ShortestSurface(config.language, config.min_value, config.max_value);
  max_length_ = config.max_length.value_or(
      LongestSurface(config.language, config.min_value, config.max_value));
  if (max_length_ < shortest) {
    throw UsageError("max surface length " + std::to_string(max_length_) +
                     " is below the shortest canonical surface (" +
                     std::to_string(shortest) + ")");
  }
  if (config.max_value - config.min_value < kCacheLimit) {
    cache_.reserve(config.max_value - config.min_value + 1);
    for (std::int64_t v = config.min_value; v <= config.max_value; ++v) {
      std::string surface = ToWords(v, config.language);
      auto splits = SplitPoints(surface, config.language);
      cache_.push_back({std::move(surface), std::move(splits)});
    }
  }
}

UngrammaticalSynthesizer::Word UngrammaticalSynthesizer::WordFor(
    std::int64_t value) const {
  if (!cache_.empty()) return cache_[value - config_.min_value];
  std::string surface = ToWords(value, config_.language);
  auto splits = SplitPoints(surface, config_.language);
  return {std::move(surface), std::move(splits)};
}

SynthResult UngrammaticalSynthesizer::GenerateDetailed(Rng& rng) const {
  const Language lang = config_.language;
  const std::string_view joiner = GetLanguageSpec(lang).fragment_joiner();
  if (config_.max_value == config_.min_value) {
    throw SynthesisError("cannot draw two distinct values from [" +
                         std::to_string(config_.min_value) + ", " +
                         std::to_string(config_.max_value) + "]");
  }
  for (int attempt = 0; attempt < kSynthesisAttempts; ++attempt) {
    const std::int64_t a = rng.UniformInt(config_.min_value, config_.max_value);
    std::int64_t b;
    do {
      b = rng.UniformInt(config_.min_value, config_.max_value);
    } while (b == a);

    const Word wa = WordFor(a);
    const Word wb = WordFor(b);
    const auto fa = CutFragments(wa.surface, lang,
                                 wa.splits[rng.Index(wa.splits.size())]);
    const auto fb = CutFragments(wb.surface, lang,
                                 wb.splits[rng.Index(wb.splits.size())]);

    // Uniform order-preserving interleaving of the two fragment lists.
    SynthResult result{"", a, b, {}};
    std::size_t ia = 0;
    std::size_t ib = 0;
    while (ia < fa.size() || ib < fb.size()) {
      const std::size_t ra = fa.size() - ia;
      const std::size_t rb = fb.size() - ib;
      const bool take_a = rng.Index(ra + rb) < ra;
      if (take_a) {
        result.fragments.push_back({fa[ia], 0, ia});
        ++ia;
      } else {
        result.fragments.push_back({fb[ib], 1, ib});
        ++ib;
      }
    }
    for (std::size_t i = 0; i < result.fragments.size(); ++i) {
      if (i > 0) result.text += joiner;
      result.text += result.fragments[i].text;
    }
    if (SurfaceLength(result.text) <= max_length_ &&
        !IsGrammatical(result.text, lang)) {
      return result;
    }
  }
  throw SynthesisError("no ungrammatical string within length " +
                       std::to_string(max_length_) + " after " +
                       std::to_string(kSynthesisAttempts) + " attempts");
}

}  // namespace numprobe
