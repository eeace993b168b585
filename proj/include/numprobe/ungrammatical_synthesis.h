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

#ifndef NUMPROBE_UNGRAMMATICAL_SYNTHESIS_H_
#define NUMPROBE_UNGRAMMATICAL_SYNTHESIS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "numprobe/number_grammar.h"
#include "numprobe/random.h"

namespace numprobe {

inline constexpr int kSynthesisAttempts = 1000;

struct SynthConfig {
  Language language = Language::kEnglish;
  std::int64_t min_value = 0;
  std::int64_t max_value = 999;
  // Code points. Unset means the longest canonical surface in the range.
  std::optional<std::size_t> max_length;
  std::uint64_t seed = 1;
};

// A way to cut a word's token sequence: the token indices at which a new
// fragment starts, excluding 0. The empty set is the no-cut split.
using CutSet = std::vector<std::size_t>;

// Every cut whose fragments are each a grammatical number word or a single
// lexicon token.
std::vector<CutSet> SplitPoints(std::string_view word, Language lang);

// Fragment texts of `word` under `cuts`, internal separators preserved.
std::vector<std::string> CutFragments(std::string_view word, Language lang,
                                      const CutSet& cuts);

// Longest / shortest canonical surface, in code points, over [lo, hi].
std::size_t LongestSurface(Language lang, std::int64_t lo, std::int64_t hi);
std::size_t ShortestSurface(Language lang, std::int64_t lo, std::int64_t hi);

struct SynthFragment {
  std::string text;
  int source;  // 0 or 1: which of the two drawn words it came from
  std::size_t index;  // position within that word's fragment list
};

struct SynthResult {
  std::string text;
  std::int64_t first_value;
  std::int64_t second_value;
  std::vector<SynthFragment> fragments;
};

// Builds ungrammatical strings by interleaving fragments of two distinct
// canonical words. Immutable after construction; each caller supplies its
// own Rng.
class UngrammaticalSynthesizer {
 public:
  // Throws UsageError on an invalid config.
  explicit UngrammaticalSynthesizer(const SynthConfig& config);

  const SynthConfig& config() const { return config_; }
  std::size_t max_length() const { return max_length_; }

  // Throws SynthesisError after kSynthesisAttempts rejected candidates.
  SynthResult GenerateDetailed(Rng& rng) const;
  std::string Generate(Rng& rng) const { return GenerateDetailed(rng).text; }

 private:
  struct Word {
    std::string surface;
    std::vector<CutSet> splits;
  };

  Word WordFor(std::int64_t value) const;

  SynthConfig config_;
  std::size_t max_length_;
  // Precomputed for small ranges; empty otherwise.
  std::vector<Word> cache_;
};

// Convenience: a synthesizer with its own generator seeded from config.seed.
class SynthesisStream {
 public:
  explicit SynthesisStream(const SynthConfig& config)
      : synth_(config), rng_(config.seed) {}

  std::string Next() { return synth_.Generate(rng_); }
  SynthResult NextDetailed() { return synth_.GenerateDetailed(rng_); }
  const UngrammaticalSynthesizer& synthesizer() const { return synth_; }

 private:
  UngrammaticalSynthesizer synth_;
  Rng rng_;
};

}  // namespace numprobe

#endif  // NUMPROBE_UNGRAMMATICAL_SYNTHESIS_H_
