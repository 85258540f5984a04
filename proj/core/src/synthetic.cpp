// Copyright 2026 The SIDN Authors.
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

#include "sidn/synthetic.hpp"

#include <algorithm>
#include <set>

#include "sidn/error.hpp"
#include "sidn/rng.hpp"

namespace sidn {

namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

// Pronounceable pseudo-word of 2-3 consonant-vowel syllables plus a closing
// consonant, accepted only when it is its own stem and not a stopword.
std::string pseudo_word(Rng& rng) {
  std::string w;
  const std::size_t syllables = 2 + rng.below(2);
  for (std::size_t i = 0; i < syllables; ++i) {
    w += kConsonants[rng.below(kConsonants.size())];
    w += kVowels[rng.below(kVowels.size())];
  }
  w += kConsonants[rng.below(kConsonants.size())];
  return w;
}

std::vector<std::string> draw_lexicon(std::size_t n, Rng& rng, std::set<std::string>& taken) {
  const StopwordSet& stop = default_stopwords();
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string w = pseudo_word(rng);
    if (stem(w) != w || stop.contains(w) || taken.contains(w)) continue;
    taken.insert(w);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n_docs < 2) throw Error("n_docs must be at least 2");
  if (risk_lexicon < 1 || neutral_lexicon < 1) throw Error("lexicons must be nonempty");
  if (min_len < 1 || max_len < min_len) throw Error("invalid document length range");
  if (!(noise >= 0.0 && noise < 0.5)) throw Error("noise must be in [0, 0.5)");
}

SyntheticCorpus generate_corpus(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::set<std::string> taken;
  SyntheticCorpus c;
  c.risk_words = draw_lexicon(spec.risk_lexicon, rng, taken);
  c.neutral_words = draw_lexicon(spec.neutral_lexicon, rng, taken);

  for (std::size_t i = 0; i < spec.n_docs; ++i) {
    const bool risk = i % 2 == 0;
    const std::size_t len = spec.min_len + rng.below(spec.max_len - spec.min_len + 1);
    std::vector<std::string> words(len);
    for (auto& w : words) w = c.neutral_words[rng.below(c.neutral_words.size())];
    if (risk) {
      const std::size_t planted = std::min<std::size_t>(len, 1 + rng.below(3));
      for (std::size_t k = 0; k < planted; ++k) {
        words[rng.below(len)] = c.risk_words[rng.below(c.risk_words.size())];
      }
    }
    std::string text;
    for (const auto& w : words) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    const int label = presence_rule(text, c.risk_words);
    c.docs.push_back({std::move(text), label});
  }

  Rng noise_rng = rng.fork(0x6e6f697365ULL);
  for (std::size_t i = 0; i + 1 < c.docs.size(); i += 2) {
    if (noise_rng.bernoulli(spec.noise)) std::swap(c.docs[i].label, c.docs[i + 1].label);
  }
  return c;
}

int presence_rule(std::string_view text, const std::vector<std::string>& risk_words) {
  std::set<std::string> stems;
  for (const auto& w : risk_words) stems.insert(stem(w));
  for (const auto& t : to_tokens(text)) {
    if (stems.contains(t)) return 1;
  }
  return 0;
}

}  // namespace sidn
