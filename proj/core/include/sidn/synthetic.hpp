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

#ifndef SIDN_SYNTHETIC_HPP_
#define SIDN_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sidn/textprep.hpp"

namespace sidn {

// Desk-scale stand-in corpus: a document is labelled 1 iff it contains a
// risk-lexicon word, then labels are flipped with probability `noise`.
struct SyntheticSpec {
  std::size_t n_docs = 2000;
  std::size_t risk_lexicon = 16;
  std::size_t neutral_lexicon = 300;
  std::size_t min_len = 8;
  std::size_t max_len = 30;
  double noise = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticCorpus {
  std::vector<RawDocument> docs;
  std::vector<std::string> risk_words;
  std::vector<std::string> neutral_words;
};

// Classes alternate so the corpus is balanced to within one document. Label
// noise flips consecutive (positive, negative) pairs together, which keeps
// the balance while flipping each label with probability `noise`.
SyntheticCorpus generate_corpus(const SyntheticSpec& spec);

// 1 iff the text contains a risk word after preprocessing.
int presence_rule(std::string_view text, const std::vector<std::string>& risk_words);

}  // namespace sidn

#endif  // SIDN_SYNTHETIC_HPP_
