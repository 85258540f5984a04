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

#ifndef SIDN_TEXTPREP_HPP_
#define SIDN_TEXTPREP_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sidn {

inline constexpr std::size_t kDefaultVocabSize = 2000;
inline constexpr std::size_t kDefaultMaxLen = 100;

struct RawDocument {
  std::string text;
  std::optional<int> label;  // 1 = suicidal, 0 = non-suicidal
};

using TokenList = std::vector<std::string>;
using StopwordSet = std::unordered_set<std::string>;

// Token index type; 0 is the padding index.
using TokenId = std::uint32_t;

struct EncodedSequence {
  std::vector<TokenId> indices;
  std::size_t n_real = 0;

  std::size_t maxlen() const { return indices.size(); }
  // First non-padding position.
  std::size_t first_real() const { return indices.size() - n_real; }
  bool operator==(const EncodedSequence&) const = default;
};

// Frequency-ranked word index. Indices are 1..size(); 0 is never assigned.
class Vocabulary {
 public:
  struct Entry {
    std::string word;
    std::size_t frequency = 0;
  };

  Vocabulary() = default;
  // Entries must already be in rank order (index i + 1 for entries[i]).
  explicit Vocabulary(std::vector<Entry> ranked);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::optional<TokenId> index_of(std::string_view word) const;
  // word for index in [1, size()]; throws otherwise.
  const std::string& word_at(TokenId index) const;
  std::size_t frequency_at(TokenId index) const;
  const std::vector<Entry>& entries() const { return entries_; }

  // CSV "word,index,frequency".
  std::string to_csv() const;
  static Vocabulary from_csv(std::string_view text);

  bool operator==(const Vocabulary& other) const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, TokenId> lookup_;
};

// Lowercases ASCII letters, keeps digits, replaces every other byte with a
// space, then collapses and trims whitespace.
std::string normalize(std::string_view text);
// Splits on spaces and drops purely numeric tokens.
TokenList tokenize(std::string_view normalized);
TokenList remove_stopwords(const TokenList& tokens, const StopwordSet& stoplist);
// Porter (1980) stemmer.
std::string stem(std::string_view word);
TokenList stem_all(const TokenList& tokens);

// normalize -> tokenize -> remove_stopwords -> stem.
TokenList to_tokens(std::string_view text, const StopwordSet& stoplist);
TokenList to_tokens(std::string_view text);

Vocabulary build_vocabulary(const std::vector<TokenList>& corpus,
                            std::size_t max_size = kDefaultVocabSize);
// Out-of-vocabulary tokens are dropped.
std::vector<TokenId> encode(const TokenList& tokens, const Vocabulary& vocab);
// Pre-pads with zeros, pre-truncates keeping the final maxlen entries.
EncodedSequence pad_truncate(const std::vector<TokenId>& indices,
                             std::size_t maxlen = kDefaultMaxLen);
EncodedSequence preprocess_document(const RawDocument& doc, const Vocabulary& vocab,
                                    std::size_t maxlen, const StopwordSet& stoplist);
EncodedSequence preprocess_document(const RawDocument& doc, const Vocabulary& vocab,
                                    std::size_t maxlen = kDefaultMaxLen);

// The shipped stopword list (core/data/stopwords.txt).
const StopwordSet& default_stopwords();
const std::vector<std::string>& default_stopword_list();
StopwordSet parse_stopwords(std::string_view text);

}  // namespace sidn

#endif  // SIDN_TEXTPREP_HPP_
