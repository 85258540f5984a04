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

#ifndef SIDN_DATASET_HPP_
#define SIDN_DATASET_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sidn/csv.hpp"
#include "sidn/textprep.hpp"

namespace sidn {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
  bool operator==(const SplitIndices&) const = default;
};

// Corpus CSV with header text,label; labels "suicide" -> 1, "non-suicide" -> 0.
struct CorpusLoad {
  std::vector<RawDocument> docs;
  std::vector<std::size_t> doc_lines;  // source line of each doc
  std::vector<CsvIssue> errors;
};

CorpusLoad parse_corpus_csv(std::string_view text);
std::string corpus_to_csv(const std::vector<RawDocument>& docs);
std::string label_name(int label);

// Padded sequences with labels and the split they were built with.
struct EncodedDataset {
  std::size_t maxlen = kDefaultMaxLen;
  std::vector<EncodedSequence> sequences;
  std::vector<int> labels;
  SplitIndices splits;

  std::size_t size() const { return sequences.size(); }
  bool operator==(const EncodedDataset&) const = default;
};

// Binary layout: "SIDE", u32 version, u32 maxlen, u64 count, then per row
// u8 label + u32 n_real + maxlen x u32 indices, then the three split lists
// as u64 length + u64 entries. Little-endian throughout.
std::string encode_dataset(const EncodedDataset& ds);
EncodedDataset decode_dataset(std::string_view bytes);

// Token lists for CBOW training recovered from the padded sequences.
std::vector<TokenList> decode_tokens(const EncodedDataset& ds, const Vocabulary& vocab,
                                     const std::vector<std::size_t>& rows);

}  // namespace sidn

#endif  // SIDN_DATASET_HPP_
