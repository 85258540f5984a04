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

#ifndef SIDN_WORD2VEC_HPP_
#define SIDN_WORD2VEC_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sidn/rng.hpp"
#include "sidn/tensor.hpp"
#include "sidn/textprep.hpp"

namespace sidn {

struct W2VConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double initial_lr = 0.025;
  std::size_t min_count = 1;
  std::uint64_t seed = 1;

  void validate() const;
};

// Word -> dense vector. Rows keep the order in which words were added.
class WordVectors {
 public:
  WordVectors() = default;
  explicit WordVectors(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  void add(std::string word, std::span<const double> vec);
  bool contains(std::string_view word) const;
  std::optional<std::span<const double>> find(std::string_view word) const;
  std::span<const double> at(std::size_t row) const {
    return {values_.data() + row * dim_, dim_};
  }
  std::span<double> at(std::size_t row) { return {values_.data() + row * dim_, dim_}; }

  // CSV with header word,d0..d{dim-1}.
  std::string to_csv() const;
  static WordVectors from_csv(std::string_view text);

  bool operator==(const WordVectors& other) const {
    return dim_ == other.dim_ && words_ == other.words_ && values_ == other.values_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

// Unigram^0.75 sampler over word ids via a cumulative table.
class NegativeSampler {
 public:
  explicit NegativeSampler(std::span<const std::size_t> counts, double power = 0.75);
  std::size_t sample(Rng& rng) const;
  double probability(std::size_t id) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

struct CbowResult {
  WordVectors vectors;          // input ("syn0") vectors
  WordVectors context_vectors;  // output ("syn1neg") vectors
};

// CBOW with negative sampling, single worker, deterministic given the seed.
CbowResult train_cbow_full(const std::vector<TokenList>& corpus, const W2VConfig& config);
WordVectors train_cbow(const std::vector<TokenList>& corpus, const W2VConfig& config);

// Throws "zero vector" for a zero-norm argument.
double cosine(std::span<const double> u, std::span<const double> v);

std::vector<std::pair<std::string, double>> most_similar(std::string_view word, std::size_t k,
                                                         const WordVectors& vectors);

// (K + 1) x dim; row 0 and rows for words without a vector are zero.
Tensor build_embedding_matrix(const Vocabulary& vocab, const WordVectors& vectors);

}  // namespace sidn

#endif  // SIDN_WORD2VEC_HPP_
