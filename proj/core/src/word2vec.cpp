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

#include "sidn/word2vec.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sidn/csv.hpp"
#include "sidn/error.hpp"
#include "sidn/io.hpp"
#include "sidn/layers.hpp"

namespace sidn {

void W2VConfig::validate() const {
  if (dim < 1 || window < 1 || negatives < 1 || epochs < 1 || !(initial_lr > 0.0)) {
    throw Error("invalid word2vec config: dim, window, negatives, epochs >= 1 and lr > 0");
  }
}

void WordVectors::add(std::string word, std::span<const double> vec) {
  if (vec.size() != dim_) throw Error("vector length differs from dim");
  auto [it, inserted] = lookup_.emplace(word, words_.size());
  if (!inserted) throw Error("duplicate word '" + word + "'");
  words_.push_back(std::move(word));
  values_.insert(values_.end(), vec.begin(), vec.end());
}

bool WordVectors::contains(std::string_view word) const {
  return lookup_.contains(std::string(word));
}

std::optional<std::span<const double>> WordVectors::find(std::string_view word) const {
  auto it = lookup_.find(std::string(word));
  if (it == lookup_.end()) return std::nullopt;
  return at(it->second);
}

std::string WordVectors::to_csv() const {
  std::string out = "word";
  for (std::size_t d = 0; d < dim_; ++d) out += ",d" + std::to_string(d);
  out += '\n';
  for (std::size_t r = 0; r < words_.size(); ++r) {
    out += csv_field(words_[r]);
    for (double v : at(r)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

WordVectors WordVectors::from_csv(std::string_view text) {
  CsvTable table = parse_csv(text);
  if (!table.issues.empty()) {
    throw Error("vectors csv line " + std::to_string(table.issues[0].line) + ": " +
                table.issues[0].message);
  }
  if (table.records.empty() || table.records[0].fields.empty() ||
      table.records[0].fields[0] != "word") {
    throw Error("vectors csv must start with header word,d0,...");
  }
  const std::size_t dim = table.records[0].fields.size() - 1;
  for (std::size_t d = 0; d < dim; ++d) {
    if (table.records[0].fields[d + 1] != "d" + std::to_string(d)) {
      throw Error("vectors csv header column " + std::to_string(d + 1) + " must be d" +
                  std::to_string(d));
    }
  }
  WordVectors out(dim);
  std::vector<double> vec(dim);
  for (std::size_t r = 1; r < table.records.size(); ++r) {
    const auto& rec = table.records[r];
    if (rec.fields.size() != dim + 1) {
      throw Error("vectors csv line " + std::to_string(rec.line) + ": wrong field count");
    }
    for (std::size_t d = 0; d < dim; ++d) vec[d] = parse_double(rec.fields[d + 1]);
    out.add(rec.fields[0], vec);
  }
  return out;
}

NegativeSampler::NegativeSampler(std::span<const std::size_t> counts, double power) {
  if (counts.empty()) throw Error("negative sampler needs at least one word");
  cumulative_.resize(counts.size());
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    total += std::pow(static_cast<double>(counts[i]), power);
    cumulative_[i] = total;
  }
  for (double& c : cumulative_) c /= total;
  cumulative_.back() = 1.0;
}

std::size_t NegativeSampler::sample(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

double NegativeSampler::probability(std::size_t id) const {
  return id == 0 ? cumulative_[0] : cumulative_[id] - cumulative_[id - 1];
}

CbowResult train_cbow_full(const std::vector<TokenList>& corpus, const W2VConfig& config) {
  config.validate();
  if (corpus.empty()) throw Error("degenerate corpus");

  // Word ids in order of first occurrence.
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<std::string> words;
  std::vector<std::size_t> counts;
  for (const auto& doc : corpus) {
    for (const auto& tok : doc) {
      auto [it, inserted] = ids.try_emplace(tok, words.size());
      if (inserted) {
        words.push_back(tok);
        counts.push_back(0);
      }
      ++counts[it->second];
    }
  }
  if (config.min_count > 1) {
    std::vector<std::string> kept_words;
    std::vector<std::size_t> kept_counts;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (counts[i] >= config.min_count) {
        kept_words.push_back(words[i]);
        kept_counts.push_back(counts[i]);
      }
    }
    words = std::move(kept_words);
    counts = std::move(kept_counts);
    ids.clear();
    for (std::size_t i = 0; i < words.size(); ++i) ids.emplace(words[i], i);
  }
  if (words.size() < 2) throw Error("degenerate corpus");

  std::vector<std::vector<std::size_t>> docs;
  docs.reserve(corpus.size());
  std::size_t total_tokens = 0;
  for (const auto& doc : corpus) {
    std::vector<std::size_t> d;
    for (const auto& tok : doc) {
      auto it = ids.find(tok);
      if (it != ids.end()) d.push_back(it->second);
    }
    total_tokens += d.size();
    docs.push_back(std::move(d));
  }

  const std::size_t dim = config.dim;
  const std::size_t V = words.size();
  Rng rng(config.seed);
  std::vector<double> syn0(V * dim);
  for (double& v : syn0) v = (rng.uniform() - 0.5) / static_cast<double>(dim);
  std::vector<double> syn1(V * dim, 0.0);
  NegativeSampler sampler(counts);

  const double total_updates = static_cast<double>(config.epochs * total_tokens);
  std::size_t processed = 0;
  std::vector<double> neu1(dim);
  std::vector<double> neu1e(dim);
  std::vector<std::size_t> context;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& doc : docs) {
      for (std::size_t p = 0; p < doc.size(); ++p, ++processed) {
        const double lr =
            config.initial_lr * (1.0 - 0.9 * static_cast<double>(processed) / total_updates);
        const std::size_t lo = p >= config.window ? p - config.window : 0;
        const std::size_t hi = std::min(doc.size() - 1, p + config.window);
        context.clear();
        for (std::size_t q = lo; q <= hi; ++q) {
          if (q != p) context.push_back(doc[q]);
        }
        if (context.empty()) continue;

        std::fill(neu1.begin(), neu1.end(), 0.0);
        for (std::size_t c : context) {
          const double* v = &syn0[c * dim];
          for (std::size_t k = 0; k < dim; ++k) neu1[k] += v[k];
        }
        const double inv = 1.0 / static_cast<double>(context.size());
        for (double& x : neu1) x *= inv;
        std::fill(neu1e.begin(), neu1e.end(), 0.0);

        const std::size_t center = doc[p];
        for (std::size_t s = 0; s <= config.negatives; ++s) {
          std::size_t target = center;
          double label = 1.0;
          if (s > 0) {
            target = sampler.sample(rng);
            if (target == center) continue;
            label = 0.0;
          }
          double* out = &syn1[target * dim];
          double f = 0.0;
          for (std::size_t k = 0; k < dim; ++k) f += neu1[k] * out[k];
          const double g = (label - sigmoid(f)) * lr;
          for (std::size_t k = 0; k < dim; ++k) neu1e[k] += g * out[k];
          for (std::size_t k = 0; k < dim; ++k) out[k] += g * neu1[k];
        }
        for (std::size_t c : context) {
          double* v = &syn0[c * dim];
          for (std::size_t k = 0; k < dim; ++k) v[k] += neu1e[k];
        }
      }
    }
  }

  CbowResult result{WordVectors(dim), WordVectors(dim)};
  for (std::size_t i = 0; i < V; ++i) {
    result.vectors.add(words[i], std::span<const double>(&syn0[i * dim], dim));
    result.context_vectors.add(words[i], std::span<const double>(&syn1[i * dim], dim));
  }
  return result;
}

WordVectors train_cbow(const std::vector<TokenList>& corpus, const W2VConfig& config) {
  return std::move(train_cbow_full(corpus, config).vectors);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error("cosine of vectors with different lengths");
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw Error("zero vector");
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

std::vector<std::pair<std::string, double>> most_similar(std::string_view word, std::size_t k,
                                                         const WordVectors& vectors) {
  if (k < 1) throw Error("k must be at least 1");
  auto query = vectors.find(word);
  if (!query) throw Error("not in vocabulary");
  std::vector<std::pair<std::string, double>> scored;
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    const auto& w = vectors.words()[r];
    if (w == word) continue;
    const auto v = vectors.at(r);
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) continue;
    scored.emplace_back(w, cosine(*query, v));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

Tensor build_embedding_matrix(const Vocabulary& vocab, const WordVectors& vectors) {
  const std::size_t dim = vectors.dim();
  Tensor emb({vocab.size() + 1, dim}, 0.0);
  for (std::size_t i = 1; i <= vocab.size(); ++i) {
    if (auto v = vectors.find(vocab.word_at(static_cast<TokenId>(i)))) {
      std::copy(v->begin(), v->end(), emb.row(i));
    }
  }
  return emb;
}

}  // namespace sidn
