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


#include <benchmark/benchmark.h>

#include <vector>

#include "sidn/explain.hpp"
#include "sidn/metrics.hpp"
#include "sidn/model.hpp"
#include "sidn/rng.hpp"
#include "sidn/synthetic.hpp"
#include "sidn/textprep.hpp"
#include "sidn/trainer.hpp"

namespace {

using namespace sidn;

Tensor random_embedding(std::size_t rows, std::size_t dim, Rng& rng) {
  Tensor t({rows, dim});
  for (double& v : t.data()) v = 0.1 * rng.normal();
  return t;
}

std::vector<EncodedSequence> random_batch(std::size_t n, std::size_t vocab, std::size_t maxlen,
                                          Rng& rng) {
  std::vector<EncodedSequence> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<TokenId> ids;
    const std::size_t len = 1 + rng.below(maxlen);
    for (std::size_t k = 0; k < len; ++k) ids.push_back(static_cast<TokenId>(1 + rng.below(vocab)));
    out.push_back(pad_truncate(ids, maxlen));
  }
  return out;
}

ModelConfig small_config() {
  ModelConfig c = ModelConfig::finetuned();
  c.vocab_size = 500;
  c.maxlen = 40;
  c.emb_dim = 32;
  c.conv_filters = 32;
  c.lstm_units = 16;
  c.dense_units = 16;
  return c;
}

void BM_Preprocess(benchmark::State& state) {
  SyntheticSpec spec;
  spec.n_docs = 200;
  const auto corpus = generate_corpus(spec);
  for (auto _ : state) {
    std::size_t n = 0;
    for (const auto& d : corpus.docs) n += to_tokens(d.text).size();
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(corpus.docs.size()));
}
BENCHMARK(BM_Preprocess);

void BM_Stem(benchmark::State& state) {
  const std::vector<std::string> words = {"caresses", "running", "relational", "generalizations",
                                          "hopefulness", "controlling", "sky", "abilities"};
  for (auto _ : state) {
    for (const auto& w : words) benchmark::DoNotOptimize(stem(w));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(words.size()));
}
BENCHMARK(BM_Stem);

void BM_Infer(benchmark::State& state) {
  Rng rng(1);
  const ModelConfig c = small_config();
  const Model model = build_model(c, random_embedding(c.vocab_size + 1, c.emb_dim, rng), 2);
  const auto batch = random_batch(static_cast<std::size_t>(state.range(0)), c.vocab_size, c.maxlen, rng);
  for (auto _ : state) benchmark::DoNotOptimize(infer(model, batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Infer)->Arg(1)->Arg(32);

void BM_LossAndGrads(benchmark::State& state) {
  Rng rng(1);
  const ModelConfig c = small_config();
  Model model = build_model(c, random_embedding(c.vocab_size + 1, c.emb_dim, rng), 2);
  const auto batch = random_batch(32, c.vocab_size, c.maxlen, rng);
  std::vector<int> labels(batch.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 2);
  Rng drop(3);
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_grads(model, batch, labels, drop));
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_LossAndGrads);

void BM_KernelShap(benchmark::State& state) {
  Rng rng(1);
  const ModelConfig c = small_config();
  const Model model = build_model(c, random_embedding(c.vocab_size + 1, c.emb_dim, rng), 2);
  const auto seq = random_batch(1, c.vocab_size, 10, rng)[0];
  EncodedSequence padded = pad_truncate(std::vector<TokenId>(seq.indices.end() - static_cast<long>(seq.n_real), seq.indices.end()), c.maxlen);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_shap(model, padded, static_cast<std::size_t>(state.range(0)), 5));
  }
}
BENCHMARK(BM_KernelShap)->Arg(64)->Arg(512);

void BM_AucPaircount(benchmark::State& state) {
  Rng rng(1);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> scores(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.uniform();
    labels[i] = static_cast<int>(i % 2);
  }
  for (auto _ : state) benchmark::DoNotOptimize(auc_paircount(scores, labels));
}
BENCHMARK(BM_AucPaircount)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
