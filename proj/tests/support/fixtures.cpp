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


#include "fixtures.hpp"

#include <map>

#include "sidn/io.hpp"
#include "sidn/synthetic.hpp"
#include "sidn/word2vec.hpp"

namespace sidn::testing {

PlantedData planted_data(std::size_t n_docs, std::size_t vocab_size, std::size_t maxlen,
                         std::size_t emb_dim, double noise, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_docs = n_docs;
  spec.noise = noise;
  spec.seed = seed;
  const SyntheticCorpus corpus = generate_corpus(spec);

  std::vector<TokenList> tokens;
  std::vector<int> labels;
  for (const auto& d : corpus.docs) {
    tokens.push_back(to_tokens(d.text));
    labels.push_back(*d.label);
  }
  PlantedData out;
  out.data.maxlen = maxlen;
  out.data.labels = labels;
  out.data.splits = split(n_docs, labels, seed + 1);
  std::vector<TokenList> train_tokens;
  for (std::size_t i : out.data.splits.train) train_tokens.push_back(tokens[i]);
  out.vocab = build_vocabulary(train_tokens, vocab_size);
  for (const auto& t : tokens) out.data.sequences.push_back(pad_truncate(encode(t, out.vocab), maxlen));

  W2VConfig w2v;
  w2v.dim = emb_dim;
  w2v.seed = seed + 2;
  out.embedding = build_embedding_matrix(out.vocab, train_cbow(train_tokens, w2v));
  return out;
}

std::string weights_digest(const Model& model) { return fnv1a_hex(save_weights(model)); }

EarlyStopOutcome scripted_fit(const std::vector<double>& losses, std::size_t patience,
                              std::size_t epochs_max) {
  const PlantedData p = planted_data(40, 50, 10, 4, 0.0, 3);
  ModelConfig c = ModelConfig::baseline();
  c.vocab_size = p.vocab.size();
  c.maxlen = 10;
  c.emb_dim = 4;
  c.conv_filters = 3;
  c.kernel = 3;
  c.lstm_units = 2;
  c.dense_units = 3;
  TrainConfig tc;
  tc.patience = patience;
  tc.epochs_max = epochs_max;
  tc.batch_size = 8;
  tc.lr = 1e-3;

  std::map<std::string, double> injected;
  FitHooks hooks;
  hooks.val_loss = [&](const Model& m, std::size_t epoch, double) {
    const double v = losses[std::min(epoch, losses.size()) - 1];
    injected[weights_digest(m)] = v;
    return v;
  };
  const FitResult r = fit(build_model(c, p.embedding, 4), p.data, p.data.splits, tc, hooks);
  EarlyStopOutcome o;
  o.best_epoch = r.history.best_epoch;
  o.stopped_epoch = r.history.stopped_epoch;
  o.epochs_run = r.history.epochs.size();
  const auto it = injected.find(weights_digest(r.model));
  if (it != injected.end()) o.restored_val_loss = it->second;
  return o;
}

OverfitOutcome overfit_run(std::uint64_t seed, std::size_t max_epochs) {
  const PlantedData p = planted_data(64, 200, 20, 100, 0.0, seed);
  ModelConfig c = ModelConfig::baseline();
  c.vocab_size = p.vocab.size();
  c.maxlen = 20;
  c.emb_dim = 100;
  c.conv_filters = 16;
  c.lstm_units = 8;
  Model model = build_model(c, p.embedding, seed + 3);

  std::vector<std::size_t> all(p.data.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  TrainConfig tc;
  tc.lr = 1e-3;
  tc.batch_size = 16;
  AdamState adam = AdamState::for_params(model.params);
  Rng rng(seed + 4);
  OverfitOutcome o;
  for (std::size_t e = 1; e <= max_epochs; ++e) {
    train_epoch(model, p.data, all, tc, adam, rng);
    o.accuracy = evaluate_epoch(model, p.data, all).accuracy;
    if (o.accuracy == 1.0) {
      o.epochs = e;
      break;
    }
  }
  return o;
}

}  // namespace sidn::testing
