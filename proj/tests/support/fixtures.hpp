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


#ifndef SIDN_TESTS_FIXTURES_HPP_
#define SIDN_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sidn/dataset.hpp"
#include "sidn/model.hpp"
#include "sidn/trainer.hpp"

namespace sidn::testing {

// Planted synthetic corpus, preprocessed and split like the CLI does it.
struct PlantedData {
  EncodedDataset data;
  Vocabulary vocab;
  Tensor embedding;  // CBOW vectors over the training split
};

PlantedData planted_data(std::size_t n_docs, std::size_t vocab_size, std::size_t maxlen,
                         std::size_t emb_dim, double noise, std::uint64_t seed);

// Weights digest, used to key injected validation losses.
std::string weights_digest(const Model& model);

struct EarlyStopOutcome {
  std::size_t best_epoch = 0;
  std::size_t stopped_epoch = 0;
  std::size_t epochs_run = 0;
  double restored_val_loss = -1.0;  // injected value looked up by digest
};

// Runs fit with the validation losses replaced by `losses` (epoch e gets
// losses[e - 1]; later epochs repeat the last value).
EarlyStopOutcome scripted_fit(const std::vector<double>& losses, std::size_t patience,
                              std::size_t epochs_max);

struct OverfitOutcome {
  std::size_t epochs = 0;  // first epoch with train accuracy 1.0 (0 if never)
  double accuracy = 0.0;   // final inference-mode train accuracy
};

// 64 documents, vocab 200, maxlen 20, 16 filters, H = 8.
OverfitOutcome overfit_run(std::uint64_t seed, std::size_t max_epochs);

}  // namespace sidn::testing

#endif  // SIDN_TESTS_FIXTURES_HPP_
