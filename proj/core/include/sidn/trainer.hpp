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

#ifndef SIDN_TRAINER_HPP_
#define SIDN_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sidn/dataset.hpp"
#include "sidn/model.hpp"
#include "sidn/rng.hpp"

namespace sidn {

struct TrainConfig {
  std::size_t epochs_max = 40;
  std::size_t batch_size = 512;
  double lr = 0.0001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t patience = 4;
  std::uint64_t seed = 1;
  bool shuffle = true;

  void validate() const;
};

// Stratified 80/10/10 split, deterministic given seed.
// Throws "dataset too small to split" when n < 10.
SplitIndices split(std::size_t n, std::span<const int> labels, std::uint64_t seed);

struct AdamState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::size_t t = 0;

  static AdamState for_params(const ModelParams& params);
};

// One Adam step over the trainable tensors of `params`.
void adam_update(ModelParams& params, const ModelParams& grads, AdamState& state,
                 const TrainConfig& cfg);
// Single-tensor form.
void adam_step(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v, std::size_t t,
               const TrainConfig& cfg);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
};

struct TrainingHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  std::size_t stopped_epoch = 0;

  // CSV "epoch,train_loss,train_acc,val_loss,val_acc".
  std::string to_csv() const;
};

struct EvalResult {
  double loss = 0.0;
  double accuracy = 0.0;
};

// Inference-mode mean bce and threshold-0.5 accuracy. Throws on empty split.
EvalResult evaluate_epoch(const Model& model, const EncodedDataset& data,
                          std::span<const std::size_t> indices);

struct EpochStats {
  double loss = 0.0;  // sample-weighted mean of bce + L2
  double accuracy = 0.0;
};

// Batch boundaries for n samples; a trailing batch of one is merged into the
// previous batch.
std::vector<std::pair<std::size_t, std::size_t>> batch_ranges(std::size_t n,
                                                              std::size_t batch_size);

// One pass over `indices` (shuffled from `rng` when cfg.shuffle).
EpochStats train_epoch(Model& model, const EncodedDataset& data,
                       std::span<const std::size_t> indices, const TrainConfig& cfg,
                       AdamState& adam, Rng& rng);

struct FitHooks {
  // Replaces the computed validation loss (used to script early stopping).
  std::function<double(const Model&, std::size_t epoch, double computed)> val_loss;
  std::function<void(const Model&, const EpochRecord&)> on_epoch_end;
};

struct FitResult {
  Model model;  // restored best weights
  TrainingHistory history;
};

// Epoch loop with early stopping on strict validation-loss improvement and
// best-weights restore.
FitResult fit(Model model, const EncodedDataset& data, const SplitIndices& splits,
              const TrainConfig& cfg, const FitHooks& hooks = {});

}  // namespace sidn

#endif  // SIDN_TRAINER_HPP_
