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

#include "sidn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "sidn/error.hpp"
#include "sidn/io.hpp"

namespace sidn {

namespace {

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

std::size_t correct_count(std::span<const double> probs, std::span<const int> labels) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if ((probs[i] >= 0.5 ? 1 : 0) == labels[i]) ++n;
  }
  return n;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs_max < 1) throw Error("epochs_max must be at least 1");
  if (batch_size < 1) throw Error("batch_size must be at least 1");
  if (!(lr > 0.0)) throw Error("lr must be positive");
  if (patience < 1) throw Error("patience must be at least 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw Error("adam betas must be in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw Error("adam_eps must be positive");
}

SplitIndices split(std::size_t n, std::span<const int> labels, std::uint64_t seed) {
  if (n < 10) throw Error("dataset too small to split");
  if (labels.size() != n) throw Error("label count differs from dataset size");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);
  Rng rng(seed);
  SplitIndices s;
  for (auto& [label, idx] : by_class) {
    shuffle(idx, rng);
    const std::size_t m = idx.size();
    const auto n_train = static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(m)));
    const auto n_val = static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(m)));
    const std::size_t n_val_clamped = std::min(n_val, m - n_train);
    s.train.insert(s.train.end(), idx.begin(), idx.begin() + n_train);
    s.val.insert(s.val.end(), idx.begin() + n_train, idx.begin() + n_train + n_val_clamped);
    s.test.insert(s.test.end(), idx.begin() + n_train + n_val_clamped, idx.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

AdamState AdamState::for_params(const ModelParams& params) {
  AdamState s;
  for (const auto& e : params.trainable()) {
    s.m.emplace_back(e.tensor->shape());
    s.v.emplace_back(e.tensor->shape());
  }
  return s;
}

void adam_step(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v, std::size_t t,
               const TrainConfig& cfg) {
  if (!param.same_shape(grad) || !param.same_shape(m) || !param.same_shape(v)) {
    throw Error("adam shape mismatch");
  }
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
    const double mhat = m[i] / c1;
    const double vhat = v[i] / c2;
    param[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.adam_eps);
  }
}

void adam_update(ModelParams& params, const ModelParams& grads, AdamState& state,
                 const TrainConfig& cfg) {
  auto p = params.trainable();
  auto g = grads.trainable();
  if (p.size() != g.size() || p.size() != state.m.size()) throw Error("adam shape mismatch");
  ++state.t;
  for (std::size_t i = 0; i < p.size(); ++i) {
    adam_step(*p[i].tensor, *g[i].tensor, state.m[i], state.v[i], state.t, cfg);
  }
}

std::string TrainingHistory::to_csv() const {
  std::string out = "epoch,train_loss,train_acc,val_loss,val_acc\n";
  for (const auto& r : epochs) {
    out += std::to_string(r.epoch) + "," + format_double(r.train_loss) + "," +
           format_double(r.train_acc) + "," + format_double(r.val_loss) + "," +
           format_double(r.val_acc) + "\n";
  }
  return out;
}

EvalResult evaluate_epoch(const Model& model, const EncodedDataset& data,
                          std::span<const std::size_t> indices) {
  if (indices.empty()) throw Error("empty split");
  constexpr std::size_t kChunk = 256;
  double loss_sum = 0.0;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < indices.size(); start += kChunk) {
    const std::size_t end = std::min(indices.size(), start + kChunk);
    std::vector<EncodedSequence> batch;
    std::vector<int> labels;
    std::vector<double> y;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(data.sequences.at(indices[i]));
      labels.push_back(data.labels.at(indices[i]));
      y.push_back(labels.back());
    }
    const auto probs = infer(model, batch);
    loss_sum += bce_loss(probs, y) * static_cast<double>(batch.size());
    correct += correct_count(probs, labels);
  }
  const auto n = static_cast<double>(indices.size());
  return {loss_sum / n, static_cast<double>(correct) / n};
}

std::vector<std::pair<std::size_t, std::size_t>> batch_ranges(std::size_t n,
                                                              std::size_t batch_size) {
  if (batch_size == 0) throw Error("batch_size must be at least 1");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t start = 0; start < n; start += batch_size) {
    out.emplace_back(start, std::min(n, start + batch_size));
  }
  if (out.size() >= 2 && out.back().second - out.back().first == 1) {
    out.pop_back();
    out.back().second = n;
  }
  return out;
}

EpochStats train_epoch(Model& model, const EncodedDataset& data,
                       std::span<const std::size_t> indices, const TrainConfig& cfg,
                       AdamState& adam, Rng& rng) {
  if (indices.empty()) throw Error("empty train split");
  std::vector<std::size_t> order(indices.begin(), indices.end());
  if (cfg.shuffle) shuffle(order, rng);
  double loss_sum = 0.0;
  std::size_t correct = 0;
  for (const auto& [start, end] : batch_ranges(order.size(), cfg.batch_size)) {
    std::vector<EncodedSequence> batch;
    std::vector<int> labels;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(data.sequences.at(order[i]));
      labels.push_back(data.labels.at(order[i]));
    }
    LossAndGrads lg = loss_and_grads(model, batch, labels, rng);
    adam_update(model.params, lg.grads, adam, cfg);
    loss_sum += lg.loss * static_cast<double>(batch.size());
    correct += correct_count(lg.probs, labels);
  }
  const auto n = static_cast<double>(order.size());
  return {loss_sum / n, static_cast<double>(correct) / n};
}

FitResult fit(Model model, const EncodedDataset& data, const SplitIndices& splits,
              const TrainConfig& cfg, const FitHooks& hooks) {
  cfg.validate();
  if (splits.train.empty()) throw Error("empty train split");
  if (splits.val.empty()) throw Error("empty validation split");
  AdamState adam = AdamState::for_params(model.params);
  Rng rng(cfg.seed);
  TrainingHistory history;
  ModelParams best = model.params;
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs_max; ++epoch) {
    Rng epoch_rng = rng.fork(epoch);
    const EpochStats train = train_epoch(model, data, splits.train, cfg, adam, epoch_rng);
    const EvalResult val = evaluate_epoch(model, data, splits.val);
    EpochRecord rec{epoch, train.loss, train.accuracy, val.loss, val.accuracy};
    if (hooks.val_loss) rec.val_loss = hooks.val_loss(model, epoch, val.loss);
    history.epochs.push_back(rec);
    history.stopped_epoch = epoch;
    if (hooks.on_epoch_end) hooks.on_epoch_end(model, rec);

    if (rec.val_loss < best_loss) {
      best_loss = rec.val_loss;
      best = model.params;
      history.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  model.params = std::move(best);
  return {std::move(model), std::move(history)};
}

}  // namespace sidn
