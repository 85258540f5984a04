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

#ifndef SIDN_MODEL_HPP_
#define SIDN_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sidn/layers.hpp"
#include "sidn/rng.hpp"
#include "sidn/tensor.hpp"
#include "sidn/textprep.hpp"

namespace sidn {

enum class Variant { kBaseline, kFinetuned };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

struct ModelConfig {
  Variant variant = Variant::kFinetuned;
  std::size_t vocab_size = kDefaultVocabSize;
  std::size_t maxlen = kDefaultMaxLen;
  std::size_t emb_dim = 100;
  std::size_t conv_filters = 128;
  std::size_t kernel = 5;
  std::size_t pool = 2;
  std::size_t lstm_units = 64;
  std::size_t dense_units = 64;
  double dropout = 0.5;
  double l2_lambda = 0.01;
  bool embeddings_trainable = true;
  std::uint64_t seed = 1;

  static ModelConfig baseline();
  static ModelConfig finetuned();

  bool has_batchnorm() const { return variant == Variant::kFinetuned; }
  std::size_t conv_len() const { return maxlen - kernel + 1; }
  std::size_t pooled_len() const { return conv_len() / pool; }
  std::size_t feature_width() const { return 2 * lstm_units; }
  std::size_t flat_size() const { return pooled_len() * feature_width(); }

  void validate() const;
  std::string to_json() const;
  static ModelConfig from_json(std::string_view json);
  bool operator==(const ModelConfig&) const = default;
};

// All learnable tensors. Batch-norm running statistics live in `bn` too but
// are not trainable. Gradients use the same struct.
struct ModelParams {
  Tensor embedding;  // (K + 1) x emb_dim
  Tensor conv_kernel;
  Tensor conv_bias;
  LstmParams lstm_fwd;
  LstmParams lstm_bwd;
  AttentionParams attention;
  BatchNormState bn;  // empty tensors for the baseline variant
  Tensor dense_w;
  Tensor dense_b;
  Tensor out_w;
  Tensor out_b;

  struct Entry {
    std::string_view name;
    Tensor* tensor;
    bool regularized;  // carries the L2 penalty
  };
  struct ConstEntry {
    std::string_view name;
    const Tensor* tensor;
    bool regularized;
  };

  // Trainable tensors in a fixed order (empty tensors skipped).
  std::vector<Entry> trainable();
  std::vector<ConstEntry> trainable() const;
  // Everything that is serialized: trainable tensors plus running stats.
  std::vector<Entry> all();
  std::vector<ConstEntry> all() const;

  // Zero tensors with this object's trainable shapes.
  ModelParams zeros_like() const;
};

struct Model {
  ModelConfig config;
  ModelParams params;

  std::size_t parameter_count() const;
};

// Glorot-uniform kernels, orthogonal recurrent matrices, zero biases except
// the forget-gate slice (1.0). `embedding` must be (K + 1) x emb_dim; row 0
// is forced to zero.
Model build_model(const ModelConfig& config, const Tensor& embedding);
Model build_model(const ModelConfig& config, const Tensor& embedding, std::uint64_t seed);

struct SampleCache {
  std::vector<bool> real_rows;  // input rows that are not padding
  Conv1dCache conv;
  MaxPoolCache pool;
  BiLstmCache lstm;
  AttentionCache attention;
};

struct ForwardCache {
  std::vector<EncodedSequence> batch;
  std::vector<SampleCache> samples;
  std::optional<BatchNormCache> bn;
  DenseCache dense;
  DropoutCache dropout;
  DenseCache out;
};

struct ForwardResult {
  std::vector<double> probs;
  std::optional<ForwardCache> cache;  // set in training mode
  std::vector<std::vector<double>> attention;  // alpha per sample
};

// Training mode uses batch statistics (and updates running statistics),
// applies dropout from `rng` and returns caches. Throws when an index is
// out of range.
ForwardResult forward(Model& model, std::span<const EncodedSequence> batch, bool training,
                      Rng* rng = nullptr);
// Inference-mode forward; never mutates the model.
std::vector<double> infer(const Model& model, std::span<const EncodedSequence> batch);

// Gradients of a scalar loss given dLoss/dprob per sample (no L2 term).
// Throws "forward not cached" when the cache is missing.
ModelParams backward(const Model& model, const std::optional<ForwardCache>& cache,
                     std::span<const double> dprobs);

double l2_penalty(const Model& model);

struct LossAndGrads {
  double loss = 0.0;
  double bce = 0.0;
  ModelParams grads;
  std::vector<double> probs;
};

// Training-mode forward + bce + L2 and the matching gradients.
LossAndGrads loss_and_grads(Model& model, std::span<const EncodedSequence> batch,
                            std::span<const int> labels, Rng& rng);

double predict(const Model& model, const EncodedSequence& seq);

// Weights file: "SIDN", u32 version, u32-length config JSON, u32 tensor
// count, manifest entries (name, u32 rank, u64 dims, u64 byte offset), then
// raw little-endian doubles.
std::string save_weights(const Model& model);
Model load_weights(std::string_view bytes);

}  // namespace sidn

#endif  // SIDN_MODEL_HPP_
