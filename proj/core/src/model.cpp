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

#include "sidn/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include "json.hpp"
#include "sidn/error.hpp"
#include "sidn/io.hpp"

namespace sidn {

namespace {

using json = nlohmann::json;

constexpr char kWeightsMagic[4] = {'S', 'I', 'D', 'N'};
constexpr std::uint32_t kWeightsVersion = 1;

void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : t.data()) v = rng.uniform(-limit, limit);
}

// Orthonormal columns via modified Gram-Schmidt on a Gaussian matrix.
void orthogonal(Tensor& t, Rng& rng) {
  const std::size_t rows = t.dim(0);
  const std::size_t cols = t.dim(1);
  for (double& v : t.data()) v = rng.normal();
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      double proj = 0.0;
      for (std::size_t r = 0; r < rows; ++r) proj += t(r, c) * t(r, prev);
      for (std::size_t r = 0; r < rows; ++r) t(r, c) -= proj * t(r, prev);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < rows; ++r) norm += t(r, c) * t(r, c);
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < rows; ++r) t(r, c) /= norm;
  }
}

ModelParams allocate(const ModelConfig& c) {
  ModelParams p;
  const std::size_t width = c.feature_width();
  p.embedding = Tensor({c.vocab_size + 1, c.emb_dim});
  p.conv_kernel = Tensor({c.kernel, c.emb_dim, c.conv_filters});
  p.conv_bias = Tensor({c.conv_filters});
  p.lstm_fwd = LstmParams::zeros(c.conv_filters, c.lstm_units);
  p.lstm_bwd = LstmParams::zeros(c.conv_filters, c.lstm_units);
  p.attention = AttentionParams::zeros(width);
  if (c.has_batchnorm()) p.bn = BatchNormState::identity(width);
  p.dense_w = Tensor({c.flat_size(), c.dense_units});
  p.dense_b = Tensor({c.dense_units});
  p.out_w = Tensor({c.dense_units, 1});
  p.out_b = Tensor({1});
  return p;
}

template <typename Entry, typename P>
std::vector<Entry> list_tensors(P& p, bool with_running_stats) {
  std::vector<Entry> out = {
      {"embedding", &p.embedding, false},
      {"conv.kernel", &p.conv_kernel, true},
      {"conv.bias", &p.conv_bias, false},
      {"lstm_fwd.W", &p.lstm_fwd.W, true},
      {"lstm_fwd.U", &p.lstm_fwd.U, true},
      {"lstm_fwd.b", &p.lstm_fwd.b, false},
      {"lstm_bwd.W", &p.lstm_bwd.W, true},
      {"lstm_bwd.U", &p.lstm_bwd.U, true},
      {"lstm_bwd.b", &p.lstm_bwd.b, false},
      {"attention.W", &p.attention.W, false},
      {"attention.b", &p.attention.b, false},
      {"attention.v", &p.attention.v, false},
      {"bn.gamma", &p.bn.gamma, false},
      {"bn.beta", &p.bn.beta, false},
  };
  if (with_running_stats) {
    out.push_back({"bn.running_mean", &p.bn.running_mean, false});
    out.push_back({"bn.running_var", &p.bn.running_var, false});
  }
  out.push_back({"dense.W", &p.dense_w, true});
  out.push_back({"dense.b", &p.dense_b, false});
  out.push_back({"output.W", &p.out_w, true});
  out.push_back({"output.b", &p.out_b, false});
  std::erase_if(out, [](const Entry& e) { return e.tensor->empty(); });
  return out;
}

void check_indices(const Model& model, std::span<const EncodedSequence> batch) {
  if (batch.empty()) throw Error("empty batch");
  for (const auto& s : batch) {
    if (s.indices.size() != model.config.maxlen) {
      throw Error("sequence length " + std::to_string(s.indices.size()) + " differs from maxlen " +
                  std::to_string(model.config.maxlen));
    }
    for (TokenId t : s.indices) {
      if (t > model.config.vocab_size) throw Error("token index out of range");
    }
  }
}

// Shared forward body. `bn` is the batch-norm state to use (mutated in train
// mode); `cache` is filled when non-null.
std::vector<double> run_forward(const Model& model, std::span<const EncodedSequence> batch,
                                Mode mode, BatchNormState& bn, Rng* rng, ForwardCache* cache,
                                std::vector<std::vector<double>>* attention) {
  check_indices(model, batch);
  const ModelConfig& c = model.config;
  const ModelParams& p = model.params;
  const std::size_t B = batch.size();
  const std::size_t T = c.maxlen;
  const std::size_t E = c.emb_dim;
  const std::size_t width = c.feature_width();
  const std::size_t flat = c.flat_size();

  if (cache) {
    cache->batch.assign(batch.begin(), batch.end());
    cache->samples.assign(B, SampleCache{});
  }
  Tensor features({B, flat});
  for (std::size_t b = 0; b < B; ++b) {
    SampleCache* sc = cache ? &cache->samples[b] : nullptr;
    Tensor x({T, E});
    for (std::size_t t = 0; t < T; ++t) {
      const TokenId id = batch[b].indices[t];
      if (id != 0) std::copy(p.embedding.row(id), p.embedding.row(id) + E, x.row(t));
    }
    if (sc) {
      sc->real_rows.resize(T);
      for (std::size_t t = 0; t < T; ++t) sc->real_rows[t] = batch[b].indices[t] != 0;
    }
    Tensor conv = conv1d_forward(x, p.conv_kernel, p.conv_bias, Activation::kRelu,
                                 sc ? &sc->conv : nullptr);
    Tensor pooled = maxpool1d_forward(conv, c.pool, sc ? &sc->pool : nullptr);
    Tensor seq = bilstm_forward(pooled, p.lstm_fwd, p.lstm_bwd, sc ? &sc->lstm : nullptr);
    AttentionOutput att = attention_forward(seq, p.attention, sc ? &sc->attention : nullptr);
    std::copy(att.y.ptr(), att.y.ptr() + flat, features.row(b));
    if (attention) attention->push_back(std::move(att.alpha));
  }

  if (c.has_batchnorm()) {
    if (mode == Mode::kTrain && B < 2) throw Error("degenerate batch");
    Tensor rows = features.reshaped({B * c.pooled_len(), width});
    BatchNormCache bn_cache;
    Tensor normed = batchnorm_forward(rows, bn, mode, cache ? &bn_cache : nullptr);
    if (cache) cache->bn = std::move(bn_cache);
    features = normed.reshaped({B, flat});
  }

  Tensor hidden = dense_forward(features, p.dense_w, p.dense_b, Activation::kRelu,
                                cache ? &cache->dense : nullptr);
  const bool training = mode == Mode::kTrain;
  if (training && c.dropout > 0.0 && rng == nullptr) {
    throw Error("training-mode forward with dropout needs an rng");
  }
  Rng unused(0);
  Tensor dropped = dropout_forward(hidden, c.dropout, rng ? *rng : unused, training,
                                   cache ? &cache->dropout : nullptr);
  Tensor out = dense_forward(dropped, p.out_w, p.out_b, Activation::kSigmoid,
                             cache ? &cache->out : nullptr);
  return std::vector<double>(out.data().begin(), out.data().end());
}

}  // namespace

std::string_view variant_name(Variant v) {
  return v == Variant::kBaseline ? "baseline" : "finetuned";
}

Variant parse_variant(std::string_view name) {
  if (name == "baseline") return Variant::kBaseline;
  if (name == "finetuned") return Variant::kFinetuned;
  throw Error("unknown variant '" + std::string(name) + "' (expected baseline or finetuned)");
}

ModelConfig ModelConfig::baseline() {
  ModelConfig c;
  c.variant = Variant::kBaseline;
  c.l2_lambda = 0.0;
  return c;
}

ModelConfig ModelConfig::finetuned() { return ModelConfig{}; }

void ModelConfig::validate() const {
  if (vocab_size < 1 || maxlen < 1 || emb_dim < 1 || conv_filters < 1 || kernel < 1 ||
      pool < 1 || lstm_units < 1 || dense_units < 1) {
    throw Error("model sizes must be positive");
  }
  if (maxlen < kernel) throw Error("maxlen shorter than the convolution kernel");
  if (conv_len() < pool) throw Error("convolution output shorter than the pool size");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error("dropout must be in [0, 1)");
  if (!(l2_lambda >= 0.0)) throw Error("l2_lambda must be non-negative");
  if (variant == Variant::kFinetuned && l2_lambda != 0.01) {
    throw Error("the finetuned variant uses l2_lambda = 0.01");
  }
}

std::string ModelConfig::to_json() const {
  json j = {
      {"variant", std::string(variant_name(variant))},
      {"vocab_size", vocab_size},
      {"maxlen", maxlen},
      {"emb_dim", emb_dim},
      {"conv_filters", conv_filters},
      {"kernel", kernel},
      {"pool", pool},
      {"lstm_units", lstm_units},
      {"dense_units", dense_units},
      {"dropout", dropout},
      {"l2_lambda", l2_lambda},
      {"embeddings_trainable", embeddings_trainable},
      {"seed", seed},
  };
  return j.dump();
}

ModelConfig ModelConfig::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("model config: ") + e.what());
  }
  if (!j.is_object()) throw Error("model config must be a JSON object");
  ModelConfig c = ModelConfig::finetuned();
  if (j.contains("variant") && j["variant"].get<std::string>() == "baseline") {
    c = ModelConfig::baseline();
  }
  try {
    for (auto& [key, value] : j.items()) {
      if (key == "variant") c.variant = parse_variant(value.get<std::string>());
      else if (key == "vocab_size") c.vocab_size = value.get<std::size_t>();
      else if (key == "maxlen") c.maxlen = value.get<std::size_t>();
      else if (key == "emb_dim") c.emb_dim = value.get<std::size_t>();
      else if (key == "conv_filters") c.conv_filters = value.get<std::size_t>();
      else if (key == "kernel") c.kernel = value.get<std::size_t>();
      else if (key == "pool") c.pool = value.get<std::size_t>();
      else if (key == "lstm_units") c.lstm_units = value.get<std::size_t>();
      else if (key == "dense_units") c.dense_units = value.get<std::size_t>();
      else if (key == "dropout") c.dropout = value.get<double>();
      else if (key == "l2_lambda") c.l2_lambda = value.get<double>();
      else if (key == "embeddings_trainable") c.embeddings_trainable = value.get<bool>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else throw Error("unknown model config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(std::string("model config: ") + e.what());
  }
  return c;
}

std::vector<ModelParams::Entry> ModelParams::trainable() {
  return list_tensors<Entry>(*this, false);
}
std::vector<ModelParams::ConstEntry> ModelParams::trainable() const {
  return list_tensors<ConstEntry>(*this, false);
}
std::vector<ModelParams::Entry> ModelParams::all() { return list_tensors<Entry>(*this, true); }
std::vector<ModelParams::ConstEntry> ModelParams::all() const {
  return list_tensors<ConstEntry>(*this, true);
}

ModelParams ModelParams::zeros_like() const {
  ModelParams g = *this;
  for (auto& e : g.all()) e.tensor->zero();
  g.bn.running_mean = Tensor();
  g.bn.running_var = Tensor();
  return g;
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const auto& e : params.trainable()) n += e.tensor->size();
  return n;
}

Model build_model(const ModelConfig& config, const Tensor& embedding) {
  return build_model(config, embedding, config.seed);
}

Model build_model(const ModelConfig& config, const Tensor& embedding, std::uint64_t seed) {
  config.validate();
  if (embedding.rank() != 2 || embedding.dim(0) != config.vocab_size + 1 ||
      embedding.dim(1) != config.emb_dim) {
    throw Error("embedding matrix shape " + shape_string(embedding.shape()) + " does not match " +
                shape_string({config.vocab_size + 1, config.emb_dim}));
  }
  Model m{config, allocate(config)};
  ModelParams& p = m.params;
  Rng rng(seed);

  p.embedding = embedding;
  std::fill(p.embedding.row(0), p.embedding.row(0) + config.emb_dim, 0.0);

  glorot_uniform(p.conv_kernel, config.kernel * config.emb_dim,
                 config.kernel * config.conv_filters, rng);
  const std::size_t H = config.lstm_units;
  for (LstmParams* lp : {&p.lstm_fwd, &p.lstm_bwd}) {
    glorot_uniform(lp->W, lp->input(), 4 * H, rng);
    orthogonal(lp->U, rng);
    for (std::size_t j = H; j < 2 * H; ++j) lp->b[j] = 1.0;
  }
  const std::size_t width = config.feature_width();
  glorot_uniform(p.attention.W, width, width, rng);
  glorot_uniform(p.attention.v, width, 1, rng);
  glorot_uniform(p.dense_w, config.flat_size(), config.dense_units, rng);
  glorot_uniform(p.out_w, config.dense_units, 1, rng);
  return m;
}

ForwardResult forward(Model& model, std::span<const EncodedSequence> batch, bool training,
                      Rng* rng) {
  ForwardResult r;
  if (training) {
    ForwardCache cache;
    r.probs = run_forward(model, batch, Mode::kTrain, model.params.bn, rng, &cache, &r.attention);
    r.cache = std::move(cache);
  } else {
    BatchNormState bn = model.params.bn;
    r.probs = run_forward(model, batch, Mode::kInfer, bn, nullptr, nullptr, &r.attention);
  }
  return r;
}

std::vector<double> infer(const Model& model, std::span<const EncodedSequence> batch) {
  BatchNormState bn = model.params.bn;
  return run_forward(model, batch, Mode::kInfer, bn, nullptr, nullptr, nullptr);
}

ModelParams backward(const Model& model, const std::optional<ForwardCache>& maybe_cache,
                     std::span<const double> dprobs) {
  if (!maybe_cache) throw Error("forward not cached");
  const ForwardCache& cache = *maybe_cache;
  const ModelConfig& c = model.config;
  const ModelParams& p = model.params;
  const std::size_t B = cache.batch.size();
  if (dprobs.size() != B) throw Error("upstream gradient length differs from batch size");
  const std::size_t width = c.feature_width();
  const std::size_t flat = c.flat_size();
  const std::size_t E = c.emb_dim;

  ModelParams g = p.zeros_like();
  Tensor dout = Tensor::from({B, 1}, std::vector<double>(dprobs.begin(), dprobs.end()));
  Tensor dh = dense_backward(dout, p.out_w, cache.out, g.out_w, g.out_b);
  dh = dropout_backward(dh, cache.dropout);
  Tensor dfeat = dense_backward(dh, p.dense_w, cache.dense, g.dense_w, g.dense_b);
  if (c.has_batchnorm()) {
    if (!cache.bn) throw Error("forward not cached");
    Tensor rows = dfeat.reshaped({B * c.pooled_len(), width});
    dfeat = batchnorm_backward(rows, p.bn, *cache.bn, g.bn.gamma, g.bn.beta)
                .reshaped({B, flat});
  }

  for (std::size_t b = 0; b < B; ++b) {
    const SampleCache& sc = cache.samples[b];
    Tensor datt = Tensor::from({c.pooled_len(), width},
                               std::vector<double>(dfeat.row(b), dfeat.row(b) + flat));
    Tensor dseq = attention_backward(datt, p.attention, sc.attention, g.attention);
    Tensor dpool = bilstm_backward(dseq, p.lstm_fwd, p.lstm_bwd, sc.lstm, g.lstm_fwd, g.lstm_bwd);
    Tensor dconv = maxpool1d_backward(dpool, sc.pool);
    if (c.embeddings_trainable) {
      Tensor dx = conv1d_backward(dconv, p.conv_kernel, sc.conv, g.conv_kernel, g.conv_bias,
                                  sc.real_rows);
      const auto& idx = cache.batch[b].indices;
      for (std::size_t t = 0; t < idx.size(); ++t) {
        if (idx[t] == 0) continue;
        double* row = g.embedding.row(idx[t]);
        for (std::size_t d = 0; d < E; ++d) row[d] += dx.row(t)[d];
      }
    } else {
      const std::vector<bool> none(c.maxlen, false);
      conv1d_backward(dconv, p.conv_kernel, sc.conv, g.conv_kernel, g.conv_bias, none);
    }
  }
  return g;
}

double l2_penalty(const Model& model) {
  if (model.config.l2_lambda == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& e : model.params.trainable()) {
    if (!e.regularized) continue;
    for (double v : e.tensor->data()) sum += v * v;
  }
  return model.config.l2_lambda * sum;
}

LossAndGrads loss_and_grads(Model& model, std::span<const EncodedSequence> batch,
                            std::span<const int> labels, Rng& rng) {
  if (labels.size() != batch.size()) throw Error("labels and batch differ in length");
  ForwardResult fr = forward(model, batch, true, &rng);
  std::vector<double> y(labels.begin(), labels.end());
  LossAndGrads out;
  out.bce = bce_loss(fr.probs, y);
  out.loss = out.bce + l2_penalty(model);
  out.grads = backward(model, fr.cache, bce_grad(fr.probs, y));
  const double lambda = model.config.l2_lambda;
  if (lambda != 0.0) {
    auto params = model.params.trainable();
    auto grads = out.grads.trainable();
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (!params[i].regularized) continue;
      const auto src = params[i].tensor->data();
      auto dst = grads[i].tensor->data();
      for (std::size_t k = 0; k < src.size(); ++k) dst[k] += 2.0 * lambda * src[k];
    }
  }
  out.probs = std::move(fr.probs);
  return out;
}

double predict(const Model& model, const EncodedSequence& seq) {
  return infer(model, std::span<const EncodedSequence>(&seq, 1))[0];
}

std::string save_weights(const Model& model) {
  const auto tensors = model.params.all();
  ByteWriter header;
  header.put_bytes(std::string_view(kWeightsMagic, 4));
  header.put<std::uint32_t>(kWeightsVersion);
  header.put_string(model.config.to_json());
  header.put<std::uint32_t>(static_cast<std::uint32_t>(tensors.size()));
  std::uint64_t offset = 0;
  for (const auto& e : tensors) {
    header.put_string(e.name);
    header.put<std::uint32_t>(static_cast<std::uint32_t>(e.tensor->rank()));
    for (std::size_t d : e.tensor->shape()) header.put<std::uint64_t>(d);
    header.put<std::uint64_t>(offset);
    offset += e.tensor->size() * sizeof(double);
  }
  for (const auto& e : tensors) {
    for (double v : e.tensor->data()) header.put<double>(v);
  }
  return header.take();
}

Model load_weights(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.get_bytes(4) != std::string_view(kWeightsMagic, 4)) throw Error("not a SIDN weights file");
  if (r.get<std::uint32_t>() != kWeightsVersion) throw Error("unsupported weights version");
  Model model{ModelConfig::from_json(r.get_string()), {}};
  model.config.validate();
  model.params = allocate(model.config);

  struct Item {
    std::vector<std::size_t> shape;
    std::uint64_t offset;
  };
  std::map<std::string, Item> manifest;
  const auto n = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string name = r.get_string();
    Item item;
    item.shape.resize(r.get<std::uint32_t>());
    for (auto& d : item.shape) d = r.get<std::uint64_t>();
    item.offset = r.get<std::uint64_t>();
    manifest.emplace(std::move(name), std::move(item));
  }
  const std::size_t data_start = r.position();
  auto expected = model.params.all();
  if (expected.size() != manifest.size()) throw Error("weights file does not match its config");
  for (auto& e : expected) {
    auto it = manifest.find(std::string(e.name));
    if (it == manifest.end() || it->second.shape != e.tensor->shape()) {
      throw Error("weights/config mismatch at tensor '" + std::string(e.name) + "'");
    }
    const std::size_t nbytes = e.tensor->size() * sizeof(double);
    if (data_start + it->second.offset + nbytes > bytes.size()) {
      throw Error("weights file truncated");
    }
    std::memcpy(e.tensor->ptr(), bytes.data() + data_start + it->second.offset, nbytes);
  }
  return model;
}

}  // namespace sidn
