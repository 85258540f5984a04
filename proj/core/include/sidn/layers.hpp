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

#ifndef SIDN_LAYERS_HPP_
#define SIDN_LAYERS_HPP_

// Forward and backward kernels for every layer of the classifier stack.
//
// Conventions: per-sample sequence tensors are T x D, batched tensors are
// B x D. Backward functions *accumulate* parameter gradients into the
// tensors they are given and return the gradient with respect to the input.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sidn/rng.hpp"
#include "sidn/tensor.hpp"

namespace sidn {

enum class Activation { kNone, kRelu, kSigmoid };
enum class Mode { kTrain, kInfer };

double sigmoid(double x);

// ---------------------------------------------------------------- conv1d

struct Conv1dCache {
  Tensor input;   // T x Din
  Tensor preact;  // (T - K + 1) x F
  Activation activation = Activation::kRelu;
};

// Valid convolution: kernel is K x Din x F, bias is F.
// Throws "sequence shorter than kernel" when T < K.
Tensor conv1d_forward(const Tensor& x, const Tensor& kernel, const Tensor& bias,
                      Activation activation = Activation::kRelu, Conv1dCache* cache = nullptr);

// When input_rows is non-empty, dx is only computed for rows flagged true
// (other rows are left zero).
Tensor conv1d_backward(const Tensor& dy, const Tensor& kernel, const Conv1dCache& cache,
                       Tensor& dkernel, Tensor& dbias,
                       const std::vector<bool>& input_rows = {});

// ---------------------------------------------------------------- maxpool

struct MaxPoolCache {
  std::vector<std::size_t> argmax;  // flat input offset per output element
  std::vector<std::size_t> input_shape;
};

// Non-overlapping windows; a trailing remainder shorter than pool is dropped.
// Ties resolve to the earliest timestep.
Tensor maxpool1d_forward(const Tensor& x, std::size_t pool = 2, MaxPoolCache* cache = nullptr);
Tensor maxpool1d_backward(const Tensor& dy, const MaxPoolCache& cache);

// ---------------------------------------------------------------- lstm

// Gate order within the 4H rows: input, forget, cell candidate, output.
struct LstmParams {
  Tensor W;  // 4H x D
  Tensor U;  // 4H x H
  Tensor b;  // 4H

  static LstmParams zeros(std::size_t input, std::size_t hidden);
  std::size_t hidden() const { return U.dim(1); }
  std::size_t input() const { return W.dim(1); }
};

struct LstmStep {
  std::vector<double> h;
  std::vector<double> c;
  std::vector<double> gates;  // activated i, f, g, o
};

LstmStep lstm_cell(std::span<const double> x, std::span<const double> h_prev,
                   std::span<const double> c_prev, const LstmParams& p);

struct LstmCellGrads {
  std::vector<double> dx;
  std::vector<double> dh_prev;
  std::vector<double> dc_prev;
};

// Backward through one step given upstream dh and dc.
LstmCellGrads lstm_cell_backward(std::span<const double> dh, std::span<const double> dc,
                                 std::span<const double> x, std::span<const double> h_prev,
                                 std::span<const double> c_prev, const LstmStep& step,
                                 const LstmParams& p, LstmParams& grads);

struct LstmSeqCache {
  Tensor input;   // T x D
  Tensor gates;   // T x 4H
  Tensor cells;   // T x H
  Tensor hidden;  // T x H
};

// Zero initial state; returns T x H.
Tensor lstm_forward(const Tensor& seq, const LstmParams& p, LstmSeqCache* cache = nullptr);
// Backpropagation through time; dh is T x H, returns T x D.
Tensor lstm_backward(const Tensor& dh, const LstmParams& p, const LstmSeqCache& cache,
                     LstmParams& grads);

struct BiLstmCache {
  LstmSeqCache forward;
  LstmSeqCache backward;  // over the reversed sequence
};

// output[t] = concat(h_fwd[t], h_bwd[t]); T x 2H.
Tensor bilstm_forward(const Tensor& seq, const LstmParams& fwd, const LstmParams& bwd,
                      BiLstmCache* cache = nullptr);
Tensor bilstm_backward(const Tensor& dy, const LstmParams& fwd, const LstmParams& bwd,
                       const BiLstmCache& cache, LstmParams& dfwd, LstmParams& dbwd);

// ---------------------------------------------------------------- attention

// Additive scoring e_t = v . tanh(W h_t + b), alpha = softmax(e),
// Y[t] = alpha_t * h_t.
struct AttentionParams {
  Tensor W;  // D x D
  Tensor b;  // D
  Tensor v;  // D

  static AttentionParams zeros(std::size_t width);
};

struct AttentionCache {
  Tensor input;  // T x D
  Tensor act;    // T x D, tanh(W h_t + b)
  std::vector<double> alpha;
};

struct AttentionOutput {
  Tensor y;
  std::vector<double> alpha;
};

AttentionOutput attention_forward(const Tensor& h, const AttentionParams& p,
                                  AttentionCache* cache = nullptr);
Tensor attention_backward(const Tensor& dy, const AttentionParams& p,
                          const AttentionCache& cache, AttentionParams& grads);

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> scores);

// ---------------------------------------------------------------- dense

struct DenseCache {
  Tensor input;   // B x D
  Tensor output;  // B x M, post-activation
  Activation activation = Activation::kNone;
};

// x is B x D (a rank-1 x is treated as 1 x D); W is D x M; returns B x M.
Tensor dense_forward(const Tensor& x, const Tensor& W, const Tensor& b, Activation activation,
                     DenseCache* cache = nullptr);
Tensor dense_backward(const Tensor& dy, const Tensor& W, const DenseCache& cache, Tensor& dW,
                      Tensor& db);

// ---------------------------------------------------------------- batchnorm

struct BatchNormState {
  Tensor gamma;
  Tensor beta;
  Tensor running_mean;
  Tensor running_var;
  double momentum = 0.99;
  double epsilon = 1e-3;

  // gamma = 1, beta = 0, running stats (0, 1).
  static BatchNormState identity(std::size_t width);
  std::size_t width() const { return gamma.size(); }
};

struct BatchNormCache {
  Tensor xhat;  // N x D
  std::vector<double> inv_std;
};

// X is N x D; statistics are per column. Train mode uses batch statistics and
// updates the running statistics in place; throws "degenerate batch" for N < 2.
Tensor batchnorm_forward(const Tensor& X, BatchNormState& s, Mode mode,
                         BatchNormCache* cache = nullptr);
Tensor batchnorm_backward(const Tensor& dy, const BatchNormState& s, const BatchNormCache& cache,
                          Tensor& dgamma, Tensor& dbeta);

// ---------------------------------------------------------------- dropout

struct DropoutCache {
  std::vector<double> scale;  // 0 or 1 / (1 - rate) per element
};

// Inverted dropout; inference (training == false) returns x unchanged.
Tensor dropout_forward(const Tensor& x, double rate, Rng& rng, bool training,
                       DropoutCache* cache = nullptr);
Tensor dropout_backward(const Tensor& dy, const DropoutCache& cache);

// ---------------------------------------------------------------- misc

// Row-major T x F -> T*F.
Tensor flatten(const Tensor& x);

inline constexpr double kProbClip = 1e-12;

// Mean binary cross-entropy with p clipped into [1e-12, 1 - 1e-12].
double bce_loss(std::span<const double> p, std::span<const double> y);
// d(bce_loss)/dp; zero where clipping is active.
std::vector<double> bce_grad(std::span<const double> p, std::span<const double> y);

}  // namespace sidn

#endif  // SIDN_LAYERS_HPP_
