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

#include "sidn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "sidn/error.hpp"

namespace sidn {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(what);
}

double activate(double z, Activation a) {
  switch (a) {
    case Activation::kRelu:
      return z > 0.0 ? z : 0.0;
    case Activation::kSigmoid:
      return sigmoid(z);
    case Activation::kNone:
      break;
  }
  return z;
}

// d(activation)/dz expressed through the activated output y (and z for relu).
double activation_slope(double y, Activation a) {
  switch (a) {
    case Activation::kRelu:
      return y > 0.0 ? 1.0 : 0.0;
    case Activation::kSigmoid:
      return y * (1.0 - y);
    case Activation::kNone:
      break;
  }
  return 1.0;
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

// Four independent partial sums in a fixed order; deterministic, and it
// breaks the add latency chain.
double dot(std::size_t n, const double* x, const double* y) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

bool row_is_zero(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] != 0.0) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- conv1d

Tensor conv1d_forward(const Tensor& x, const Tensor& kernel, const Tensor& bias,
                      Activation activation, Conv1dCache* cache) {
  require(x.rank() == 2 && kernel.rank() == 3 && bias.rank() == 1, "conv1d: bad tensor ranks");
  const std::size_t T = x.dim(0);
  const std::size_t Din = x.dim(1);
  const std::size_t K = kernel.dim(0);
  const std::size_t F = kernel.dim(2);
  require(kernel.dim(1) == Din && bias.size() == F, "conv1d: shape mismatch");
  if (T < K) throw Error("sequence shorter than kernel");
  const std::size_t L = T - K + 1;

  std::vector<bool> zero_row(T);
  for (std::size_t t = 0; t < T; ++t) zero_row[t] = row_is_zero(x.row(t), Din);

  Tensor z({L, F});
  for (std::size_t t = 0; t < L; ++t) {
    double* zt = z.row(t);
    std::copy(bias.ptr(), bias.ptr() + F, zt);
    for (std::size_t k = 0; k < K; ++k) {
      if (zero_row[t + k]) continue;
      const double* xr = x.row(t + k);
      const double* kk = kernel.ptr() + k * Din * F;
      for (std::size_t d = 0; d < Din; ++d) {
        const double xv = xr[d];
        if (xv == 0.0) continue;
        axpy(F, xv, kk + d * F, zt);
      }
    }
  }
  Tensor y = z;
  for (double& v : y.data()) v = activate(v, activation);
  if (cache) {
    cache->input = x;
    cache->preact = std::move(z);
    cache->activation = activation;
  }
  return y;
}

Tensor conv1d_backward(const Tensor& dy, const Tensor& kernel, const Conv1dCache& cache,
                       Tensor& dkernel, Tensor& dbias, const std::vector<bool>& input_rows) {
  const Tensor& x = cache.input;
  const std::size_t T = x.dim(0);
  const std::size_t Din = x.dim(1);
  const std::size_t K = kernel.dim(0);
  const std::size_t F = kernel.dim(2);
  const std::size_t L = T - K + 1;
  require(dy.dim(0) == L && dy.dim(1) == F, "conv1d backward: gradient shape mismatch");

  Tensor dz({L, F});
  for (std::size_t i = 0; i < dz.size(); ++i) {
    const double z = cache.preact[i];
    double slope = 1.0;
    if (cache.activation == Activation::kRelu) slope = z > 0.0 ? 1.0 : 0.0;
    if (cache.activation == Activation::kSigmoid) {
      const double s = sigmoid(z);
      slope = s * (1.0 - s);
    }
    dz[i] = dy[i] * slope;
  }

  std::vector<bool> zero_row(T);
  for (std::size_t t = 0; t < T; ++t) zero_row[t] = row_is_zero(x.row(t), Din);

  Tensor dx({T, Din});
  for (std::size_t t = 0; t < L; ++t) {
    const double* dzt = dz.row(t);
    if (row_is_zero(dzt, F)) continue;
    axpy(F, 1.0, dzt, dbias.ptr());
    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t r = t + k;
      const double* kk = kernel.ptr() + k * Din * F;
      double* dkk = dkernel.ptr() + k * Din * F;
      if (!zero_row[r]) {
        const double* xr = x.row(r);
        for (std::size_t d = 0; d < Din; ++d) {
          if (xr[d] != 0.0) axpy(F, xr[d], dzt, dkk + d * F);
        }
      }
      if (input_rows.empty() || input_rows[r]) {
        double* dxr = dx.row(r);
        for (std::size_t d = 0; d < Din; ++d) dxr[d] += dot(F, kk + d * F, dzt);
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------- maxpool

Tensor maxpool1d_forward(const Tensor& x, std::size_t pool, MaxPoolCache* cache) {
  require(x.rank() == 2, "maxpool1d: input must be T x F");
  require(pool >= 1, "maxpool1d: pool must be positive");
  const std::size_t T = x.dim(0);
  const std::size_t F = x.dim(1);
  if (T < pool) throw Error("sequence shorter than pool");
  const std::size_t L = T / pool;
  Tensor y({L, F});
  if (cache) {
    cache->argmax.assign(L * F, 0);
    cache->input_shape = x.shape();
  }
  for (std::size_t t = 0; t < L; ++t) {
    for (std::size_t f = 0; f < F; ++f) {
      std::size_t best = t * pool * F + f;
      for (std::size_t j = 1; j < pool; ++j) {
        const std::size_t idx = (t * pool + j) * F + f;
        if (x[idx] > x[best]) best = idx;
      }
      y[t * F + f] = x[best];
      if (cache) cache->argmax[t * F + f] = best;
    }
  }
  return y;
}

Tensor maxpool1d_backward(const Tensor& dy, const MaxPoolCache& cache) {
  require(dy.size() == cache.argmax.size(), "maxpool1d backward: gradient shape mismatch");
  Tensor dx(cache.input_shape);
  for (std::size_t i = 0; i < dy.size(); ++i) dx[cache.argmax[i]] += dy[i];
  return dx;
}

// ---------------------------------------------------------------- lstm

LstmParams LstmParams::zeros(std::size_t input, std::size_t hidden) {
  return {Tensor({4 * hidden, input}), Tensor({4 * hidden, hidden}), Tensor({4 * hidden})};
}

namespace {

// gates receives the activated [i, f, g, o] (4H).
void lstm_step(const double* x, const double* h_prev, const double* c_prev, const LstmParams& p,
               double* gates, double* c, double* h) {
  const std::size_t H = p.hidden();
  const std::size_t D = p.input();
  for (std::size_t r = 0; r < 4 * H; ++r) {
    gates[r] = p.b[r] + dot(D, p.W.row(r), x) + dot(H, p.U.row(r), h_prev);
  }
  for (std::size_t j = 0; j < H; ++j) {
    const double i = sigmoid(gates[j]);
    const double f = sigmoid(gates[H + j]);
    const double g = std::tanh(gates[2 * H + j]);
    const double o = sigmoid(gates[3 * H + j]);
    gates[j] = i;
    gates[H + j] = f;
    gates[2 * H + j] = g;
    gates[3 * H + j] = o;
    c[j] = f * c_prev[j] + i * g;
    h[j] = o * std::tanh(c[j]);
  }
}

// dh and dc are the total upstream gradients at this step. Writes the
// gradients w.r.t. the previous state into dh_prev / dc_prev and adds dx.
void lstm_step_backward(const double* dh, const double* dc_in, const double* x,
                        const double* h_prev, const double* c_prev, const double* gates,
                        const double* c, const LstmParams& p, LstmParams& grads,
                        std::vector<double>& da, double* dx, double* dh_prev, double* dc_prev) {
  const std::size_t H = p.hidden();
  const std::size_t D = p.input();
  da.resize(4 * H);
  for (std::size_t j = 0; j < H; ++j) {
    const double i = gates[j];
    const double f = gates[H + j];
    const double g = gates[2 * H + j];
    const double o = gates[3 * H + j];
    const double tc = std::tanh(c[j]);
    const double dcj = dc_in[j] + dh[j] * o * (1.0 - tc * tc);
    da[j] = dcj * g * i * (1.0 - i);
    da[H + j] = dcj * c_prev[j] * f * (1.0 - f);
    da[2 * H + j] = dcj * i * (1.0 - g * g);
    da[3 * H + j] = dh[j] * tc * o * (1.0 - o);
    dc_prev[j] = dcj * f;
  }
  std::fill(dh_prev, dh_prev + H, 0.0);
  for (std::size_t r = 0; r < 4 * H; ++r) {
    const double a = da[r];
    if (a == 0.0) continue;
    axpy(D, a, x, grads.W.row(r));
    axpy(H, a, h_prev, grads.U.row(r));
    grads.b[r] += a;
    if (dx) axpy(D, a, p.W.row(r), dx);
    axpy(H, a, p.U.row(r), dh_prev);
  }
}

}  // namespace

LstmStep lstm_cell(std::span<const double> x, std::span<const double> h_prev,
                   std::span<const double> c_prev, const LstmParams& p) {
  const std::size_t H = p.hidden();
  require(x.size() == p.input() && h_prev.size() == H && c_prev.size() == H,
          "lstm_cell: shape mismatch");
  LstmStep s;
  s.h.resize(H);
  s.c.resize(H);
  s.gates.resize(4 * H);
  lstm_step(x.data(), h_prev.data(), c_prev.data(), p, s.gates.data(), s.c.data(), s.h.data());
  return s;
}

LstmCellGrads lstm_cell_backward(std::span<const double> dh, std::span<const double> dc,
                                 std::span<const double> x, std::span<const double> h_prev,
                                 std::span<const double> c_prev, const LstmStep& step,
                                 const LstmParams& p, LstmParams& grads) {
  const std::size_t H = p.hidden();
  LstmCellGrads out;
  out.dx.assign(p.input(), 0.0);
  out.dh_prev.assign(H, 0.0);
  out.dc_prev.assign(H, 0.0);
  std::vector<double> da;
  lstm_step_backward(dh.data(), dc.data(), x.data(), h_prev.data(), c_prev.data(),
                     step.gates.data(), step.c.data(), p, grads, da, out.dx.data(),
                     out.dh_prev.data(), out.dc_prev.data());
  return out;
}

Tensor lstm_forward(const Tensor& seq, const LstmParams& p, LstmSeqCache* cache) {
  require(seq.rank() == 2 && seq.dim(1) == p.input(), "lstm: input width mismatch");
  const std::size_t T = seq.dim(0);
  const std::size_t H = p.hidden();
  Tensor gates({T, 4 * H});
  Tensor cells({T, H});
  Tensor hidden({T, H});
  const std::vector<double> zeros(H, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    const double* hp = t == 0 ? zeros.data() : hidden.row(t - 1);
    const double* cp = t == 0 ? zeros.data() : cells.row(t - 1);
    lstm_step(seq.row(t), hp, cp, p, gates.row(t), cells.row(t), hidden.row(t));
  }
  if (cache) {
    cache->input = seq;
    cache->gates = std::move(gates);
    cache->cells = std::move(cells);
    cache->hidden = hidden;
  }
  return hidden;
}

Tensor lstm_backward(const Tensor& dh, const LstmParams& p, const LstmSeqCache& cache,
                     LstmParams& grads) {
  const std::size_t T = cache.input.dim(0);
  const std::size_t D = p.input();
  const std::size_t H = p.hidden();
  require(dh.dim(0) == T && dh.dim(1) == H, "lstm backward: gradient shape mismatch");
  Tensor dx({T, D});
  const std::vector<double> zeros(H, 0.0);
  std::vector<double> dh_next(H, 0.0);
  std::vector<double> dc_next(H, 0.0);
  std::vector<double> dh_total(H);
  std::vector<double> dh_prev(H);
  std::vector<double> dc_prev(H);
  std::vector<double> da;
  for (std::size_t t = T; t-- > 0;) {
    for (std::size_t j = 0; j < H; ++j) dh_total[j] = dh.row(t)[j] + dh_next[j];
    const double* hp = t == 0 ? zeros.data() : cache.hidden.row(t - 1);
    const double* cp = t == 0 ? zeros.data() : cache.cells.row(t - 1);
    lstm_step_backward(dh_total.data(), dc_next.data(), cache.input.row(t), hp, cp,
                       cache.gates.row(t), cache.cells.row(t), p, grads, da, dx.row(t),
                       dh_prev.data(), dc_prev.data());
    dh_next.swap(dh_prev);
    dc_next.swap(dc_prev);
  }
  return dx;
}

namespace {

Tensor reverse_rows(const Tensor& x) {
  Tensor r(x.shape());
  const std::size_t T = x.dim(0);
  const std::size_t W = x.row_width();
  for (std::size_t t = 0; t < T; ++t) std::copy(x.row(t), x.row(t) + W, r.row(T - 1 - t));
  return r;
}

}  // namespace

Tensor bilstm_forward(const Tensor& seq, const LstmParams& fwd, const LstmParams& bwd,
                      BiLstmCache* cache) {
  require(fwd.hidden() == bwd.hidden(), "bilstm: direction widths differ");
  const std::size_t T = seq.dim(0);
  const std::size_t H = fwd.hidden();
  Tensor hf = lstm_forward(seq, fwd, cache ? &cache->forward : nullptr);
  Tensor hb = lstm_forward(reverse_rows(seq), bwd, cache ? &cache->backward : nullptr);
  Tensor y({T, 2 * H});
  for (std::size_t t = 0; t < T; ++t) {
    std::copy(hf.row(t), hf.row(t) + H, y.row(t));
    std::copy(hb.row(T - 1 - t), hb.row(T - 1 - t) + H, y.row(t) + H);
  }
  return y;
}

Tensor bilstm_backward(const Tensor& dy, const LstmParams& fwd, const LstmParams& bwd,
                       const BiLstmCache& cache, LstmParams& dfwd, LstmParams& dbwd) {
  const std::size_t T = dy.dim(0);
  const std::size_t H = fwd.hidden();
  Tensor dhf({T, H});
  Tensor dhb({T, H});
  for (std::size_t t = 0; t < T; ++t) {
    std::copy(dy.row(t), dy.row(t) + H, dhf.row(t));
    std::copy(dy.row(t) + H, dy.row(t) + 2 * H, dhb.row(T - 1 - t));
  }
  Tensor dx = lstm_backward(dhf, fwd, cache.forward, dfwd);
  Tensor dxb = reverse_rows(lstm_backward(dhb, bwd, cache.backward, dbwd));
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dxb[i];
  return dx;
}

// ---------------------------------------------------------------- attention

AttentionParams AttentionParams::zeros(std::size_t width) {
  return {Tensor({width, width}), Tensor({width}), Tensor({width})};
}

std::vector<double> softmax(std::span<const double> scores) {
  std::vector<double> out(scores.size());
  if (scores.empty()) return out;
  const double m = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

AttentionOutput attention_forward(const Tensor& h, const AttentionParams& p,
                                  AttentionCache* cache) {
  require(h.rank() == 2 && h.dim(0) >= 1, "attention: input must be T x D with T >= 1");
  const std::size_t T = h.dim(0);
  const std::size_t D = h.dim(1);
  require(p.W.dim(0) == D && p.W.dim(1) == D && p.b.size() == D && p.v.size() == D,
          "attention: parameter shape mismatch");
  Tensor act({T, D});
  std::vector<double> e(T);
  for (std::size_t t = 0; t < T; ++t) {
    double* a = act.row(t);
    for (std::size_t r = 0; r < D; ++r) a[r] = std::tanh(p.b[r] + dot(D, p.W.row(r), h.row(t)));
    e[t] = dot(D, p.v.ptr(), a);
  }
  AttentionOutput out{Tensor({T, D}), softmax(e)};
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t d = 0; d < D; ++d) out.y.row(t)[d] = out.alpha[t] * h.row(t)[d];
  }
  if (cache) {
    cache->input = h;
    cache->act = std::move(act);
    cache->alpha = out.alpha;
  }
  return out;
}

Tensor attention_backward(const Tensor& dy, const AttentionParams& p, const AttentionCache& cache,
                          AttentionParams& grads) {
  const Tensor& h = cache.input;
  const std::size_t T = h.dim(0);
  const std::size_t D = h.dim(1);
  require(dy.dim(0) == T && dy.dim(1) == D, "attention backward: gradient shape mismatch");
  const auto& alpha = cache.alpha;

  std::vector<double> dalpha(T);
  double weighted = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    dalpha[t] = dot(D, dy.row(t), h.row(t));
    weighted += alpha[t] * dalpha[t];
  }
  Tensor dh({T, D});
  std::vector<double> dpre(D);
  for (std::size_t t = 0; t < T; ++t) {
    double* dht = dh.row(t);
    for (std::size_t d = 0; d < D; ++d) dht[d] = alpha[t] * dy.row(t)[d];
    const double de = alpha[t] * (dalpha[t] - weighted);
    if (de == 0.0) continue;
    const double* a = cache.act.row(t);
    axpy(D, de, a, grads.v.ptr());
    for (std::size_t r = 0; r < D; ++r) dpre[r] = de * p.v[r] * (1.0 - a[r] * a[r]);
    for (std::size_t r = 0; r < D; ++r) {
      axpy(D, dpre[r], h.row(t), grads.W.row(r));
      grads.b[r] += dpre[r];
      axpy(D, dpre[r], p.W.row(r), dht);
    }
  }
  return dh;
}

// ---------------------------------------------------------------- dense

Tensor dense_forward(const Tensor& x_in, const Tensor& W, const Tensor& b, Activation activation,
                     DenseCache* cache) {
  const Tensor x = x_in.rank() == 1 ? x_in.reshaped({1, x_in.size()}) : x_in;
  require(x.rank() == 2 && W.rank() == 2, "dense: bad tensor ranks");
  const std::size_t B = x.dim(0);
  const std::size_t D = x.dim(1);
  const std::size_t M = W.dim(1);
  require(W.dim(0) == D && b.size() == M, "dense: shape mismatch");
  Tensor y({B, M});
  for (std::size_t i = 0; i < B; ++i) {
    double* yr = y.row(i);
    std::copy(b.ptr(), b.ptr() + M, yr);
    const double* xr = x.row(i);
    for (std::size_t d = 0; d < D; ++d) {
      if (xr[d] != 0.0) axpy(M, xr[d], W.row(d), yr);
    }
    for (std::size_t m = 0; m < M; ++m) yr[m] = activate(yr[m], activation);
  }
  if (cache) {
    cache->input = x;
    cache->output = y;
    cache->activation = activation;
  }
  return y;
}

Tensor dense_backward(const Tensor& dy, const Tensor& W, const DenseCache& cache, Tensor& dW,
                      Tensor& db) {
  const Tensor& x = cache.input;
  const std::size_t B = x.dim(0);
  const std::size_t D = x.dim(1);
  const std::size_t M = W.dim(1);
  require(dy.size() == B * M, "dense backward: gradient shape mismatch");
  Tensor dx({B, D});
  std::vector<double> dz(M);
  for (std::size_t i = 0; i < B; ++i) {
    for (std::size_t m = 0; m < M; ++m) {
      dz[m] = dy[i * M + m] * activation_slope(cache.output.row(i)[m], cache.activation);
    }
    axpy(M, 1.0, dz.data(), db.ptr());
    const double* xr = x.row(i);
    double* dxr = dx.row(i);
    for (std::size_t d = 0; d < D; ++d) {
      if (xr[d] != 0.0) axpy(M, xr[d], dz.data(), dW.row(d));
      dxr[d] = dot(M, W.row(d), dz.data());
    }
  }
  return dx;
}

// ---------------------------------------------------------------- batchnorm

BatchNormState BatchNormState::identity(std::size_t width) {
  BatchNormState s;
  s.gamma = Tensor({width}, 1.0);
  s.beta = Tensor({width}, 0.0);
  s.running_mean = Tensor({width}, 0.0);
  s.running_var = Tensor({width}, 1.0);
  return s;
}

Tensor batchnorm_forward(const Tensor& X, BatchNormState& s, Mode mode, BatchNormCache* cache) {
  require(X.rank() == 2 && X.dim(1) == s.width(), "batchnorm: width mismatch");
  const std::size_t N = X.dim(0);
  const std::size_t D = X.dim(1);
  Tensor y({N, D});
  if (mode == Mode::kInfer) {
    for (std::size_t d = 0; d < D; ++d) {
      const double inv = 1.0 / std::sqrt(s.running_var[d] + s.epsilon);
      for (std::size_t n = 0; n < N; ++n) {
        y(n, d) = s.gamma[d] * (X(n, d) - s.running_mean[d]) * inv + s.beta[d];
      }
    }
    return y;
  }
  if (N < 2) throw Error("degenerate batch");
  std::vector<double> mean(D, 0.0);
  std::vector<double> var(D, 0.0);
  for (std::size_t n = 0; n < N; ++n) axpy(D, 1.0, X.row(n), mean.data());
  for (double& m : mean) m /= static_cast<double>(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double* xr = X.row(n);
    for (std::size_t d = 0; d < D; ++d) var[d] += (xr[d] - mean[d]) * (xr[d] - mean[d]);
  }
  for (double& v : var) v /= static_cast<double>(N);

  Tensor xhat({N, D});
  std::vector<double> inv_std(D);
  for (std::size_t d = 0; d < D; ++d) inv_std[d] = 1.0 / std::sqrt(var[d] + s.epsilon);
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t d = 0; d < D; ++d) {
      xhat(n, d) = (X(n, d) - mean[d]) * inv_std[d];
      y(n, d) = s.gamma[d] * xhat(n, d) + s.beta[d];
    }
  }
  for (std::size_t d = 0; d < D; ++d) {
    s.running_mean[d] = s.momentum * s.running_mean[d] + (1.0 - s.momentum) * mean[d];
    s.running_var[d] = s.momentum * s.running_var[d] + (1.0 - s.momentum) * var[d];
  }
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

Tensor batchnorm_backward(const Tensor& dy, const BatchNormState& s, const BatchNormCache& cache,
                          Tensor& dgamma, Tensor& dbeta) {
  const std::size_t N = cache.xhat.dim(0);
  const std::size_t D = cache.xhat.dim(1);
  require(dy.size() == N * D, "batchnorm backward: gradient shape mismatch");
  std::vector<double> sum_dxhat(D, 0.0);
  std::vector<double> sum_dxhat_xhat(D, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t d = 0; d < D; ++d) {
      const double g = dy[n * D + d];
      dgamma[d] += g * cache.xhat(n, d);
      dbeta[d] += g;
      const double dxhat = g * s.gamma[d];
      sum_dxhat[d] += dxhat;
      sum_dxhat_xhat[d] += dxhat * cache.xhat(n, d);
    }
  }
  Tensor dx({N, D});
  const double invN = 1.0 / static_cast<double>(N);
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t d = 0; d < D; ++d) {
      const double dxhat = dy[n * D + d] * s.gamma[d];
      dx(n, d) = cache.inv_std[d] * invN *
                 (static_cast<double>(N) * dxhat - sum_dxhat[d] -
                  cache.xhat(n, d) * sum_dxhat_xhat[d]);
    }
  }
  return dx;
}

// ---------------------------------------------------------------- dropout

Tensor dropout_forward(const Tensor& x, double rate, Rng& rng, bool training,
                       DropoutCache* cache) {
  if (!(rate >= 0.0 && rate < 1.0)) throw Error("dropout rate must be in [0, 1)");
  if (!training || rate == 0.0) {
    if (cache) cache->scale.assign(x.size(), 1.0);
    return x;
  }
  const double keep_scale = 1.0 / (1.0 - rate);
  Tensor y = x;
  std::vector<double> scale(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    scale[i] = rng.uniform() < rate ? 0.0 : keep_scale;
    y[i] = x[i] * scale[i];
  }
  if (cache) cache->scale = std::move(scale);
  return y;
}

Tensor dropout_backward(const Tensor& dy, const DropoutCache& cache) {
  require(dy.size() == cache.scale.size(), "dropout backward: gradient shape mismatch");
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= cache.scale[i];
  return dx;
}

// ---------------------------------------------------------------- misc

Tensor flatten(const Tensor& x) { return x.reshaped({x.size()}); }

double bce_loss(std::span<const double> p, std::span<const double> y) {
  require(p.size() == y.size() && !p.empty(), "bce_loss: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], kProbClip, 1.0 - kProbClip);
    sum += y[i] * std::log(q) + (1.0 - y[i]) * std::log(1.0 - q);
  }
  return -sum / static_cast<double>(p.size());
}

std::vector<double> bce_grad(std::span<const double> p, std::span<const double> y) {
  require(p.size() == y.size() && !p.empty(), "bce_grad: length mismatch");
  std::vector<double> g(p.size(), 0.0);
  const double n = static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < kProbClip || p[i] > 1.0 - kProbClip) continue;
    g[i] = -(y[i] / p[i] - (1.0 - y[i]) / (1.0 - p[i])) / n;
  }
  return g;
}

}  // namespace sidn
