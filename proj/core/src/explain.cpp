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

#include "sidn/explain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"
#include "sidn/csv.hpp"
#include "sidn/error.hpp"
#include "sidn/io.hpp"
#include "sidn/rng.hpp"

namespace sidn {

namespace {

using Coalition = std::uint64_t;  // bit i keeps real token i

constexpr std::size_t kEvalChunk = 256;
constexpr std::size_t kMaxKernelFeatures = 62;

EncodedSequence apply_coalition(const EncodedSequence& seq, Coalition c) {
  FeatureMask mask(seq.n_real);
  for (std::size_t i = 0; i < seq.n_real; ++i) mask[i] = (c >> i) & 1U;
  return mask_instance(seq, mask);
}

std::vector<double> evaluate(const Predictor& f, const EncodedSequence& seq,
                             const std::vector<Coalition>& coalitions) {
  std::vector<double> out;
  out.reserve(coalitions.size());
  for (std::size_t start = 0; start < coalitions.size(); start += kEvalChunk) {
    const std::size_t end = std::min(coalitions.size(), start + kEvalChunk);
    std::vector<EncodedSequence> batch;
    for (std::size_t i = start; i < end; ++i) batch.push_back(apply_coalition(seq, coalitions[i]));
    const auto values = f(batch);
    if (values.size() != batch.size()) throw Error("predictor returned the wrong batch size");
    out.insert(out.end(), values.begin(), values.end());
  }
  return out;
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

// All size-s subsets of {0..m-1}, in lexicographic bit order.
void subsets_of_size(std::size_t m, std::size_t s, std::vector<Coalition>& out) {
  if (s == 0) {
    out.push_back(0);
    return;
  }
  Coalition c = (Coalition{1} << s) - 1;
  const Coalition limit = Coalition{1} << m;
  while (c < limit) {
    out.push_back(c);
    const Coalition lowest = c & (~c + 1);
    const Coalition ripple = c + lowest;
    c = (((ripple ^ c) >> 2) / lowest) | ripple;
  }
}

Coalition random_subset(std::size_t m, std::size_t s, Rng& rng) {
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  Coalition c = 0;
  for (std::size_t k = 0; k < s; ++k) {
    const std::size_t j = k + rng.below(m - k);
    std::swap(idx[k], idx[j]);
    c |= Coalition{1} << idx[k];
  }
  return c;
}

// Weighted coalition design for KernelSHAP: sizes are enumerated in
// complementary pairs (s, M - s) from the outside in while the budget
// covers them; the leftover budget samples the remaining sizes in
// proportion to their kernel mass, adding each sample's complement too.
std::map<Coalition, double> coalition_design(std::size_t m, std::size_t budget, Rng& rng) {
  std::map<Coalition, double> design;
  std::size_t remaining = budget;
  std::vector<double> size_mass(m, 0.0);
  for (std::size_t s = 1; s < m; ++s) {
    size_mass[s] = shapley_kernel_weight(m, s) * binomial(m, s);
  }
  std::size_t lo = 1;
  for (; lo <= m / 2; ++lo) {
    const std::size_t hi = m - lo;
    const double count = lo == hi ? binomial(m, lo) : 2.0 * binomial(m, lo);
    if (count > static_cast<double>(remaining)) break;
    std::vector<Coalition> subsets;
    subsets_of_size(m, lo, subsets);
    if (hi != lo) subsets_of_size(m, hi, subsets);
    for (Coalition c : subsets) design[c] = shapley_kernel_weight(m, std::popcount(c));
    remaining -= static_cast<std::size_t>(count);
  }
  if (lo > m / 2 || remaining < 2) return design;
  const std::size_t hi_start = m - lo;

  // Sizes lo..hi_start are left; sample them.
  double left_mass = 0.0;
  for (std::size_t s = lo; s <= hi_start; ++s) left_mass += size_mass[s];
  const std::size_t pairs = remaining / 2;
  const double per_sample = left_mass / static_cast<double>(2 * pairs);
  const Coalition full = (Coalition{1} << m) - 1;
  for (std::size_t k = 0; k < pairs; ++k) {
    double u = rng.uniform() * left_mass;
    std::size_t s = lo;
    for (; s < hi_start; ++s) {
      if (u < size_mass[s]) break;
      u -= size_mass[s];
    }
    const Coalition c = random_subset(m, s, rng);
    design[c] += per_sample;
    design[full & ~c] += per_sample;
  }
  return design;
}

}  // namespace

EncodedSequence mask_instance(const EncodedSequence& seq, const FeatureMask& mask) {
  if (mask.size() != seq.n_real) throw Error("mask length differs from the number of tokens");
  EncodedSequence out = seq;
  const std::size_t first = seq.first_real();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) out.indices[first + i] = 0;
  }
  return out;
}

Predictor model_predictor(const Model& model) {
  return [&model](std::span<const EncodedSequence> batch) { return infer(model, batch); };
}

double ShapExplanation::additivity_gap() const {
  double sum = base_value;
  for (double p : phi) sum += p;
  return std::abs(sum - prediction);
}

double base_value(const Predictor& f, std::span<const EncodedSequence> background) {
  if (background.empty()) throw Error("empty background");
  double sum = 0.0;
  for (std::size_t start = 0; start < background.size(); start += kEvalChunk) {
    const std::size_t end = std::min(background.size(), start + kEvalChunk);
    for (double v : f(background.subspan(start, end - start))) sum += v;
  }
  return sum / static_cast<double>(background.size());
}

double base_value(const Model& model, std::span<const EncodedSequence> background) {
  return base_value(model_predictor(model), background);
}

double shapley_kernel_weight(std::size_t m, std::size_t s) {
  if (s == 0 || s >= m) throw Error("kernel weight undefined for endpoint coalitions");
  return static_cast<double>(m - 1) /
         (binomial(m, s) * static_cast<double>(s) * static_cast<double>(m - s));
}

ShapExplanation exact_shapley(const Predictor& f, const EncodedSequence& seq,
                              std::size_t max_features) {
  const std::size_t n = seq.n_real;
  if (n > max_features || n > kMaxKernelFeatures) {
    throw Error("too many features for exact enumeration");
  }
  const Coalition total = Coalition{1} << n;
  std::vector<Coalition> all(total);
  for (Coalition c = 0; c < total; ++c) all[c] = c;
  const std::vector<double> value = evaluate(f, seq, all);

  // |S|! (n - |S| - 1)! / n!
  std::vector<double> weight(n == 0 ? 1 : n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    weight[s] = 1.0 / (static_cast<double>(n) * binomial(n - 1, s));
  }

  ShapExplanation e;
  e.phi.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Coalition bit = Coalition{1} << i;
    for (Coalition c = 0; c < total; ++c) {
      if (c & bit) continue;
      e.phi[i] += weight[std::popcount(c)] * (value[c | bit] - value[c]);
    }
  }
  e.base_value = value[0];
  e.prediction = value[total - 1];
  e.instance = seq;
  e.method = "exact";
  e.coalitions = total;
  return e;
}

ShapExplanation exact_shapley(const Model& model, const EncodedSequence& seq,
                              std::size_t max_features) {
  return exact_shapley(model_predictor(model), seq, max_features);
}

ShapExplanation kernel_shap(const Predictor& f, const EncodedSequence& seq,
                            std::size_t n_coalitions, std::uint64_t seed) {
  const std::size_t m = seq.n_real;
  if (n_coalitions < 2) throw Error("n_coalitions must be at least 2");
  if (m == 0) throw Error("instance has no tokens to explain");
  if (m > kMaxKernelFeatures) throw Error("too many features for kernel SHAP");

  const Coalition full = (Coalition{1} << m) - 1;
  const std::vector<double> ends = evaluate(f, seq, {0, full});
  const double f0 = ends[0];
  const double f1 = ends[1];
  const double delta = f1 - f0;

  ShapExplanation e;
  e.base_value = f0;
  e.prediction = f1;
  e.instance = seq;
  e.method = "kernel";
  e.phi.assign(m, delta / static_cast<double>(m));
  e.coalitions = 2;
  if (m == 1) return e;

  Rng rng(seed);
  const auto design = coalition_design(m, n_coalitions - 2, rng);
  e.coalitions = 2 + design.size();
  if (design.empty()) return e;

  std::vector<Coalition> coalitions;
  std::vector<double> weights;
  for (const auto& [c, w] : design) {
    coalitions.push_back(c);
    weights.push_back(w);
  }
  const std::vector<double> values = evaluate(f, seq, coalitions);

  // phi = delta/m * 1 + N u with N an orthonormal basis of the sum-zero
  // subspace (Helmert columns), so efficiency holds for any u.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                static_cast<Eigen::Index>(m - 1));
  for (std::size_t k = 1; k < m; ++k) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)));
    for (std::size_t i = 0; i < k; ++i) basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k - 1)) = scale;
    basis(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = -static_cast<double>(k) * scale;
  }

  const auto rows = static_cast<Eigen::Index>(coalitions.size());
  Eigen::MatrixXd z(rows, static_cast<Eigen::Index>(m));
  Eigen::VectorXd target(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Coalition c = coalitions[static_cast<std::size_t>(r)];
    const double sw = std::sqrt(weights[static_cast<std::size_t>(r)]);
    for (std::size_t i = 0; i < m; ++i) {
      z(r, static_cast<Eigen::Index>(i)) = ((c >> i) & 1U) ? sw : 0.0;
    }
    const double size = std::popcount(c);
    target(r) = sw * (values[static_cast<std::size_t>(r)] - f0 -
                      size * delta / static_cast<double>(m));
  }
  const Eigen::MatrixXd a = z * basis;
  const Eigen::VectorXd u = a.completeOrthogonalDecomposition().solve(target);
  const Eigen::VectorXd adjust = basis * u;
  for (std::size_t i = 0; i < m; ++i) e.phi[i] += adjust(static_cast<Eigen::Index>(i));
  return e;
}

ShapExplanation kernel_shap(const Model& model, const EncodedSequence& seq,
                            std::size_t n_coalitions, std::uint64_t seed) {
  return kernel_shap(model_predictor(model), seq, n_coalitions, seed);
}

ForceData force_data(const ShapExplanation& e, const Vocabulary& vocab) {
  ForceData d;
  d.base_value = e.base_value;
  d.prediction = e.prediction;
  d.background_value = e.background_value;
  const std::size_t first = e.instance.first_real();
  for (std::size_t i = 0; i < e.phi.size(); ++i) {
    if (e.phi[i] == 0.0) continue;
    d.items.push_back({vocab.word_at(e.instance.indices[first + i]), i, e.phi[i], e.phi[i] > 0.0});
  }
  std::stable_sort(d.items.begin(), d.items.end(), [](const ForceItem& a, const ForceItem& b) {
    return std::abs(a.phi) > std::abs(b.phi);
  });
  return d;
}

GlobalSummary summary_aggregate(std::span<const ShapExplanation> explanations,
                                const Vocabulary& vocab) {
  if (explanations.empty()) throw Error("no explanations to summarize");
  struct Acc {
    double sum = 0.0;
    double abs_sum = 0.0;
    std::size_t count = 0;
  };
  std::map<std::string, Acc> by_word;
  GlobalSummary g;
  for (const auto& e : explanations) {
    const std::size_t first = e.instance.first_real();
    for (std::size_t i = 0; i < e.phi.size(); ++i) {
      Acc& a = by_word[vocab.word_at(e.instance.indices[first + i])];
      a.sum += e.phi[i];
      a.abs_sum += std::abs(e.phi[i]);
      ++a.count;
      ++g.total_positions;
    }
  }
  for (const auto& [word, a] : by_word) {
    const auto n = static_cast<double>(a.count);
    g.rows.push_back({word, a.sum / n, a.abs_sum / n, a.count});
  }
  std::stable_sort(g.rows.begin(), g.rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return a.mean_abs_phi > b.mean_abs_phi;
  });
  return g;
}

std::string explanation_to_json(const ShapExplanation& e, const Vocabulary& vocab) {
  nlohmann::ordered_json j;
  j["method"] = e.method;
  j["coalitions"] = e.coalitions;
  j["base_value"] = e.base_value;
  j["base_value_kind"] = "all_masked";
  if (e.background_value) j["background_value"] = *e.background_value;
  j["prediction"] = e.prediction;
  j["additivity_gap"] = e.additivity_gap();
  auto features = nlohmann::ordered_json::array();
  const std::size_t first = e.instance.first_real();
  for (std::size_t i = 0; i < e.phi.size(); ++i) {
    const TokenId id = e.instance.indices[first + i];
    features.push_back({{"position", i}, {"index", id}, {"word", vocab.word_at(id)},
                        {"phi", e.phi[i]}});
  }
  j["features"] = std::move(features);
  return j.dump(2) + "\n";
}

std::string summary_to_csv(const GlobalSummary& summary) {
  std::string out = "word,mean_phi,mean_abs_phi,count\n";
  for (const auto& r : summary.rows) {
    out += csv_field(r.word) + "," + format_double(r.mean_phi) + "," +
           format_double(r.mean_abs_phi) + "," + std::to_string(r.count) + "\n";
  }
  return out;
}

}  // namespace sidn
