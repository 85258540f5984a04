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

#ifndef SIDN_EXPLAIN_HPP_
#define SIDN_EXPLAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sidn/model.hpp"
#include "sidn/textprep.hpp"

namespace sidn {

// One entry per non-padding position; true keeps the token.
using FeatureMask = std::vector<bool>;

// Masked positions become the padding index. Throws on length mismatch.
EncodedSequence mask_instance(const EncodedSequence& seq, const FeatureMask& mask);

// Batched black-box scorer. Explanations only ever call this.
using Predictor = std::function<std::vector<double>(std::span<const EncodedSequence>)>;

Predictor model_predictor(const Model& model);

struct ShapExplanation {
  double base_value = 0.0;  // f(all features masked)
  std::vector<double> phi;  // per non-padding position
  double prediction = 0.0;
  EncodedSequence instance;
  // Mean prediction over a background set, when one was supplied.
  std::optional<double> background_value;
  std::string method;  // "exact" or "kernel"
  std::size_t coalitions = 0;

  double additivity_gap() const;
};

// Mean inference prediction over the background. Throws on empty input.
double base_value(const Predictor& f, std::span<const EncodedSequence> background);
double base_value(const Model& model, std::span<const EncodedSequence> background);

inline constexpr std::size_t kExactShapleyCap = 12;

// Enumerates all 2^n coalitions. Throws "too many features for exact
// enumeration" when n_real > max_features.
ShapExplanation exact_shapley(const Predictor& f, const EncodedSequence& seq,
                              std::size_t max_features = kExactShapleyCap);
ShapExplanation exact_shapley(const Model& model, const EncodedSequence& seq,
                              std::size_t max_features = kExactShapleyCap);

// Shapley-kernel weighted least squares with efficiency enforced exactly.
// n_coalitions counts the empty and full coalitions; a budget of at least
// 2^n_real enumerates every coalition.
ShapExplanation kernel_shap(const Predictor& f, const EncodedSequence& seq,
                            std::size_t n_coalitions, std::uint64_t seed);
ShapExplanation kernel_shap(const Model& model, const EncodedSequence& seq,
                            std::size_t n_coalitions, std::uint64_t seed);

// (M - 1) / (C(M, s) * s * (M - s)) for 0 < s < M.
double shapley_kernel_weight(std::size_t m, std::size_t s);

struct ForceItem {
  std::string word;
  std::size_t position = 0;  // among the non-padding tokens
  double phi = 0.0;
  bool positive = false;  // pushes toward the suicidal class
};

struct ForceData {
  double base_value = 0.0;
  double prediction = 0.0;
  std::optional<double> background_value;
  std::vector<ForceItem> items;  // |phi| descending, zero contributions omitted
};

ForceData force_data(const ShapExplanation& e, const Vocabulary& vocab);

struct SummaryRow {
  std::string word;
  double mean_phi = 0.0;
  double mean_abs_phi = 0.0;
  std::size_t count = 0;
};

struct GlobalSummary {
  std::vector<SummaryRow> rows;  // mean |phi| descending, ties by word
  std::size_t total_positions = 0;
};

// Throws on an empty list.
GlobalSummary summary_aggregate(std::span<const ShapExplanation> explanations,
                                const Vocabulary& vocab);

std::string explanation_to_json(const ShapExplanation& e, const Vocabulary& vocab);
// CSV "word,mean_phi,mean_abs_phi,count".
std::string summary_to_csv(const GlobalSummary& summary);

}  // namespace sidn

#endif  // SIDN_EXPLAIN_HPP_
