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

#ifndef SIDN_METRICS_HPP_
#define SIDN_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sidn {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Score >= threshold is a positive prediction.
ConfusionMatrix confusion(std::span<const double> scores, std::span<const int> labels,
                          double threshold = 0.5);

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  bool has_auc = false;
  ConfusionMatrix confusion;
  // Set when the corresponding ratio was 0/0 and reported as 0.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

// Harmonic mean; 0 when precision + recall == 0.
double f1_score(double precision, double recall);

MetricsReport classification_metrics(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // +inf for the (0, 0) endpoint
};
using RocCurve = std::vector<RocPoint>;

// Throws "ROC undefined" unless both classes are present.
RocCurve roc_points(std::span<const double> scores, std::span<const int> labels);
double auc_trapezoid(const RocCurve& roc);
// Mann-Whitney: (concordant + 0.5 * tied) / (P * N).
double auc_paircount(std::span<const double> scores, std::span<const int> labels);

// Confusion, derived metrics, and AUC in one call.
MetricsReport evaluate_scores(std::span<const double> scores, std::span<const int> labels,
                              double threshold = 0.5);

// {"accuracy","precision","recall","f1","auc","confusion":{tp,tn,fp,fn}}
std::string metrics_to_json(const MetricsReport& report);
// CSV "threshold,fpr,tpr".
std::string roc_to_csv(const RocCurve& roc);

}  // namespace sidn

#endif  // SIDN_METRICS_HPP_
