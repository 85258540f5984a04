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

#include "sidn/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "sidn/error.hpp"
#include "sidn/io.hpp"

namespace sidn {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error("scores and labels differ in length");
  if (scores.empty()) throw Error("no scores");
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error("labels must be 0 or 1");
  }
}

// Returns num/den, or 0 with `degenerate` set when den == 0.
double ratio(std::size_t num, std::size_t den, bool& degenerate) {
  degenerate = den == 0;
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion(std::span<const double> scores, std::span<const int> labels,
                          double threshold) {
  check_inputs(scores, labels);
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      predicted ? ++cm.tp : ++cm.fn;
    } else {
      predicted ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

double f1_score(double precision, double recall) {
  const double s = precision + recall;
  return s == 0.0 ? 0.0 : 2.0 * precision * recall / s;
}

MetricsReport classification_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error("empty confusion matrix");
  MetricsReport r;
  r.confusion = cm;
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  r.precision = ratio(cm.tp, cm.tp + cm.fp, r.precision_degenerate);
  r.recall = ratio(cm.tp, cm.tp + cm.fn, r.recall_degenerate);
  r.f1_degenerate = r.precision + r.recall == 0.0;
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

RocCurve roc_points(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  const auto P = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t N = labels.size() - P;
  if (P == 0 || N == 0) throw Error("ROC undefined");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      labels[order[i]] == 1 ? ++tp : ++fp;
      ++i;
    }
    roc.push_back({static_cast<double>(fp) / static_cast<double>(N),
                   static_cast<double>(tp) / static_cast<double>(P), s});
  }
  return roc;
}

double auc_trapezoid(const RocCurve& roc) {
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) * 0.5;
  }
  return area;
}

double auc_paircount(std::span<const double> scores, std::span<const int> labels) {
  check_inputs(scores, labels);
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    (labels[i] == 1 ? pos : neg).push_back(scores[i]);
  }
  if (pos.empty() || neg.empty()) throw Error("ROC undefined");
  double credit = 0.0;
  for (double p : pos) {
    for (double n : neg) {
      if (p > n) credit += 1.0;
      else if (p == n) credit += 0.5;
    }
  }
  return credit / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

MetricsReport evaluate_scores(std::span<const double> scores, std::span<const int> labels,
                              double threshold) {
  MetricsReport r = classification_metrics(confusion(scores, labels, threshold));
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (positives > 0 && static_cast<std::size_t>(positives) < labels.size()) {
    r.auc = auc_trapezoid(roc_points(scores, labels));
    r.has_auc = true;
  }
  return r;
}

std::string metrics_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["accuracy"] = report.accuracy;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  j["auc"] = report.has_auc ? nlohmann::ordered_json(report.auc) : nlohmann::ordered_json();
  j["confusion"] = {{"tp", report.confusion.tp},
                    {"tn", report.confusion.tn},
                    {"fp", report.confusion.fp},
                    {"fn", report.confusion.fn}};
  return j.dump(2) + "\n";
}

std::string roc_to_csv(const RocCurve& roc) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : roc) {
    out += format_double(p.threshold) + "," + format_double(p.fpr) + "," + format_double(p.tpr) +
           "\n";
  }
  return out;
}

}  // namespace sidn
