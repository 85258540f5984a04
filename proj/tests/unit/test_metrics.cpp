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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "sidn/error.hpp"
#include "sidn/metrics.hpp"
#include "sidn/rng.hpp"

namespace sidn {
namespace {

using V = std::vector<double>;
using L = std::vector<int>;

TEST(Confusion, Examples) {
  const ConfusionMatrix cm = confusion(V{0.9, 0.2, 0.6, 0.4}, L{1, 0, 0, 1});
  EXPECT_EQ(cm, (ConfusionMatrix{1, 1, 1, 1}));
  EXPECT_EQ(confusion(V{0.99, 0.01}, L{1, 0}), (ConfusionMatrix{1, 1, 0, 0}));
  EXPECT_EQ(confusion(V{0.5}, L{1}).tp, 1U);
  EXPECT_EQ(confusion(V{0.5}, L{0}).fp, 1U);
  EXPECT_THROW(confusion(V{0.5, 0.1}, L{1}), Error);
  EXPECT_THROW(confusion(V{}, L{}), Error);
}

TEST(ClassificationMetrics, ReportedF1Arithmetic) {
  EXPECT_NEAR(f1_score(0.9458, 0.9400), 0.9429, 5e-5);
}

TEST(ClassificationMetrics, Examples) {
  const MetricsReport perfect = classification_metrics({10, 10, 0, 0});
  EXPECT_EQ(perfect.accuracy, 1.0);
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);
  const MetricsReport half = classification_metrics({1, 1, 1, 1});
  EXPECT_EQ(half.accuracy, 0.5);
  EXPECT_EQ(half.precision, 0.5);
  EXPECT_EQ(half.recall, 0.5);
  EXPECT_EQ(half.f1, 0.5);
  EXPECT_THROW(classification_metrics({}), Error);
}

TEST(ClassificationMetrics, DegenerateRatiosAreFlaggedZero) {
  const MetricsReport r = classification_metrics({0, 5, 0, 0});
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f1, 0.0);
  EXPECT_TRUE(r.precision_degenerate);
  EXPECT_TRUE(r.recall_degenerate);
  EXPECT_TRUE(r.f1_degenerate);
  EXPECT_EQ(r.accuracy, 1.0);
}

TEST(ClassificationMetrics, F1IsBetweenPrecisionAndRecall) {
  Rng rng(5);
  for (int k = 0; k < 1000; ++k) {
    const ConfusionMatrix cm{1 + rng.below(50), rng.below(50), rng.below(50), rng.below(50)};
    const MetricsReport r = classification_metrics(cm);
    const double p = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    const double q = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    EXPECT_DOUBLE_EQ(r.precision, p);
    EXPECT_DOUBLE_EQ(r.recall, q);
    EXPECT_NEAR(r.f1, 2 * p * q / (p + q), 1e-12);
    EXPECT_LE(r.f1, std::max(p, q) + 1e-15);
    EXPECT_GE(r.f1, std::min(p, q) - 1e-15);
    for (double x : {r.accuracy, r.precision, r.recall, r.f1}) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

TEST(Roc, SeparatedIdenticalAndMixedCases) {
  const RocCurve sep = roc_points(V{0.9, 0.8, 0.2, 0.1}, L{1, 1, 0, 0});
  bool corner = false;
  for (const auto& p : sep) corner = corner || (p.fpr == 0.0 && p.tpr == 1.0);
  EXPECT_TRUE(corner);
  EXPECT_EQ(auc_trapezoid(sep), 1.0);

  const RocCurve flat = roc_points(V{0.3, 0.3, 0.3}, L{1, 0, 1});
  ASSERT_EQ(flat.size(), 2U);
  EXPECT_EQ(flat[0].fpr, 0.0);
  EXPECT_EQ(flat[0].tpr, 0.0);
  EXPECT_TRUE(std::isinf(flat[0].threshold));
  EXPECT_EQ(flat[1].fpr, 1.0);
  EXPECT_EQ(flat[1].tpr, 1.0);
  EXPECT_EQ(auc_trapezoid(flat), 0.5);

  const V s{0.6, 0.3, 0.5, 0.2};
  const L y{1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(auc_trapezoid(roc_points(s, y)), 0.75);
  EXPECT_DOUBLE_EQ(auc_paircount(s, y), 0.75);
  EXPECT_DOUBLE_EQ(testing::brute_pair_auc(s, y), 0.75);
}

TEST(Roc, SingleClassIsUndefined) {
  EXPECT_THROW(roc_points(V{0.1, 0.2}, L{1, 1}), Error);
  EXPECT_THROW(auc_paircount(V{0.1, 0.2}, L{0, 0}), Error);
}

TEST(Roc, CurveIsMonotoneFromOriginToOne) {
  Rng rng(8);
  for (int k = 0; k < 50; ++k) {
    const auto set = testing::random_scored_set(rng, 60);
    const RocCurve c = roc_points(set.scores, set.labels);
    ASSERT_GE(c.size(), 2U);
    EXPECT_EQ(c.front().fpr, 0.0);
    EXPECT_EQ(c.front().tpr, 0.0);
    EXPECT_EQ(c.back().fpr, 1.0);
    EXPECT_EQ(c.back().tpr, 1.0);
    for (std::size_t i = 1; i < c.size(); ++i) {
      EXPECT_GE(c[i].fpr, c[i - 1].fpr);
      EXPECT_GE(c[i].tpr, c[i - 1].tpr);
      EXPECT_LT(c[i].threshold, c[i - 1].threshold);
    }
  }
}

TEST(Auc, OneTiePairCountsHalf) {
  EXPECT_DOUBLE_EQ(auc_paircount(V{0.4, 0.4}, L{1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(auc_trapezoid(roc_points(V{0.4, 0.4}, L{1, 0})), 0.5);
}

TEST(Auc, TrapezoidMatchesPairCountOracle) {
  EXPECT_LT(testing::auc_equivalence_gap(11, 500), 1e-9);
  Rng rng(12);
  for (int k = 0; k < 100; ++k) {
    const auto s = testing::random_scored_set(rng, 100);
    EXPECT_NEAR(auc_paircount(s.scores, s.labels), testing::brute_pair_auc(s.scores, s.labels),
                1e-12);
  }
}

TEST(Invariance, StrictlyMonotoneTransform) {
  Rng rng(13);
  for (int k = 0; k < 50; ++k) {
    const auto s = testing::random_scored_set(rng, 80);
    V t;
    for (double x : s.scores) t.push_back(std::exp(3.0 * x) - 7.0);
    EXPECT_NEAR(auc_trapezoid(roc_points(t, s.labels)), auc_trapezoid(roc_points(s.scores, s.labels)),
                1e-12);
    EXPECT_EQ(confusion(t, s.labels, std::exp(1.5) - 7.0), confusion(s.scores, s.labels, 0.5));
  }
}

TEST(Invariance, SwappingClassesAndScores) {
  Rng rng(14);
  for (int k = 0; k < 50; ++k) {
    V s;
    L y;
    for (int i = 0; i < 70; ++i) {
      // Stay off 0.5 so the >= convention does not break the symmetry.
      double u = rng.uniform();
      if (std::abs(u - 0.5) < 1e-9) u = 0.25;
      s.push_back(u);
      y.push_back(rng.bernoulli(0.5) ? 1 : 0);
    }
    y[0] = 1;
    y[1] = 0;
    V s2;
    L y2;
    for (std::size_t i = 0; i < s.size(); ++i) {
      s2.push_back(1.0 - s[i]);
      y2.push_back(1 - y[i]);
    }
    EXPECT_DOUBLE_EQ(evaluate_scores(s, y).accuracy, evaluate_scores(s2, y2).accuracy);
    EXPECT_NEAR(auc_paircount(s, y), auc_paircount(s2, y2), 1e-12);
  }
}

TEST(Export, JsonKeysAndRocCsv) {
  const MetricsReport r = evaluate_scores(V{0.9, 0.2, 0.6, 0.4}, L{1, 0, 0, 1});
  const std::string j = metrics_to_json(r);
  std::size_t last = 0;
  for (const char* key : {"\"accuracy\"", "\"precision\"", "\"recall\"", "\"f1\"", "\"auc\"",
                          "\"confusion\"", "\"tp\"", "\"tn\"", "\"fp\"", "\"fn\""}) {
    const std::size_t at = j.find(key);
    ASSERT_NE(at, std::string::npos) << key;
    EXPECT_GT(at, last) << key;
    last = at;
  }
  const std::string csv = roc_to_csv(roc_points(V{0.9, 0.2}, L{1, 0}));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "threshold,fpr,tpr");

  MetricsReport single = evaluate_scores(V{0.9, 0.8}, L{1, 1});
  EXPECT_FALSE(single.has_auc);
  EXPECT_NE(metrics_to_json(single).find("\"auc\": null"), std::string::npos)
      << metrics_to_json(single);
}

}  // namespace
}  // namespace sidn
