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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "golden.hpp"
#include "gradcases.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "sidn/io.hpp"
#include "sidn/metrics.hpp"
#include "sidn_tools/commands.hpp"

namespace {

namespace fs = std::filesystem;
using namespace sidn;
using namespace sidn::testing;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Verdict()>& body) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("sidn_acceptance_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Verdict gradient_fidelity() {
  const auto t0 = Clock::now();
  double layer_worst = 0.0, model_worst = 0.0;
  std::string layer_at, model_at;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (const auto& c : layer_grad_checks(seed)) {
      if (c.result.max_rel_error > layer_worst) {
        layer_worst = c.result.max_rel_error;
        layer_at = c.name;
      }
    }
    for (Variant v : {Variant::kBaseline, Variant::kFinetuned}) {
      for (const auto& c : model_grad_checks(seed, v)) {
        if (c.result.max_rel_error > model_worst) {
          model_worst = c.result.max_rel_error;
          model_at = c.name;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = layer_worst < 1e-5 && model_worst < 1e-5 && secs < 60.0;
  return {ok, fmt("layers worst %.2e, ", layer_worst) + "(" + layer_at + "), " +
                  fmt("full model worst %.2e ", model_worst) + "(" + model_at + "), threshold 1e-5, " +
                  fmt("%.1f s of 60", secs)};
}

Verdict f1_arithmetic() {
  const double f1 = f1_score(0.9458, 0.9400);
  return {std::fabs(f1 - 0.9429) <= 5e-5, fmt("F1(0.9458, 0.9400) = %.6f, target 0.9429 +- 5e-5", f1)};
}

Verdict overfit() {
  const auto t0 = Clock::now();
  const OverfitOutcome o = overfit_run(1, 300);
  const double secs = seconds_since(t0);
  return {o.accuracy == 1.0 && o.epochs > 0 && secs < 120.0,
          fmt("train accuracy %.4f after %.0f epochs (limit 300), %.1f s of 120", o.accuracy,
              static_cast<double>(o.epochs), secs)};
}

Verdict generalization() {
  const auto t0 = Clock::now();
  const tools::RunConfig cfg = tools::load_run_config(
      R"({"data": {"n_docs": 2000, "noise": 0.02},
          "model": {"variant": "finetuned"},
          "train": {"batch_size": 8, "lr": 0.001}})",
      {});
  const fs::path dir = scratch("generalization");
  tools::cmd_gen_data(cfg, dir);
  tools::cmd_prep(cfg, dir);
  tools::cmd_embed(cfg, dir);
  tools::cmd_train(cfg, dir);
  tools::cmd_eval(cfg, dir);
  const auto m = nlohmann::json::parse(read_file(dir / tools::files::kMetrics));
  const double acc = m["accuracy"].get<double>();
  const double auc = m["auc"].is_null() ? 0.0 : m["auc"].get<double>();
  const double secs = seconds_since(t0);
  fs::remove_all(dir);
  return {acc >= 0.95 && auc >= 0.98 && secs < 600.0,
          fmt("test accuracy %.4f (>= 0.95), AUC %.4f (>= 0.98), %.0f s of 600", acc, auc, secs)};
}

Verdict early_stopping() {
  const EarlyStopOutcome o = scripted_fit({0.5, 0.4, 0.45, 0.46, 0.47, 0.48}, 4, 40);
  const bool ok = o.stopped_epoch == 6 && o.best_epoch == 2 && o.epochs_run == 6 &&
                  o.restored_val_loss == 0.4;
  return {ok, fmt("stopped at %.0f, best %.0f, ", static_cast<double>(o.stopped_epoch),
                  static_cast<double>(o.best_epoch)) +
                  fmt("restored weights give val loss %.17g", o.restored_val_loss)};
}

Verdict auc_equivalence() {
  const double gap = auc_equivalence_gap(2024, 500);
  return {gap <= 1e-9, fmt("worst |trapezoid - pair count| over 500 sets = %.3e (<= 1e-9)", gap)};
}

Verdict shap_exactness() {
  const ShapCheck c = shap_checks(77, 50);
  const bool ok = c.kernel_vs_exact <= 1e-6 && c.additivity <= 1e-6 && c.linear <= 1e-9 &&
                  c.exact_vs_permutation <= 1e-9;
  return {ok, fmt("kernel vs exact %.2e, additivity %.2e, ", c.kernel_vs_exact, c.additivity) +
                  fmt("linear %.2e, exact vs permutation oracle %.2e", c.linear, c.exact_vs_permutation)};
}

Verdict determinism() {
  const tools::RunConfig cfg = tools::load_run_config(
      R"({"seed": 11,
          "data": {"n_docs": 300, "min_len": 4, "max_len": 10, "neutral_lexicon": 150},
          "text": {"vocab_size": 300, "maxlen": 12},
          "word2vec": {"dim": 16, "epochs": 5},
          "model": {"variant": "finetuned", "conv_filters": 16, "kernel": 3, "lstm_units": 8,
                    "dense_units": 16},
          "train": {"epochs_max": 8, "batch_size": 16, "lr": 0.003},
          "explain": {"n_coalitions": 256, "summary_instances": 10, "background": 20}})",
      {});
  tools::RunConfig summary_cfg = cfg;
  summary_cfg.explain.mode = "summary";
  std::vector<fs::path> dirs = {scratch("det_a"), scratch("det_b")};
  for (const auto& d : dirs) {
    tools::cmd_gen_data(cfg, d);
    tools::cmd_prep(cfg, d);
    tools::cmd_embed(cfg, d);
    tools::cmd_train(cfg, d);
    tools::cmd_eval(cfg, d);
    tools::cmd_explain(cfg, d);
    tools::cmd_explain(summary_cfg, d);
  }
  std::size_t compared = 0;
  std::string differing;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    const fs::path other = dirs[1] / entry.path().filename();
    ++compared;
    if (!fs::exists(other) || read_file(entry.path()) != read_file(other)) {
      differing += " " + entry.path().filename().string();
    }
  }
  for (const auto& d : dirs) fs::remove_all(d);
  return {differing.empty() && compared >= 20,
          std::to_string(compared) + " files compared" +
              (differing.empty() ? ", all byte-identical" : ", differ:" + differing)};
}

Verdict preprocessing() {
  const auto failures = preprocessing_golden_failures(SIDN_TEST_DATA_DIR);
  const std::size_t n = porter_golden_size(SIDN_TEST_DATA_DIR);
  std::string detail = std::to_string(n) + " Porter golden pairs plus fixed examples, " +
                       std::to_string(failures.size()) + " mismatches";
  if (!failures.empty()) detail += "; first: " + failures.front();
  return {failures.empty() && n > 0, detail};
}

}  // namespace

int main() {
  report("gradient-fidelity", gradient_fidelity);
  report("reported-f1-arithmetic", f1_arithmetic);
  report("overfit", overfit);
  report("generalization", generalization);
  report("early-stopping", early_stopping);
  report("auc-oracle-equivalence", auc_equivalence);
  report("shap-exactness", shap_exactness);
  report("determinism", determinism);
  report("preprocessing-golden", preprocessing);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
