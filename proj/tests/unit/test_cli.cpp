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
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "sidn/csv.hpp"
#include "sidn/dataset.hpp"
#include "sidn/error.hpp"
#include "sidn/io.hpp"
#include "sidn/metrics.hpp"
#include "sidn/model.hpp"
#include "sidn_tools/commands.hpp"

namespace sidn::tools {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kSmallConfig = R"({
  "seed": 5,
  "data": {"n_docs": 300, "min_len": 4, "max_len": 10, "neutral_lexicon": 150},
  "text": {"vocab_size": 300, "maxlen": 12},
  "word2vec": {"dim": 16, "epochs": 5},
  "model": {"variant": "baseline", "conv_filters": 16, "kernel": 3, "lstm_units": 8,
            "dense_units": 16, "l2_lambda": 0.0},
  "train": {"epochs_max": 30, "batch_size": 16, "lr": 0.003, "patience": 4},
  "explain": {"mode": "summary", "n_coalitions": 1024, "summary_instances": 20, "background": 20}
})";

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("sidn_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void run_pipeline(const RunConfig& cfg, const fs::path& dir) {
  cmd_gen_data(cfg, dir);
  cmd_prep(cfg, dir);
  cmd_embed(cfg, dir);
  cmd_train(cfg, dir);
  cmd_eval(cfg, dir);
  cmd_explain(cfg, dir);
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  for (auto& r : parse_csv(read_file(p)).records) rows.push_back(r.fields);
  return rows;
}

// Minimal well-formedness check: balanced, properly nested tags, quoted
// attributes, no stray '<' or unescaped '&' in text.
bool well_formed_xml(const std::string& s, std::string& why) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool root_seen = false;
  while (i < s.size()) {
    if (s[i] == '&') {
      const auto semi = s.find(';', i);
      const std::string ent = semi == std::string::npos ? "" : s.substr(i, semi - i + 1);
      static const std::set<std::string> ok = {"&amp;", "&lt;", "&gt;", "&quot;", "&apos;"};
      if (!ok.contains(ent)) { why = "bad entity at " + std::to_string(i); return false; }
      i = semi + 1;
      continue;
    }
    if (s[i] != '<') { ++i; continue; }
    const auto close = s.find('>', i);
    if (close == std::string::npos) { why = "unterminated tag"; return false; }
    std::string tag = s.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.starts_with("?") || tag.starts_with("!")) continue;
    if (tag.find('<') != std::string::npos) { why = "'<' inside tag"; return false; }
    if (tag.starts_with("/")) {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) { why = "mismatched </" + name + ">"; return false; }
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with("/");
    if (self_closing) tag.pop_back();
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
    if (name.empty()) { why = "empty tag name"; return false; }
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) { why = "unbalanced quotes in <" + name; return false; }
    if (stack.empty()) {
      if (root_seen) { why = "second root element"; return false; }
      root_seen = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) { why = "unclosed <" + stack.back() + ">"; return false; }
  if (!root_seen) { why = "no root element"; return false; }
  return true;
}

class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    cfg_ = new RunConfig(load_run_config(kSmallConfig, {}));
    dir_ = new fs::path(fresh_dir("pipeline"));
    run_pipeline(*cfg_, *dir_);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete cfg_;
    delete dir_;
  }
  static RunConfig* cfg_;
  static fs::path* dir_;
};
RunConfig* Pipeline::cfg_ = nullptr;
fs::path* Pipeline::dir_ = nullptr;

TEST(Config, DefaultsMatchPublishedHyperparameters) {
  const RunConfig c = default_run_config();
  EXPECT_EQ(c.vocab_size, 2000u);
  EXPECT_EQ(c.maxlen, 100u);
  EXPECT_EQ(c.word2vec.dim, 100u);
  EXPECT_EQ(c.model.conv_filters, 128u);
  EXPECT_EQ(c.model.kernel, 5u);
  EXPECT_EQ(c.model.lstm_units, 64u);
  EXPECT_DOUBLE_EQ(c.model.dropout, 0.5);
  EXPECT_DOUBLE_EQ(c.model.l2_lambda, 0.01);
  EXPECT_DOUBLE_EQ(c.train.lr, 1e-4);
  EXPECT_EQ(c.train.batch_size, 512u);
  EXPECT_EQ(c.train.epochs_max, 40u);
  EXPECT_EQ(c.train.patience, 4u);
  EXPECT_EQ(c.model.variant, Variant::kFinetuned);
}

TEST(Config, UnknownAndDerivedKeysAreRejected) {
  EXPECT_THROW(load_run_config(R"({"bogus": 1})", {}), Error);
  EXPECT_THROW(load_run_config(R"({"train": {"learning_rate": 0.1}})", {}), Error);
  EXPECT_THROW(load_run_config(R"({"model": {"filters": 3}})", {}), Error);
  EXPECT_THROW(load_run_config(R"({"model": {"maxlen": 50}})", {}), Error);
  EXPECT_THROW(load_run_config(R"({"train": {"lr": "fast"}})", {}), Error);
  EXPECT_THROW(load_run_config("[1, 2]", {}), Error);
  EXPECT_THROW(load_run_config("{", {}), Error);
  EXPECT_THROW(load_run_config(R"({"data": {"noise": 0.5}})", {}), Error);
  EXPECT_THROW(load_run_config(R"({"explain": {"mode": "waterfall"}})", {}), Error);
}

TEST(Config, FlagsBeatFileBeatsEnvironment) {
  EXPECT_EQ(load_run_config("{}", {}, "17").seed, 17u);
  EXPECT_EQ(load_run_config(R"({"seed": 3})", {}, "17").seed, 3u);
  Overrides ov;
  ov.seed = 9;
  ov.variant = Variant::kBaseline;
  ov.exact = true;
  ov.n_coalitions = 77;
  ov.mode = "summary";
  const RunConfig c = load_run_config(
      R"({"seed": 3, "model": {"variant": "finetuned"}, "explain": {"n_coalitions": 5}})", ov, "17");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.model.variant, Variant::kBaseline);
  EXPECT_TRUE(c.explain.exact);
  EXPECT_EQ(c.explain.n_coalitions, 77u);
  EXPECT_EQ(c.explain.mode, "summary");
  EXPECT_THROW(load_run_config("{}", {}, "12abc"), Error);
}

TEST(Config, HashTracksContentAndSeedsAreDerived) {
  const RunConfig a = load_run_config(R"({"seed": 3})", {});
  const RunConfig b = load_run_config(R"({"seed": 3})", {});
  const RunConfig c = load_run_config(R"({"seed": 4})", {});
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  std::set<std::uint64_t> seeds = {a.data.seed, a.word2vec.seed, a.model.seed, a.train.seed};
  EXPECT_EQ(seeds.size(), 4u);
}

TEST(Commands, UnwritableOutputFails) {
  const RunConfig c = load_run_config(kSmallConfig, {});
  EXPECT_THROW(cmd_gen_data(c, "/proc/sidn_cannot_exist/out"), Error);
}

TEST(Commands, PrepReportsMalformedRowsAndPadsEmptyText) {
  const RunConfig c = load_run_config(kSmallConfig, {});
  const fs::path d = fresh_dir("prep");
  write_file(d / files::kCorpus, "text,label\nfine words here,suicide\n\"unterminated,non-suicide\n");
  try {
    cmd_prep(c, d);
    ADD_FAILURE() << "malformed corpus accepted";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }

  std::string corpus = "text,label\n";
  for (int i = 0; i < 20; ++i) {
    corpus += "alpha beta gamma delta " + std::string(i % 2 ? "gloom" : "sunny") + "," + label_name(i % 2) + "\n";
  }
  corpus += ",non-suicide\n";
  write_file(d / files::kCorpus, corpus);
  cmd_prep(c, d);
  const EncodedDataset ds = decode_dataset(read_file(d / files::kDataset));
  ASSERT_EQ(ds.sequences.size(), 21u);
  EXPECT_EQ(ds.sequences.back().n_real, 0u);
  for (TokenId t : ds.sequences.back().indices) EXPECT_EQ(t, 0u);
  fs::remove_all(d);
}

TEST(Commands, ExactBeyondCapFails) {
  RunConfig c = load_run_config(kSmallConfig, {});
  c.data.n_docs = 60;
  c.data.min_len = 20;
  c.data.max_len = 24;
  c.maxlen = 30;
  c.model.maxlen = 30;
  c.train.epochs_max = 1;
  c.explain.mode = "force";
  c.explain.exact = true;
  const fs::path d = fresh_dir("cap");
  cmd_gen_data(c, d);
  cmd_prep(c, d);
  cmd_embed(c, d);
  cmd_train(c, d);
  EXPECT_THROW(cmd_explain(c, d), Error);
  fs::remove_all(d);
}

TEST_F(Pipeline, GeneratedCorpusIsBalanced) {
  const auto rows = csv_rows(*dir_ / files::kCorpus);
  ASSERT_EQ(rows.size(), 301u);
  int pos = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) pos += rows[i][1] == label_name(1);
  EXPECT_EQ(pos, 150);
}

TEST_F(Pipeline, EncodedSequencesHaveConfiguredLength) {
  const EncodedDataset ds = decode_dataset(read_file(*dir_ / files::kDataset));
  for (const auto& s : ds.sequences) EXPECT_EQ(s.indices.size(), cfg_->maxlen);
}

TEST_F(Pipeline, VectorsHaveOneRowPerWord) {
  const auto vocab = csv_rows(*dir_ / files::kVocab);
  const auto vec = csv_rows(*dir_ / files::kVectors);
  EXPECT_EQ(vec.size(), vocab.size());  // both carry a header
  for (const auto& r : vec) EXPECT_EQ(r.size(), cfg_->word2vec.dim + 1);
}

TEST_F(Pipeline, HistoryRowsFollowStoppingRule) {
  const auto hist = csv_rows(*dir_ / files::kHistory);
  const std::size_t epochs = hist.size() - 1;
  std::size_t best = 0;
  double best_loss = INFINITY;
  for (std::size_t i = 1; i < hist.size(); ++i) {
    const double v = std::stod(hist[i][3]);
    if (v < best_loss) {
      best_loss = v;
      best = i;
    }
  }
  if (epochs < cfg_->train.epochs_max) EXPECT_EQ(epochs, best + cfg_->train.patience);
}

TEST_F(Pipeline, MetricsMatchLibraryRecomputation) {
  const std::string text = read_file(*dir_ / files::kMetrics);
  const json m = json::parse(text);
  std::vector<std::string> keys;
  for (auto& [k, v] : m.items()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"accuracy", "auc", "confusion", "f1", "precision", "recall"}));

  const EncodedDataset ds = decode_dataset(read_file(*dir_ / files::kDataset));
  const Model model = load_weights(read_file(*dir_ / files::kWeights));
  std::vector<EncodedSequence> batch;
  std::vector<int> labels;
  for (std::size_t r : ds.splits.test) {
    batch.push_back(ds.sequences[r]);
    labels.push_back(ds.labels[r]);
  }
  const auto scores = infer(model, batch);
  EXPECT_EQ(text, metrics_to_json(evaluate_scores(scores, labels)));
}

TEST_F(Pipeline, SvgFilesAreWellFormed) {
  cmd_explain(load_run_config(kSmallConfig, {.mode = "force"}), *dir_);
  for (const char* name : {files::kConfusionSvg, files::kRocSvg, files::kSummarySvg, files::kForceSvg}) {
    const std::string svg = read_file(*dir_ / name);
    std::string why;
    EXPECT_TRUE(well_formed_xml(svg, why)) << name << ": " << why;
    EXPECT_NE(svg.find("<svg"), std::string::npos) << name;
  }
}

TEST_F(Pipeline, ForceExplanationIsAdditive) {
  const RunConfig c = load_run_config(kSmallConfig, {.n_coalitions = 40, .mode = "force"});
  cmd_explain(c, *dir_);
  const json e = json::parse(read_file(*dir_ / files::kExplanation));
  double total = e["base_value"].get<double>();
  for (const auto& f : e["features"]) total += f["phi"].get<double>();
  EXPECT_NEAR(total, e["prediction"].get<double>(), 1e-6);
}

TEST_F(Pipeline, ExactMatchesFullKernelEnumeration) {
  const EncodedDataset ds = decode_dataset(read_file(*dir_ / files::kDataset));
  for (std::size_t inst = 0; inst < 5; ++inst) {
    ASSERT_LE(ds.sequences[ds.splits.test[inst]].n_real, 10u);
    const RunConfig kern = load_run_config(kSmallConfig, {.n_coalitions = 1024, .mode = "force"});
    RunConfig exact = load_run_config(kSmallConfig, {.exact = true, .mode = "force"});
    RunConfig k2 = kern;
    k2.explain.instance = exact.explain.instance = inst;
    cmd_explain(k2, *dir_);
    const json a = json::parse(read_file(*dir_ / files::kExplanation));
    cmd_explain(exact, *dir_);
    const json b = json::parse(read_file(*dir_ / files::kExplanation));
    EXPECT_EQ(a["method"], "kernel");
    EXPECT_EQ(b["method"], "exact");
    ASSERT_EQ(a["features"].size(), b["features"].size());
    for (std::size_t i = 0; i < a["features"].size(); ++i) {
      EXPECT_NEAR(a["features"][i]["phi"].get<double>(), b["features"][i]["phi"].get<double>(), 1e-6);
    }
  }
}

TEST_F(Pipeline, SummaryRanksRiskWordFirst) {
  cmd_explain(*cfg_, *dir_);
  std::set<std::string> risk;
  for (const auto& r : csv_rows(*dir_ / files::kLexicon)) {
    if (r[1] == "risk") risk.insert(r[0]);
  }
  const auto summary = csv_rows(*dir_ / files::kSummary);
  ASSERT_GE(summary.size(), 2u);
  EXPECT_TRUE(risk.contains(summary[1][0])) << summary[1][0];
}

TEST_F(Pipeline, ManifestsRecordConfigHash) {
  for (const char* cmd : {"gen-data", "prep", "embed", "train", "eval", "explain"}) {
    const json m = json::parse(read_file(*dir_ / (std::string(cmd) + ".manifest.json")));
    EXPECT_EQ(m["config_hash"], cfg_->hash().c_str()) << cmd;
    EXPECT_FALSE(m["outputs"].empty()) << cmd;
  }
}

TEST_F(Pipeline, RerunIsByteIdentical) {
  const fs::path other = fresh_dir("rerun");
  run_pipeline(*cfg_, other);
  cmd_explain(*cfg_, *dir_);
  for (const char* name : {files::kCorpus, files::kVocab, files::kDataset, files::kVectors,
                           files::kWeights, files::kHistory, files::kMetrics, files::kSummary}) {
    EXPECT_EQ(read_file(*dir_ / name), read_file(other / name)) << name;
  }
  fs::remove_all(other);
}

}  // namespace
}  // namespace sidn::tools
