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

#ifndef SIDN_TOOLS_COMMANDS_HPP_
#define SIDN_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sidn/model.hpp"
#include "sidn/synthetic.hpp"
#include "sidn/trainer.hpp"
#include "sidn/word2vec.hpp"

namespace sidn::tools {

struct ExplainSettings {
  std::string mode = "force";  // force | summary
  std::size_t n_coalitions = 512;
  std::size_t instance = 0;  // position within the test split
  bool exact = false;
  std::size_t summary_instances = 20;
  std::size_t background = 50;
  std::size_t top_k = 20;
};

// Everything one pipeline run needs. Module seeds are derived from `seed`.
struct RunConfig {
  std::uint64_t seed = 1;
  SyntheticSpec data;
  std::size_t vocab_size = kDefaultVocabSize;
  std::size_t maxlen = kDefaultMaxLen;
  W2VConfig word2vec;
  ModelConfig model;
  TrainConfig train;
  ExplainSettings explain;

  std::string to_json() const;
  // First 16 hex digits of FNV-1a over to_json().
  std::string hash() const;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<Variant> variant;
  std::optional<bool> exact;
  std::optional<std::size_t> n_coalitions;
  std::optional<std::string> mode;
};

// Parses a nested JSON document (sections data, text, word2vec, model,
// train, explain). Unknown keys are rejected. Flags win over file values;
// SIDN_SEED is consulted only when neither sets the seed.
RunConfig load_run_config(const std::string& json_text, const Overrides& overrides,
                          const char* env_seed = nullptr);
RunConfig default_run_config();

// Each command reads and writes fixed file names inside `dir`, writes a
// "<command>.manifest.json" with the config hash and output digests, and
// returns the paths it wrote.
using Outputs = std::vector<std::filesystem::path>;

Outputs cmd_gen_data(const RunConfig& cfg, const std::filesystem::path& dir);
Outputs cmd_prep(const RunConfig& cfg, const std::filesystem::path& dir);
Outputs cmd_embed(const RunConfig& cfg, const std::filesystem::path& dir);
Outputs cmd_train(const RunConfig& cfg, const std::filesystem::path& dir);
Outputs cmd_eval(const RunConfig& cfg, const std::filesystem::path& dir);
Outputs cmd_explain(const RunConfig& cfg, const std::filesystem::path& dir);

// File names used inside the working directory.
namespace files {
inline constexpr const char* kCorpus = "corpus.csv";
inline constexpr const char* kLexicon = "lexicon.csv";
inline constexpr const char* kVocab = "vocab.csv";
inline constexpr const char* kDataset = "dataset.bin";
inline constexpr const char* kVectors = "vectors.csv";
inline constexpr const char* kWeights = "weights.sidn";
inline constexpr const char* kHistory = "history.csv";
inline constexpr const char* kMetrics = "metrics.json";
inline constexpr const char* kRoc = "roc.csv";
inline constexpr const char* kConfusionSvg = "confusion.svg";
inline constexpr const char* kRocSvg = "roc.svg";
inline constexpr const char* kExplanation = "explanation.json";
inline constexpr const char* kForceSvg = "force.svg";
inline constexpr const char* kSummary = "summary.csv";
inline constexpr const char* kSummarySvg = "summary.svg";
}  // namespace files

}  // namespace sidn::tools

#endif  // SIDN_TOOLS_COMMANDS_HPP_
