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

#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "sidn/error.hpp"
#include "sidn/io.hpp"
#include "sidn_tools/commands.hpp"

namespace {

using sidn::tools::Outputs;
using sidn::tools::RunConfig;
using Command = std::function<Outputs(const RunConfig&, const std::filesystem::path&)>;

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string variant;
  bool exact = false;
  std::size_t n_coalitions = 0;
  std::string mode;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Suicidal-ideation text classifier pipeline"};
  app.require_subcommand(1);

  const std::map<std::string, std::pair<Command, std::string>> commands = {
      {"gen-data", {sidn::tools::cmd_gen_data, "Generate the planted synthetic corpus"}},
      {"prep", {sidn::tools::cmd_prep, "Tokenize, split and encode the corpus"}},
      {"embed", {sidn::tools::cmd_embed, "Train CBOW word vectors on the training split"}},
      {"train", {sidn::tools::cmd_train, "Train the classifier with early stopping"}},
      {"eval", {sidn::tools::cmd_eval, "Score the test split and write metrics and plots"}},
      {"explain", {sidn::tools::cmd_explain, "SHAP force or summary explanations"}},
  };

  Flags flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config", flags.config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "Master seed (overrides config and SIDN_SEED)");
    sub->add_option("--out", flags.out, "Working directory for inputs and outputs")
        ->capture_default_str();
    sub->add_option("--variant", flags.variant, "Model variant")
        ->check(CLI::IsMember({"baseline", "finetuned"}));
    sub->add_flag("--exact", flags.exact, "Exact Shapley enumeration instead of KernelSHAP");
    sub->add_option("--n-coalitions", flags.n_coalitions, "KernelSHAP coalition budget");
    sub->add_option("--mode", flags.mode, "Explanation mode")
        ->check(CLI::IsMember({"force", "summary"}));
    subs[name] = sub;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    sidn::tools::Overrides ov;
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      if (sub->count("--seed")) ov.seed = flags.seed;
      if (sub->count("--variant")) ov.variant = sidn::parse_variant(flags.variant);
      if (sub->count("--exact")) ov.exact = true;
      if (sub->count("--n-coalitions")) ov.n_coalitions = flags.n_coalitions;
      if (sub->count("--mode")) ov.mode = flags.mode;
      const std::string text = flags.config.empty() ? "{}" : sidn::read_file(flags.config);
      const RunConfig cfg = sidn::tools::load_run_config(text, ov, std::getenv("SIDN_SEED"));
      const Outputs written = commands.at(name).first(cfg, flags.out);
      for (const auto& p : written) std::cout << p.string() << "\n";
    }
  } catch (const sidn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
