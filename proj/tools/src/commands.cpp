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

#include "sidn_tools/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "json.hpp"
#include "sidn/csv.hpp"
#include "sidn/dataset.hpp"
#include "sidn/error.hpp"
#include "sidn/explain.hpp"
#include "sidn/io.hpp"
#include "sidn/metrics.hpp"
#include "sidn/textprep.hpp"
#include "sidn_tools/svg.hpp"

namespace sidn::tools {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  Rng rng = Rng(seed).fork(salt);
  return rng.next();
}

// Copies keys of `section` into the setter table, rejecting unknown ones.
template <typename Table>
void apply_section(const json& section, std::string_view name, const Table& table) {
  if (!section.is_object()) throw Error("config section '" + std::string(name) + "' must be an object");
  for (auto& [key, value] : section.items()) {
    auto it = table.find(key);
    if (it == table.end()) {
      throw Error("unknown config key '" + std::string(name) + "." + key + "'");
    }
    try {
      it->second(value);
    } catch (const json::exception& e) {
      throw Error("config key '" + std::string(name) + "." + key + "': " + e.what());
    }
  }
}

using Setters = std::map<std::string, std::function<void(const json&)>>;

template <typename T>
std::function<void(const json&)> set(T& field) {
  return [&field](const json& v) { field = v.get<T>(); };
}

void write_output(const fs::path& path, std::string_view contents, Outputs& outputs) {
  write_file(path, contents);
  outputs.push_back(path);
}

void write_manifest(const RunConfig& cfg, const fs::path& dir, std::string_view command,
                    Outputs& outputs) {
  ojson m;
  m["command"] = command;
  m["config_hash"] = cfg.hash();
  m["seed"] = cfg.seed;
  auto list = ojson::array();
  for (const auto& p : outputs) {
    list.push_back({{"file", p.filename().string()}, {"fnv1a", fnv1a_hex(read_file(p))}});
  }
  m["outputs"] = std::move(list);
  const fs::path path = dir / (std::string(command) + ".manifest.json");
  write_file(path, m.dump(2) + "\n");
  outputs.push_back(path);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

Vocabulary load_vocab(const fs::path& dir) {
  return Vocabulary::from_csv(read_file(dir / files::kVocab));
}

EncodedDataset load_dataset(const fs::path& dir) {
  return decode_dataset(read_file(dir / files::kDataset));
}

Model load_model(const fs::path& dir, const EncodedDataset& ds, const Vocabulary& vocab) {
  Model model = load_weights(read_file(dir / files::kWeights));
  if (model.config.maxlen != ds.maxlen || model.config.vocab_size != vocab.size()) {
    throw Error("weights/config mismatch: model expects maxlen " +
                std::to_string(model.config.maxlen) + " and vocabulary " +
                std::to_string(model.config.vocab_size) + ", data has " +
                std::to_string(ds.maxlen) + " and " + std::to_string(vocab.size()));
  }
  return model;
}

std::vector<EncodedSequence> rows_of(const EncodedDataset& ds,
                                     std::span<const std::size_t> rows) {
  std::vector<EncodedSequence> out;
  for (std::size_t r : rows) out.push_back(ds.sequences.at(r));
  return out;
}

ShapExplanation explain_one(const Model& model, const EncodedSequence& seq,
                            const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.explain.exact) return exact_shapley(model, seq, kExactShapleyCap);
  return kernel_shap(model, seq, cfg.explain.n_coalitions, seed);
}

}  // namespace

std::string RunConfig::to_json() const {
  ojson j;
  j["seed"] = seed;
  j["data"] = {{"n_docs", data.n_docs},       {"risk_lexicon", data.risk_lexicon},
               {"neutral_lexicon", data.neutral_lexicon}, {"min_len", data.min_len},
               {"max_len", data.max_len},     {"noise", data.noise}};
  j["text"] = {{"vocab_size", vocab_size}, {"maxlen", maxlen}};
  j["word2vec"] = {{"dim", word2vec.dim},         {"window", word2vec.window},
                   {"negatives", word2vec.negatives}, {"epochs", word2vec.epochs},
                   {"initial_lr", word2vec.initial_lr}, {"min_count", word2vec.min_count}};
  j["model"] = ojson::parse(model.to_json());
  j["model"].erase("seed");
  j["model"].erase("vocab_size");
  j["model"].erase("maxlen");
  j["model"].erase("emb_dim");
  j["train"] = {{"epochs_max", train.epochs_max}, {"batch_size", train.batch_size},
                {"lr", train.lr},                 {"beta1", train.beta1},
                {"beta2", train.beta2},           {"adam_eps", train.adam_eps},
                {"patience", train.patience},     {"shuffle", train.shuffle}};
  j["explain"] = {{"mode", explain.mode},
                  {"n_coalitions", explain.n_coalitions},
                  {"instance", explain.instance},
                  {"exact", explain.exact},
                  {"summary_instances", explain.summary_instances},
                  {"background", explain.background},
                  {"top_k", explain.top_k}};
  return j.dump();
}

std::string RunConfig::hash() const { return fnv1a_hex(to_json()); }

RunConfig default_run_config() { return load_run_config("{}", {}); }

RunConfig load_run_config(const std::string& json_text, const Overrides& overrides,
                          const char* env_seed) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error("config must be a JSON object");

  RunConfig cfg;
  std::optional<std::uint64_t> file_seed;
  json model_section = json::object();
  for (auto& [key, value] : root.items()) {
    try {
      if (key == "seed") {
        file_seed = value.get<std::uint64_t>();
      } else if (key == "data") {
        apply_section(value, key,
                      Setters{{"n_docs", set(cfg.data.n_docs)},
                              {"risk_lexicon", set(cfg.data.risk_lexicon)},
                              {"neutral_lexicon", set(cfg.data.neutral_lexicon)},
                              {"min_len", set(cfg.data.min_len)},
                              {"max_len", set(cfg.data.max_len)},
                              {"noise", set(cfg.data.noise)}});
      } else if (key == "text") {
        apply_section(value, key,
                      Setters{{"vocab_size", set(cfg.vocab_size)}, {"maxlen", set(cfg.maxlen)}});
      } else if (key == "word2vec") {
        apply_section(value, key,
                      Setters{{"dim", set(cfg.word2vec.dim)},
                              {"window", set(cfg.word2vec.window)},
                              {"negatives", set(cfg.word2vec.negatives)},
                              {"epochs", set(cfg.word2vec.epochs)},
                              {"initial_lr", set(cfg.word2vec.initial_lr)},
                              {"min_count", set(cfg.word2vec.min_count)}});
      } else if (key == "model") {
        if (!value.is_object()) throw Error("config section 'model' must be an object");
        for (const char* owned : {"seed", "vocab_size", "maxlen", "emb_dim"}) {
          if (value.contains(owned)) {
            throw Error(std::string("model.") + owned +
                        " is derived (use seed, text or word2vec sections)");
          }
        }
        model_section = value;
      } else if (key == "train") {
        apply_section(value, key,
                      Setters{{"epochs_max", set(cfg.train.epochs_max)},
                              {"batch_size", set(cfg.train.batch_size)},
                              {"lr", set(cfg.train.lr)},
                              {"beta1", set(cfg.train.beta1)},
                              {"beta2", set(cfg.train.beta2)},
                              {"adam_eps", set(cfg.train.adam_eps)},
                              {"patience", set(cfg.train.patience)},
                              {"shuffle", set(cfg.train.shuffle)}});
      } else if (key == "explain") {
        apply_section(value, key,
                      Setters{{"mode", set(cfg.explain.mode)},
                              {"n_coalitions", set(cfg.explain.n_coalitions)},
                              {"instance", set(cfg.explain.instance)},
                              {"exact", set(cfg.explain.exact)},
                              {"summary_instances", set(cfg.explain.summary_instances)},
                              {"background", set(cfg.explain.background)},
                              {"top_k", set(cfg.explain.top_k)}});
      } else {
        throw Error("unknown config key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw Error("config key '" + key + "': " + e.what());
    }
  }

  if (overrides.variant) model_section["variant"] = std::string(variant_name(*overrides.variant));
  cfg.model = ModelConfig::from_json(model_section.dump());

  if (overrides.seed) {
    cfg.seed = *overrides.seed;
  } else if (file_seed) {
    cfg.seed = *file_seed;
  } else if (env_seed != nullptr && *env_seed != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env_seed, &end, 10);
    if (end == env_seed || *end != '\0') throw Error("SIDN_SEED is not an unsigned integer");
    cfg.seed = v;
  }
  if (overrides.exact) cfg.explain.exact = *overrides.exact;
  if (overrides.n_coalitions) cfg.explain.n_coalitions = *overrides.n_coalitions;
  if (overrides.mode) cfg.explain.mode = *overrides.mode;

  cfg.data.seed = derive_seed(cfg.seed, 1);
  cfg.word2vec.seed = derive_seed(cfg.seed, 2);
  cfg.model.seed = derive_seed(cfg.seed, 3);
  cfg.train.seed = derive_seed(cfg.seed, 4);
  cfg.model.maxlen = cfg.maxlen;
  cfg.model.vocab_size = cfg.vocab_size;
  cfg.model.emb_dim = cfg.word2vec.dim;

  cfg.data.validate();
  cfg.word2vec.validate();
  cfg.model.validate();
  cfg.train.validate();
  if (cfg.vocab_size < 1 || cfg.maxlen < 1) throw Error("text.vocab_size and text.maxlen must be positive");
  if (cfg.explain.mode != "force" && cfg.explain.mode != "summary") {
    throw Error("explain.mode must be force or summary");
  }
  return cfg;
}

Outputs cmd_gen_data(const RunConfig& cfg, const fs::path& dir) {
  ensure_dir(dir);
  const SyntheticCorpus corpus = generate_corpus(cfg.data);
  Outputs out;
  write_output(dir / files::kCorpus, corpus_to_csv(corpus.docs), out);
  std::string lex = "word,kind\n";
  for (const auto& w : corpus.risk_words) lex += csv_line({w, "risk"}) + "\n";
  for (const auto& w : corpus.neutral_words) lex += csv_line({w, "neutral"}) + "\n";
  write_output(dir / files::kLexicon, lex, out);
  write_manifest(cfg, dir, "gen-data", out);
  return out;
}

Outputs cmd_prep(const RunConfig& cfg, const fs::path& dir) {
  const CorpusLoad load = parse_corpus_csv(read_file(dir / files::kCorpus));
  if (!load.errors.empty()) {
    std::string msg = "malformed corpus rows:";
    for (const auto& e : load.errors) msg += "\n  line " + std::to_string(e.line) + ": " + e.message;
    throw Error(msg);
  }
  std::vector<int> labels;
  for (std::size_t i = 0; i < load.docs.size(); ++i) {
    if (!load.docs[i].label) {
      throw Error("line " + std::to_string(load.doc_lines[i]) + ": missing label");
    }
    labels.push_back(*load.docs[i].label);
  }
  const SplitIndices splits = split(load.docs.size(), labels, cfg.train.seed);

  std::vector<TokenList> tokens;
  tokens.reserve(load.docs.size());
  for (const auto& d : load.docs) tokens.push_back(to_tokens(d.text));
  std::vector<TokenList> train_tokens;
  for (std::size_t r : splits.train) train_tokens.push_back(tokens[r]);
  const Vocabulary vocab = build_vocabulary(train_tokens, cfg.vocab_size);

  EncodedDataset ds;
  ds.maxlen = cfg.maxlen;
  ds.labels = labels;
  ds.splits = splits;
  for (std::size_t i = 0; i < load.docs.size(); ++i) {
    if (tokens[i].empty()) {
      std::cerr << "warning: line " << load.doc_lines[i] << ": no tokens, encoded as padding\n";
    }
    ds.sequences.push_back(pad_truncate(encode(tokens[i], vocab), cfg.maxlen));
  }
  Outputs out;
  write_output(dir / files::kVocab, vocab.to_csv(), out);
  write_output(dir / files::kDataset, encode_dataset(ds), out);
  write_manifest(cfg, dir, "prep", out);
  return out;
}

Outputs cmd_embed(const RunConfig& cfg, const fs::path& dir) {
  const Vocabulary vocab = load_vocab(dir);
  const EncodedDataset ds = load_dataset(dir);
  const WordVectors trained = train_cbow(decode_tokens(ds, vocab, ds.splits.train), cfg.word2vec);
  WordVectors ordered(cfg.word2vec.dim);
  const std::vector<double> zeros(cfg.word2vec.dim, 0.0);
  for (std::size_t i = 1; i <= vocab.size(); ++i) {
    const std::string& w = vocab.word_at(static_cast<TokenId>(i));
    const auto v = trained.find(w);
    ordered.add(w, v ? *v : std::span<const double>(zeros));
  }
  Outputs out;
  write_output(dir / files::kVectors, ordered.to_csv(), out);
  write_manifest(cfg, dir, "embed", out);
  return out;
}

Outputs cmd_train(const RunConfig& cfg, const fs::path& dir) {
  const Vocabulary vocab = load_vocab(dir);
  const EncodedDataset ds = load_dataset(dir);
  const WordVectors vectors = WordVectors::from_csv(read_file(dir / files::kVectors));
  if (vectors.dim() != cfg.word2vec.dim) {
    throw Error("vectors have dimension " + std::to_string(vectors.dim()) + ", config expects " +
                std::to_string(cfg.word2vec.dim));
  }
  ModelConfig mc = cfg.model;
  mc.vocab_size = vocab.size();
  mc.maxlen = ds.maxlen;
  const Model model = build_model(mc, build_embedding_matrix(vocab, vectors));
  FitHooks hooks;
  hooks.on_epoch_end = [](const Model&, const EpochRecord& r) {
    std::fprintf(stderr, "epoch %zu  train_loss %.5f  train_acc %.4f  val_loss %.5f  val_acc %.4f\n",
                 r.epoch, r.train_loss, r.train_acc, r.val_loss, r.val_acc);
  };
  FitResult fit_result = fit(model, ds, ds.splits, cfg.train, hooks);
  std::fprintf(stderr, "best epoch %zu, stopped at %zu\n", fit_result.history.best_epoch,
               fit_result.history.stopped_epoch);
  Outputs out;
  write_output(dir / files::kWeights, save_weights(fit_result.model), out);
  write_output(dir / files::kHistory, fit_result.history.to_csv(), out);
  write_manifest(cfg, dir, "train", out);
  return out;
}

Outputs cmd_eval(const RunConfig& cfg, const fs::path& dir) {
  const Vocabulary vocab = load_vocab(dir);
  const EncodedDataset ds = load_dataset(dir);
  const Model model = load_model(dir, ds, vocab);
  if (ds.splits.test.empty()) throw Error("empty test split");
  const auto batch = rows_of(ds, ds.splits.test);
  const std::vector<double> scores = infer(model, batch);
  std::vector<int> labels;
  for (std::size_t r : ds.splits.test) labels.push_back(ds.labels[r]);
  const MetricsReport report = evaluate_scores(scores, labels);

  Outputs out;
  write_output(dir / files::kMetrics, metrics_to_json(report), out);
  write_output(dir / files::kConfusionSvg, confusion_svg(report.confusion), out);
  if (report.has_auc) {
    const RocCurve roc = roc_points(scores, labels);
    write_output(dir / files::kRoc, roc_to_csv(roc), out);
    write_output(dir / files::kRocSvg, roc_svg(roc, report.auc), out);
  } else {
    std::cerr << "warning: test split has a single class; ROC skipped\n";
  }
  write_manifest(cfg, dir, "eval", out);
  return out;
}

Outputs cmd_explain(const RunConfig& cfg, const fs::path& dir) {
  const Vocabulary vocab = load_vocab(dir);
  const EncodedDataset ds = load_dataset(dir);
  const Model model = load_model(dir, ds, vocab);
  const auto& test = ds.splits.test;
  if (test.empty()) throw Error("empty test split");

  const std::size_t n_bg = std::min(cfg.explain.background, ds.splits.train.size());
  const auto background = rows_of(ds, std::span(ds.splits.train).first(n_bg));
  const std::optional<double> bg_value =
      background.empty() ? std::nullopt : std::optional(base_value(model, background));
  const std::uint64_t seed = derive_seed(cfg.seed, 5);

  Outputs out;
  if (cfg.explain.mode == "force") {
    if (cfg.explain.instance >= test.size()) {
      throw Error("explain.instance " + std::to_string(cfg.explain.instance) +
                  " is outside the test split (" + std::to_string(test.size()) + " rows)");
    }
    const EncodedSequence& seq = ds.sequences[test[cfg.explain.instance]];
    if (seq.n_real == 0) throw Error("instance has no tokens to explain");
    ShapExplanation e = explain_one(model, seq, cfg, seed);
    e.background_value = bg_value;
    write_output(dir / files::kExplanation, explanation_to_json(e, vocab), out);
    write_output(dir / files::kForceSvg, force_svg(force_data(e, vocab)), out);
  } else {
    std::vector<ShapExplanation> all;
    for (std::size_t i = 0; i < test.size() && all.size() < cfg.explain.summary_instances; ++i) {
      const EncodedSequence& seq = ds.sequences[test[i]];
      if (seq.n_real == 0) continue;
      if (cfg.explain.exact && seq.n_real > kExactShapleyCap) continue;
      all.push_back(explain_one(model, seq, cfg, derive_seed(seed, i)));
      all.back().background_value = bg_value;
    }
    const GlobalSummary summary = summary_aggregate(all, vocab);
    write_output(dir / files::kSummary, summary_to_csv(summary), out);
    write_output(dir / files::kSummarySvg, summary_svg(summary, cfg.explain.top_k), out);
  }
  write_manifest(cfg, dir, "explain", out);
  return out;
}

}  // namespace sidn::tools
