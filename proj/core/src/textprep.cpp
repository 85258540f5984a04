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

#include "sidn/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "sidn/csv.hpp"
#include "sidn/error.hpp"
#include "sidn/io.hpp"

namespace sidn {

extern const char* const kStopwordData;

Vocabulary::Vocabulary(std::vector<Entry> ranked) : entries_(std::move(ranked)) {
  lookup_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto [it, inserted] = lookup_.emplace(entries_[i].word, static_cast<TokenId>(i + 1));
    if (!inserted) throw Error("duplicate vocabulary word '" + entries_[i].word + "'");
  }
}

std::optional<TokenId> Vocabulary::index_of(std::string_view word) const {
  auto it = lookup_.find(std::string(word));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::word_at(TokenId index) const {
  if (index == 0 || index > entries_.size()) {
    throw Error("vocabulary index " + std::to_string(index) + " out of range");
  }
  return entries_[index - 1].word;
}

std::size_t Vocabulary::frequency_at(TokenId index) const {
  word_at(index);
  return entries_[index - 1].frequency;
}

std::string Vocabulary::to_csv() const {
  std::string out = "word,index,frequency\n";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    out += csv_line({entries_[i].word, std::to_string(i + 1),
                     std::to_string(entries_[i].frequency)});
  }
  return out;
}

Vocabulary Vocabulary::from_csv(std::string_view text) {
  CsvTable table = parse_csv(text);
  if (!table.issues.empty()) {
    throw Error("vocabulary csv line " + std::to_string(table.issues[0].line) + ": " +
                table.issues[0].message);
  }
  if (table.records.empty() ||
      table.records[0].fields != std::vector<std::string>{"word", "index", "frequency"}) {
    throw Error("vocabulary csv must start with header word,index,frequency");
  }
  std::vector<Entry> entries;
  for (std::size_t r = 1; r < table.records.size(); ++r) {
    const auto& rec = table.records[r];
    if (rec.fields.size() != 3) {
      throw Error("vocabulary csv line " + std::to_string(rec.line) + ": expected 3 fields");
    }
    if (std::stoul(rec.fields[1]) != r) {
      throw Error("vocabulary csv line " + std::to_string(rec.line) +
                  ": indices must be contiguous from 1");
    }
    entries.push_back({rec.fields[0], static_cast<std::size_t>(std::stoull(rec.fields[2]))});
  }
  return Vocabulary(std::move(entries));
}

bool Vocabulary::operator==(const Vocabulary& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].word != other.entries_[i].word ||
        entries_[i].frequency != other.entries_[i].frequency) {
      return false;
    }
  }
  return true;
}

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    char keep = 0;
    if (c < 0x80 && std::isalpha(c)) {
      keep = static_cast<char>(std::tolower(c));
    } else if (c < 0x80 && std::isdigit(c)) {
      keep = static_cast<char>(c);
    }
    if (keep == 0) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += keep;
  }
  return out;
}

TokenList tokenize(std::string_view normalized) {
  TokenList tokens;
  std::size_t i = 0;
  while (i < normalized.size()) {
    while (i < normalized.size() && normalized[i] == ' ') ++i;
    std::size_t j = i;
    while (j < normalized.size() && normalized[j] != ' ') ++j;
    if (j > i) {
      std::string_view tok = normalized.substr(i, j - i);
      const bool numeric = std::all_of(tok.begin(), tok.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      });
      if (!numeric) tokens.emplace_back(tok);
    }
    i = j;
  }
  return tokens;
}

TokenList remove_stopwords(const TokenList& tokens, const StopwordSet& stoplist) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stoplist.contains(t)) out.push_back(t);
  }
  return out;
}

TokenList stem_all(const TokenList& tokens) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(stem(t));
  return out;
}

TokenList to_tokens(std::string_view text, const StopwordSet& stoplist) {
  return stem_all(remove_stopwords(tokenize(normalize(text)), stoplist));
}

TokenList to_tokens(std::string_view text) { return to_tokens(text, default_stopwords()); }

Vocabulary build_vocabulary(const std::vector<TokenList>& corpus, std::size_t max_size) {
  if (max_size == 0) throw Error("max_size must be at least 1");
  struct Count {
    std::size_t count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string, Count> counts;
  std::vector<std::string> order;
  for (const auto& doc : corpus) {
    for (const auto& tok : doc) {
      auto [it, inserted] = counts.try_emplace(tok);
      if (inserted) {
        it->second.first_seen = order.size();
        order.push_back(tok);
      }
      ++it->second.count;
    }
  }
  std::vector<std::size_t> ranked(order.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i] = i;
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    return counts[order[a]].count > counts[order[b]].count;
  });
  if (ranked.size() > max_size) ranked.resize(max_size);

  std::vector<Vocabulary::Entry> entries;
  entries.reserve(ranked.size());
  for (std::size_t id : ranked) entries.push_back({order[id], counts[order[id]].count});
  return Vocabulary(std::move(entries));
}

std::vector<TokenId> encode(const TokenList& tokens, const Vocabulary& vocab) {
  std::vector<TokenId> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (auto idx = vocab.index_of(t)) out.push_back(*idx);
  }
  return out;
}

EncodedSequence pad_truncate(const std::vector<TokenId>& indices, std::size_t maxlen) {
  if (maxlen == 0) throw Error("maxlen must be at least 1");
  EncodedSequence seq;
  seq.indices.assign(maxlen, 0);
  const std::size_t keep = std::min(indices.size(), maxlen);
  std::copy(indices.end() - static_cast<std::ptrdiff_t>(keep), indices.end(),
            seq.indices.end() - static_cast<std::ptrdiff_t>(keep));
  seq.n_real = keep;
  return seq;
}

EncodedSequence preprocess_document(const RawDocument& doc, const Vocabulary& vocab,
                                    std::size_t maxlen, const StopwordSet& stoplist) {
  return pad_truncate(encode(to_tokens(doc.text, stoplist), vocab), maxlen);
}

EncodedSequence preprocess_document(const RawDocument& doc, const Vocabulary& vocab,
                                    std::size_t maxlen) {
  return preprocess_document(doc, vocab, maxlen, default_stopwords());
}

StopwordSet parse_stopwords(std::string_view text) {
  StopwordSet out;
  for (const auto& w : tokenize(normalize(text))) out.insert(w);
  return out;
}

const std::vector<std::string>& default_stopword_list() {
  static const std::vector<std::string> list = tokenize(normalize(kStopwordData));
  return list;
}

const StopwordSet& default_stopwords() {
  static const StopwordSet set(default_stopword_list().begin(), default_stopword_list().end());
  return set;
}

}  // namespace sidn
