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

#include "sidn/dataset.hpp"

#include <algorithm>

#include "sidn/error.hpp"
#include "sidn/io.hpp"

namespace sidn {

namespace {

constexpr char kDatasetMagic[4] = {'S', 'I', 'D', 'E'};
constexpr std::uint32_t kDatasetVersion = 1;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

void put_indices(ByteWriter& w, const std::vector<std::size_t>& v) {
  w.put<std::uint64_t>(v.size());
  for (std::size_t i : v) w.put<std::uint64_t>(i);
}

std::vector<std::size_t> get_indices(ByteReader& r, std::size_t n_rows) {
  const auto n = r.get<std::uint64_t>();
  if (n > n_rows) throw Error("split list longer than dataset");
  std::vector<std::size_t> v(n);
  for (auto& i : v) {
    i = r.get<std::uint64_t>();
    if (i >= n_rows) throw Error("split index out of range");
  }
  return v;
}

}  // namespace

std::string label_name(int label) { return label == 1 ? "suicide" : "non-suicide"; }

CorpusLoad parse_corpus_csv(std::string_view text) {
  // Tolerate a UTF-8 byte-order mark.
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  CsvTable table = parse_csv(text);
  CorpusLoad out;
  out.errors = table.issues;
  if (table.records.empty()) {
    out.errors.push_back({1, "missing header text,label"});
    return out;
  }
  const auto& header = table.records[0].fields;
  std::size_t text_col = header.size();
  std::size_t label_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string h = trim(header[i]);
    if (h == "text") text_col = i;
    if (h == "label") label_col = i;
  }
  if (text_col == header.size() || label_col == header.size()) {
    out.errors.push_back({table.records[0].line, "header must name columns text and label"});
    return out;
  }
  for (std::size_t r = 1; r < table.records.size(); ++r) {
    const auto& rec = table.records[r];
    if (rec.fields.size() != header.size()) {
      out.errors.push_back({rec.line, "expected " + std::to_string(header.size()) +
                                          " fields, found " + std::to_string(rec.fields.size())});
      continue;
    }
    const std::string label = trim(rec.fields[label_col]);
    RawDocument doc;
    doc.text = rec.fields[text_col];
    if (label == "suicide") {
      doc.label = 1;
    } else if (label == "non-suicide") {
      doc.label = 0;
    } else {
      out.errors.push_back({rec.line, "unknown label '" + label + "'"});
      continue;
    }
    out.docs.push_back(std::move(doc));
    out.doc_lines.push_back(rec.line);
  }
  std::sort(out.errors.begin(), out.errors.end(),
            [](const CsvIssue& a, const CsvIssue& b) { return a.line < b.line; });
  return out;
}

std::string corpus_to_csv(const std::vector<RawDocument>& docs) {
  std::string out = "text,label\n";
  for (const auto& d : docs) {
    if (!d.label) throw Error("corpus export requires labelled documents");
    out += csv_line({d.text, label_name(*d.label)});
  }
  return out;
}

std::string encode_dataset(const EncodedDataset& ds) {
  if (ds.labels.size() != ds.sequences.size()) throw Error("labels and sequences differ in length");
  ByteWriter w;
  w.put_bytes(std::string_view(kDatasetMagic, 4));
  w.put<std::uint32_t>(kDatasetVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(ds.maxlen));
  w.put<std::uint64_t>(ds.sequences.size());
  for (std::size_t i = 0; i < ds.sequences.size(); ++i) {
    const auto& s = ds.sequences[i];
    if (s.indices.size() != ds.maxlen) throw Error("sequence length differs from maxlen");
    w.put<std::uint8_t>(static_cast<std::uint8_t>(ds.labels[i]));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(s.n_real));
    for (TokenId t : s.indices) w.put<std::uint32_t>(t);
  }
  put_indices(w, ds.splits.train);
  put_indices(w, ds.splits.val);
  put_indices(w, ds.splits.test);
  return w.take();
}

EncodedDataset decode_dataset(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.get_bytes(4) != std::string_view(kDatasetMagic, 4)) throw Error("not an encoded dataset");
  if (r.get<std::uint32_t>() != kDatasetVersion) throw Error("unsupported dataset version");
  EncodedDataset ds;
  ds.maxlen = r.get<std::uint32_t>();
  const auto n = r.get<std::uint64_t>();
  ds.sequences.resize(n);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels[i] = r.get<std::uint8_t>();
    auto& s = ds.sequences[i];
    s.n_real = r.get<std::uint32_t>();
    s.indices.resize(ds.maxlen);
    for (auto& t : s.indices) t = r.get<std::uint32_t>();
    if (s.n_real > ds.maxlen) throw Error("corrupt dataset row");
  }
  ds.splits.train = get_indices(r, n);
  ds.splits.val = get_indices(r, n);
  ds.splits.test = get_indices(r, n);
  if (r.remaining() != 0) throw Error("trailing bytes after dataset");
  return ds;
}

std::vector<TokenList> decode_tokens(const EncodedDataset& ds, const Vocabulary& vocab,
                                     const std::vector<std::size_t>& rows) {
  std::vector<TokenList> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) {
    const auto& s = ds.sequences.at(r);
    TokenList toks;
    for (std::size_t t = s.first_real(); t < s.indices.size(); ++t) {
      toks.push_back(vocab.word_at(s.indices[t]));
    }
    out.push_back(std::move(toks));
  }
  return out;
}

}  // namespace sidn
