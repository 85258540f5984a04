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

#include "sidn/csv.hpp"
#include "sidn/dataset.hpp"
#include "sidn/error.hpp"

namespace sidn {
namespace {

TEST(Csv, QuotedFieldsSpanLines) {
  const CsvTable t = parse_csv("a,b\n\"x, \"\"y\"\"\nz\",1\nplain,2\n");
  ASSERT_EQ(t.records.size(), 3U);
  EXPECT_TRUE(t.issues.empty());
  EXPECT_EQ(t.records[1].fields[0], "x, \"y\"\nz");
  EXPECT_EQ(t.records[1].line, 2U);
  EXPECT_EQ(t.records[2].line, 4U);
}

TEST(Csv, FieldQuotingRoundTrips) {
  for (std::string s : {"plain", "a,b", "say \"hi\"", "two\nlines", ""}) {
    const CsvTable t = parse_csv(csv_line({s, "x"}) + "\n");
    ASSERT_EQ(t.records.size(), 1U) << s;
    EXPECT_EQ(t.records[0].fields[0], s);
  }
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
}

TEST(Csv, UnterminatedQuoteIsReported) {
  const CsvTable t = parse_csv("a,b\n\"open,1\n");
  EXPECT_FALSE(t.issues.empty());
}

TEST(Corpus, ParsesLabelsAndListsBadRows) {
  const CorpusLoad c =
      parse_corpus_csv("text,label\nI feel fine,non-suicide\n\"no, hope\",suicide\nbad row\nx,maybe\n");
  ASSERT_EQ(c.docs.size(), 2U);
  EXPECT_EQ(c.docs[0].label, 0);
  EXPECT_EQ(c.docs[1].label, 1);
  EXPECT_EQ(c.docs[1].text, "no, hope");
  ASSERT_EQ(c.errors.size(), 2U);
  EXPECT_EQ(c.errors[0].line, 4U);
  EXPECT_EQ(c.errors[1].line, 5U);
}

TEST(Corpus, HeaderIsRequired) {
  EXPECT_FALSE(parse_corpus_csv("body,label\nx,suicide\n").errors.empty());
  EXPECT_FALSE(parse_corpus_csv("").errors.empty());
}

TEST(Corpus, CsvRoundTrip) {
  const std::vector<RawDocument> docs{{"line one", 1}, {"has, comma", 0}, {"multi\nline \"q\"", 1}};
  const CorpusLoad back = parse_corpus_csv(corpus_to_csv(docs));
  ASSERT_TRUE(back.errors.empty());
  ASSERT_EQ(back.docs.size(), docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    EXPECT_EQ(back.docs[i].text, docs[i].text);
    EXPECT_EQ(back.docs[i].label, docs[i].label);
  }
  EXPECT_EQ(label_name(1), "suicide");
  EXPECT_EQ(label_name(0), "non-suicide");
}

EncodedDataset small_dataset() {
  EncodedDataset ds;
  ds.maxlen = 4;
  ds.sequences = {pad_truncate({1, 2}, 4), pad_truncate({3}, 4), pad_truncate({}, 4),
                  pad_truncate({1, 2, 3, 1, 2}, 4)};
  ds.labels = {1, 0, 0, 1};
  ds.splits = {{0, 3}, {1}, {2}};
  return ds;
}

TEST(Dataset, BinaryRoundTrip) {
  const EncodedDataset ds = small_dataset();
  const std::string bytes = encode_dataset(ds);
  EXPECT_EQ(bytes.substr(0, 4), "SIDE");
  EXPECT_EQ(decode_dataset(bytes), ds);
  EXPECT_EQ(encode_dataset(decode_dataset(bytes)), bytes);
}

TEST(Dataset, CorruptInputIsRejected) {
  const std::string bytes = encode_dataset(small_dataset());
  EXPECT_THROW(decode_dataset(bytes.substr(0, bytes.size() - 3)), Error);
  EXPECT_THROW(decode_dataset(bytes + "x"), Error);
  EXPECT_THROW(decode_dataset("XXXX" + bytes.substr(4)), Error);
  EncodedDataset bad = small_dataset();
  bad.splits.test = {99};
  EXPECT_THROW(decode_dataset(encode_dataset(bad)), Error);
}

TEST(Dataset, DecodeTokensDropsPadding) {
  const Vocabulary v({{"a", 3}, {"b", 2}, {"c", 1}});
  const auto t = decode_tokens(small_dataset(), v, {0, 2, 3});
  ASSERT_EQ(t.size(), 3U);
  EXPECT_EQ(t[0], (TokenList{"a", "b"}));
  EXPECT_TRUE(t[1].empty());
  EXPECT_EQ(t[2], (TokenList{"b", "c", "a", "b"}));
}

}  // namespace
}  // namespace sidn
