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

#include <set>

#include "golden.hpp"
#include "sidn/textprep.hpp"

namespace sidn {
namespace {

TEST(Preprocessing, GoldenSuite) {
  for (const auto& f : testing::preprocessing_golden_failures(SIDN_TEST_DATA_DIR)) ADD_FAILURE() << f;
  EXPECT_GT(testing::porter_golden_size(SIDN_TEST_DATA_DIR), 5000U);
}

TEST(Normalize, IsIdempotentAndClean) {
  for (const char* s : {"  A\tb\r\nC  ", "\xC3\xA9t\xC3\xA9 caf\xC3\xA9!", "x--y__z", "12 ab 3c", ""}) {
    const std::string once = normalize(s);
    EXPECT_EQ(normalize(once), once);
    for (char c : once) EXPECT_TRUE((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == ' ');
    EXPECT_EQ(once.find("  "), std::string::npos);
    if (!once.empty()) {
      EXPECT_NE(once.front(), ' ');
      EXPECT_NE(once.back(), ' ');
    }
  }
}

TEST(Tokenize, KeepsMixedAlphanumerics) {
  EXPECT_EQ(tokenize("3c 7 b2"), (TokenList{"3c", "b2"}));
}

TEST(Stopwords, ShippedListIsLowercaseAndUnique) {
  const auto& list = default_stopword_list();
  EXPECT_EQ(list.size(), 127U);
  EXPECT_EQ(std::set<std::string>(list.begin(), list.end()).size(), list.size());
  for (const auto& w : list) EXPECT_EQ(normalize(w), w);
  EXPECT_TRUE(default_stopwords().contains("and"));
  EXPECT_TRUE(default_stopwords().contains("is"));
}

TEST(Stem, ClassicPorterCases) {
  const std::pair<const char*, const char*> cases[] = {
      {"caresses", "caress"}, {"ponies", "poni"},     {"ties", "ti"},
      {"cats", "cat"},        {"feed", "feed"},       {"agreed", "agre"},
      {"plastered", "plaster"}, {"motoring", "motor"}, {"hopping", "hop"},
      {"relational", "relat"}, {"generalization", "gener"}, {"adjustment", "adjust"},
  };
  for (const auto& [w, s] : cases) EXPECT_EQ(stem(w), s) << w;
}

TEST(Vocabulary, DeterministicAndBounded) {
  std::vector<TokenList> corpus;
  for (int d = 0; d < 50; ++d) {
    TokenList t;
    for (int i = 0; i < 40; ++i) t.push_back("w" + std::to_string((d * 7 + i * i) % 2500));
    corpus.push_back(t);
  }
  const Vocabulary a = build_vocabulary(corpus, 2000);
  const Vocabulary b = build_vocabulary(corpus, 2000);
  EXPECT_EQ(a, b);
  EXPECT_LE(a.size(), 2000U);
  for (std::size_t i = 1; i < a.size(); ++i) {
    EXPECT_GE(a.entries()[i - 1].frequency, a.entries()[i].frequency);
  }
  for (const auto& t : corpus) {
    for (TokenId id : encode(t, a)) {
      EXPECT_GE(id, 1U);
      EXPECT_LE(id, a.size());
    }
  }
}

TEST(Vocabulary, CsvRoundTrip) {
  const Vocabulary v = build_vocabulary({{"b", "a", "a", "c,d", "\"q\""}}, 10);
  EXPECT_EQ(Vocabulary::from_csv(v.to_csv()), v);
  EXPECT_THROW(v.word_at(0), std::exception);
  EXPECT_THROW(v.word_at(static_cast<TokenId>(v.size() + 1)), std::exception);
}

}  // namespace
}  // namespace sidn
