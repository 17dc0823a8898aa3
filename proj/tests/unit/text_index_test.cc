// Copyright 2026 The convsearch Authors.
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

#include "convsearch/text_index.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "convsearch/error.h"
#include "oracles.h"

namespace convsearch {
namespace {

using Strings = std::vector<std::string>;

std::vector<PassageRecord> Toy() {
  return {{"p1", "apple banana apple", ""}, {"p2", "banana cherry", ""}};
}

TEST(TokenizeTest, LowercasesAndSplitsOnPunctuation) {
  EXPECT_EQ(Tokenize("Hello, World! It's 2012."),
            (Strings{"hello", "world", "it", "s", "2012"}));
  EXPECT_TRUE(Tokenize("  ,;  ").empty());
}

TEST(TokenizeTest, KeepsUtf8BytesInsideTokens) {
  EXPECT_EQ(Tokenize("Café Müller"), (Strings{"café", "müller"}));
}

TEST(TokenizeTest, SpansPointIntoOriginalText) {
  const std::string text = "The  Avengers!";
  const auto spans = TokenizeWithSpans(text);
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(text.substr(spans[1].begin, spans[1].end - spans[1].begin),
            "Avengers");
  EXPECT_EQ(spans[1].text, "avengers");
}

TEST(StemmerTest, GoldenStems) {
  const std::map<std::string, std::string> golden = {
      {"satellites", "satellite"}, {"launched", "launch"},
      {"caresses", "caress"},      {"ponies", "poni"},
      {"cats", "cat"},             {"running", "run"},
      {"hopping", "hop"},          {"agreed", "agree"},
      {"happy", "happi"},          {"sky", "sky"},
      {"filing", "file"},          {"directed", "direct"},
      {"films", "film"},           {"2012", "2012"},
  };
  for (const auto &[word, stem] : golden) {
    EXPECT_EQ(DefaultStemmer().Stem(word), stem) << word;
  }
}

TEST(StemmerTest, Idempotent) {
  for (const char *w : {"satellites", "agreed", "hoppings", "relational",
                        "conditionally", "caresses", "sized", "meetings"}) {
    const std::string once = DefaultStemmer().Stem(w);
    EXPECT_EQ(DefaultStemmer().Stem(once), once) << w;
  }
}

TEST(BuildIndexTest, ToyCorpusCounts) {
  const auto index = BuildIndex(Toy());
  EXPECT_EQ(index.passage_count(), 2u);
  EXPECT_EQ(index.total_tokens(), 5u);
  EXPECT_EQ(index.collection_frequency("banana"), 2u);
  EXPECT_EQ(index.collection_frequency("apple"), 2u);
  EXPECT_EQ(index.collection_frequency("zzz"), 0u);
}

TEST(BuildIndexTest, EmptyCorpus) {
  const auto index = BuildIndex(std::vector<PassageRecord>{});
  EXPECT_EQ(index.passage_count(), 0u);
  EXPECT_EQ(index.total_tokens(), 0u);
}

TEST(BuildIndexTest, SinglePassageRepeatedToken) {
  const auto index = BuildIndex(std::vector<PassageRecord>{{"p", "a a a", ""}});
  ASSERT_EQ(index.postings("a").size(), 1u);
  EXPECT_EQ(index.postings("a")[0].tf, 3u);
  EXPECT_EQ(index.doc_length(0), 3u);
}

TEST(BuildIndexTest, DuplicateIdNamesTheId) {
  std::vector<PassageRecord> corpus = {{"p7", "x", ""}, {"p7", "y", ""}};
  try {
    BuildIndex(corpus);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument &e) {
    EXPECT_NE(std::string(e.what()).find("p7"), std::string::npos);
  }
}

TEST(LmdScoreTest, WorkedToyExample) {
  const auto index = BuildIndex(Toy());
  const Strings q = {"apple"};
  EXPECT_NEAR(LmdScore(q, "p1", index, 1.0), std::log(0.6), 1e-12);
  EXPECT_NEAR(LmdScore(q, "p2", index, 1.0), std::log(0.4 / 3.0), 1e-12);
}

TEST(LmdScoreTest, EmptyQueryIsZero) {
  const auto index = BuildIndex(Toy());
  EXPECT_EQ(LmdScore(Strings{}, "p1", index, 1.0), 0.0);
}

TEST(LmdScoreTest, RepeatedTokenDoubles) {
  const auto index = BuildIndex(Toy());
  const double one = LmdScore(Strings{"cherry"}, "p2", index, 10.0);
  EXPECT_DOUBLE_EQ(LmdScore(Strings{"cherry", "cherry"}, "p2", index, 10.0),
                   2.0 * one);
}

TEST(LmdScoreTest, OovUsesFloor) {
  const auto index = BuildIndex(Toy());
  const double eps = 1.0 / 6.0;
  EXPECT_NEAR(LmdScore(Strings{"zzz"}, "p1", index, 2.0),
              std::log(2.0 * eps / 5.0), 1e-15);
}

TEST(LmdScoreTest, UnknownPassage) {
  const auto index = BuildIndex(Toy());
  EXPECT_THROW(LmdScore(Strings{"apple"}, "p9", index, 1.0), NotFound);
}

TEST(RetrieveTest, ToyRanking) {
  const auto index = BuildIndex(Toy());
  RetrievalParams params;
  params.mu = 1.0;
  const auto ranked = Retrieve("apple", index, params);
  EXPECT_EQ(ranked.ids(), (Strings{"p1", "p2"}));
  EXPECT_NEAR(ranked[0].score, std::log(0.6), 1e-12);
}

TEST(RetrieveTest, OovEverywhereTiesById) {
  std::vector<PassageRecord> corpus = {
      {"b", "x y", ""}, {"a", "u v", ""}, {"c", "s t", ""}};
  const auto index = BuildIndex(corpus);
  const auto ranked = Retrieve("zzz", index, RetrievalParams{});
  EXPECT_EQ(ranked.ids(), (Strings{"a", "b", "c"}));
  EXPECT_EQ(ranked[0].score, ranked[2].score);
}

TEST(RetrieveTest, TopOne) {
  const auto index = BuildIndex(Toy());
  RetrievalParams params;
  params.k = 1;
  params.rerank_depth = 1;
  EXPECT_EQ(Retrieve("cherry", index, params).ids(), (Strings{"p2"}));
}

TEST(RetrieveTest, EmptyQueryGivesEmptyList) {
  const auto index = BuildIndex(Toy());
  EXPECT_TRUE(Retrieve(" ?! ", index, RetrievalParams{}).empty());
}

TEST(RetrievalParamsTest, Validation) {
  RetrievalParams p;
  p.mu = 0.0;
  EXPECT_THROW(p.Validate(), InvalidArgument);
  p = RetrievalParams{};
  p.rerank_depth = p.k + 1;
  EXPECT_THROW(p.Validate(), InvalidArgument);
}

// Random corpora over a small vocabulary of stem-stable words.
struct RandomCorpus {
  std::vector<PassageRecord> records;
  std::vector<oracle::Words> docs;  // in ascending id order
};

RandomCorpus MakeCorpus(std::mt19937_64 &rng, std::size_t n_docs) {
  static const Strings vocab = {"ka", "lo", "mi", "nu", "po",  "qe",
                                "ri", "su", "to", "vu", "wex", "zo"};
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len(0, 30);
  RandomCorpus c;
  for (std::size_t d = 0; d < n_docs; ++d) {
    char id[24];
    std::snprintf(id, sizeof(id), "d%03zu", d);
    oracle::Words words;
    std::string text;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      words.push_back(vocab[word(rng)]);
      text += words.back() + " ";
    }
    c.records.push_back({id, text, ""});
    c.docs.push_back(words);
  }
  return c;
}

TEST(LmdPropertyTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> docs(1, 50);
  std::uniform_int_distribution<int> qlen(1, 20);
  std::uniform_real_distribution<double> mu(0.5, 3000.0);
  const Strings qvocab = {"ka", "lo", "mi", "nu", "po", "qe", "ri",
                          "su", "to", "vu", "wex", "zo", "oov"};
  std::uniform_int_distribution<std::size_t> qword(0, qvocab.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto corpus = MakeCorpus(rng, docs(rng));
    const auto index = BuildIndex(corpus.records);
    Strings query;
    for (int i = qlen(rng); i > 0; --i) query.push_back(qvocab[qword(rng)]);
    const double m = mu(rng);
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
      ASSERT_NEAR(LmdScore(query, corpus.records[d].id, index, m),
                  oracle::Lmd(query, corpus.docs, d, m), 1e-12);
    }
  }
}

TEST(LmdPropertyTest, RetrieveAgreesWithLmdScore) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto corpus = MakeCorpus(rng, 30);
    const auto index = BuildIndex(corpus.records);
    RetrievalParams params;
    params.mu = 50.0;
    const auto ranked = Retrieve("ka lo zo oov", index, params);
    ASSERT_EQ(ranked.size(), corpus.records.size());
    const auto q = AnalyzeText("ka lo zo oov");
    for (const auto &e : ranked) {
      ASSERT_EQ(e.score, LmdScore(q, e.id, index, params.mu));
    }
  }
}

TEST(IndexPropertyTest, PostingSumsEqualCollectionFrequency) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto index = BuildIndex(MakeCorpus(rng, 20).records);
    std::uint64_t total = 0;
    for (const auto &term : index.Terms()) {
      std::uint64_t sum = 0;
      std::uint32_t prev = 0;
      bool first = true;
      for (const auto &p : index.postings(term)) {
        if (!first) {
          ASSERT_LT(prev, p.doc);
        }
        prev = p.doc;
        first = false;
        sum += p.tf;
      }
      ASSERT_EQ(sum, index.collection_frequency(term));
      total += sum;
    }
    ASSERT_EQ(total, index.total_tokens());
  }
}

TEST(IndexPropertyTest, PassageTextRetrievesItselfOnDisjointVocabularies) {
  std::vector<PassageRecord> corpus;
  for (int d = 0; d < 8; ++d) {
    std::string text;
    for (int w = 0; w < 3 + d; ++w) {
      text += "w" + std::to_string(d) + "x" + std::to_string(w) + " ";
    }
    corpus.push_back({"p" + std::to_string(d), text, ""});
  }
  const auto index = BuildIndex(corpus);
  for (const auto &p : corpus) {
    EXPECT_EQ(Retrieve(p.text, index, RetrievalParams{})[0].id, p.id);
  }
}

TEST(IndexPropertyTest, ContentHashIsStable) {
  EXPECT_EQ(BuildIndex(Toy()).ContentHash(), BuildIndex(Toy()).ContentHash());
  auto other = Toy();
  other[1].text = "banana cherries cherry";
  EXPECT_NE(BuildIndex(Toy()).ContentHash(), BuildIndex(other).ContentHash());
}

}  // namespace
}  // namespace convsearch
