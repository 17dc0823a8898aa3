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

#include "convsearch/index_store.h"

#include <gtest/gtest.h>

#include "convsearch/error.h"
#include "test_util.h"

namespace convsearch {
namespace {

using testing::Fixture;
using testing::ReadAll;
using testing::TempDir;
using testing::WriteAll;

TEST(ReadCorpusTest, ReadsFixture) {
  const auto corpus = ReadCorpus(Fixture("e2e/corpus.jsonl"));
  ASSERT_EQ(corpus.size(), 12u);
  EXPECT_EQ(corpus[0].id, "p01");
}

TEST(ReadCorpusTest, MissingFile) {
  EXPECT_THROW(ReadCorpus(Fixture("does_not_exist.jsonl")), NotFound);
}

TEST(ReadCorpusTest, MalformedLineCarriesLineNumber) {
  TempDir dir;
  WriteAll(dir / "c.jsonl",
           "{\"id\":\"a\",\"text\":\"x\"}\n\n{\"id\":\"b\"}\n");
  try {
    ReadCorpus(dir / "c.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.path(), (dir / "c.jsonl").string());
  }
}

TEST(PassageStoreTest, LookupAndUnknownId) {
  PassageStore store({{"a", "alpha", ""}, {"b", "beta", ""}});
  EXPECT_EQ(store.Text("b"), "beta");
  EXPECT_EQ(store.Find("z"), nullptr);
  EXPECT_THROW(store.Text("z"), NotFound);
}

TEST(IndexStoreTest, TwoPassageManifest) {
  TempDir dir;
  std::vector<PassageRecord> corpus = {{"p1", "apple banana apple", ""},
                                       {"p2", "banana cherry", ""}};
  const auto m = IndexStore::Write(dir / "idx", corpus, BuildIndex(corpus));
  EXPECT_EQ(m.passage_count, 2u);
  EXPECT_EQ(m.total_tokens, 5u);
  EXPECT_EQ(m.format_version, kIndexFormatVersion);
  EXPECT_EQ(m.stemmer, DefaultStemmer().Version());
  EXPECT_EQ(IndexStore::ReadManifest(dir / "idx"), m);
}

TEST(IndexStoreTest, RoundTripPreservesScores) {
  TempDir dir;
  const auto corpus = ReadCorpus(Fixture("e2e/corpus.jsonl"));
  const auto built = BuildIndex(corpus);
  IndexStore::Write(dir / "idx", corpus, built);
  PassageStore passages;
  const auto loaded = IndexStore::Load(dir / "idx", &passages);
  EXPECT_EQ(loaded.ContentHash(), built.ContentHash());
  EXPECT_EQ(passages.size(), corpus.size());
  const RetrievalParams params;
  EXPECT_EQ(Retrieve("Loki Tesseract", loaded, params),
            Retrieve("Loki Tesseract", built, params));
}

TEST(IndexStoreTest, RebuildIsIdempotent) {
  TempDir dir;
  const auto corpus = ReadCorpus(Fixture("e2e/corpus.jsonl"));
  const auto first = IndexStore::Write(dir / "idx", corpus, BuildIndex(corpus));
  const std::string postings = ReadAll(dir / "idx" / "postings.tsv");
  const auto second = IndexStore::Write(dir / "idx", corpus, BuildIndex(corpus));
  EXPECT_EQ(first, second);
  EXPECT_EQ(ReadAll(dir / "idx" / "postings.tsv"), postings);
}

TEST(IndexStoreTest, TamperedPostingsAreDetected) {
  TempDir dir;
  std::vector<PassageRecord> corpus = {{"p1", "apple banana apple", ""},
                                       {"p2", "banana cherry", ""}};
  IndexStore::Write(dir / "idx", corpus, BuildIndex(corpus));
  std::string postings = ReadAll(dir / "idx" / "postings.tsv");
  const auto pos = postings.find("0:2");
  ASSERT_NE(pos, std::string::npos);
  postings.replace(pos, 3, "0:3");
  WriteAll(dir / "idx" / "postings.tsv", postings);
  EXPECT_THROW(IndexStore::Load(dir / "idx", nullptr), Error);
}

TEST(IndexStoreTest, StemmerVersionMismatchIsRejected) {
  TempDir dir;
  std::vector<PassageRecord> corpus = {{"p1", "apple", ""}};
  IndexStore::Write(dir / "idx", corpus, BuildIndex(corpus));
  std::string manifest = ReadAll(dir / "idx" / "manifest.json");
  const std::string version = DefaultStemmer().Version();
  manifest.replace(manifest.find(version), version.size(), "other/9");
  WriteAll(dir / "idx" / "manifest.json", manifest);
  EXPECT_THROW(IndexStore::Load(dir / "idx", nullptr), Error);
}

}  // namespace
}  // namespace convsearch
