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


#include "convsearch/metrics.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "convsearch/error.h"
#include "convsearch/text_index.h"
#include "oracles.h"
#include "test_util.h"

namespace convsearch {
namespace {

using testing::TempDir;
using testing::WriteAll;

std::vector<std::string> W(const std::string &s) { return SplitWords(s); }

TEST(RougeTest, Examples) {
  const auto same = RougeN("a b c", "a b c", 2);
  EXPECT_EQ(same.f1, 1.0);
  const auto disjoint = RougeN("a b", "c d", 1);
  EXPECT_EQ(disjoint.precision, 0.0);
  EXPECT_EQ(disjoint.f1, 0.0);
  EXPECT_NEAR(RougeN("the cat sat", "the cat ate", 1).f1, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(RougeL("the cat sat", "the cat ate").f1, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(RougeL("", "the cat").f1, 0.0);
  EXPECT_EQ(RougeL("x y z", "x y z").recall, 1.0);
  EXPECT_THROW(RougeN("a", "a", 0), InvalidArgument);
}

TEST(RougeTest, ShortSidesHaveNoBigrams) {
  EXPECT_EQ(RougeN("a", "a", 2).f1, 0.0);
}

TEST(BleuTest, Examples) {
  EXPECT_DOUBLE_EQ(Bleu("a b c", "a b c", 1), 1.0);
  EXPECT_NEAR(Bleu("the cat sat", "the cat ate", 1), 2.0 / 3.0, 1e-15);
  const double short_cand = Bleu("a b", "a b c d", 1);
  EXPECT_NEAR(short_cand, std::exp(1.0 - 2.0), 1e-15);
  EXPECT_LT(short_cand, 1.0);
  EXPECT_EQ(Bleu("", "a", 4), 0.0);
  // BLEU-4 of a 3-word candidate: the 4-gram order has no n-grams and is
  // smoothed to 1/(0+1).
  EXPECT_GT(Bleu("a b c", "a b c", 4), 0.0);
}

TEST(BleuTest, MultiReferenceClipsPerReferenceMax) {
  const std::vector<std::vector<std::string>> refs = {W("a a b"), W("a c")};
  const auto cand = W("a a c");
  // Clipped unigrams: a->2 (first ref), c->1 (second ref).
  EXPECT_NEAR(BleuMulti(cand, refs, 1), 1.0, 1e-15);
  const std::vector<std::vector<std::string>> one = {W("a b c")};
  EXPECT_DOUBLE_EQ(BleuMulti(W("a b c"), one, 4), Bleu("a b c", "a b c", 4));
}

TEST(MeteorTest, Examples) {
  const auto a = MeteorAlign(W("a b c"), W("a b c"));
  EXPECT_EQ(a.matches, 3u);
  EXPECT_EQ(a.chunks, 1u);
  EXPECT_NEAR(MeteorLite("a b c", "a b c"), 1.0 - 0.5 / 27.0, 1e-15);
  EXPECT_NEAR(MeteorLite("a b c", "a b c"), 0.9815, 5e-5);
  EXPECT_EQ(MeteorLite("a b", "c d"), 0.0);
  const auto swapped = MeteorAlign(W("b a"), W("a b"));
  EXPECT_EQ(swapped.matches, 2u);
  EXPECT_EQ(swapped.chunks, 2u);
  EXPECT_DOUBLE_EQ(MeteorLite("b a", "a b"), 0.5);
}

TEST(MeteorTest, StemMatchesCount) {
  EXPECT_EQ(MeteorAlign(W("cats ran"), W("cat ran")).matches, 2u);
}

TEST(NdcgTest, HandFixture) {
  const std::vector<std::string> ranked = {"a", "b", "c"};
  const Judgments j = {{"a", 4}, {"b", 0}, {"c", 3}};
  const double want = 18.5 / (15.0 + 7.0 / std::log2(3.0));
  EXPECT_NEAR(NdcgAtK(ranked, j, 3), want, 1e-9);
  EXPECT_NEAR(NdcgAtK(ranked, j, 3), 0.9528, 5e-5);
  const std::vector<std::string> ideal = {"a", "c", "b"};
  EXPECT_DOUBLE_EQ(NdcgAtK(ideal, j, 3), 1.0);
  EXPECT_EQ(NdcgAtK(ranked, {{"a", 0}, {"b", 0}}, 3), 0.0);
}

TEST(RankMetricsTest, ApAndRr) {
  const std::vector<std::string> ranked = {"x", "y", "z"};
  const Judgments j = {{"z", 2}};
  EXPECT_DOUBLE_EQ(AveragePrecision(ranked, j), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(ReciprocalRank(ranked, j), 1.0 / 3.0);
  EXPECT_EQ(ReciprocalRank(ranked, {{"x", 1}}), 1.0);
  EXPECT_EQ(AveragePrecision(ranked, {}), 0.0);
  EXPECT_EQ(ReciprocalRank(ranked, j, 3), 0.0);
}

// ---- Properties against the oracles ----

std::vector<std::string> RandomTokens(std::mt19937_64 &rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> sym(0, 5);
  std::vector<std::string> out(len(rng));
  for (auto &t : out) t = std::string(1, static_cast<char>('a' + sym(rng)));
  return out;
}

TEST(MetricsPropertyTest, MatchBruteForceOracles) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = RandomTokens(rng, 12);
    const auto r = RandomTokens(rng, 12);
    for (int n = 1; n <= 2; ++n) {
      const auto got = RougeN(c, r, n);
      const auto want = oracle::RougeN(c, r, n);
      ASSERT_NEAR(got.precision, want.p, 1e-10);
      ASSERT_NEAR(got.recall, want.r, 1e-10);
      ASSERT_NEAR(got.f1, want.f, 1e-10);
    }
    ASSERT_GE(NgramOverlap(c, r, 1), NgramOverlap(c, r, 2));
    const auto l = RougeL(c, r);
    const auto lw = oracle::RougeL(c, r);
    ASSERT_NEAR(l.f1, lw.f, 1e-10);
    ASSERT_EQ(LcsLength(c, r), oracle::Lcs(c, r));
    ASSERT_NEAR(Bleu(c, r, 1), oracle::Bleu(c, r, 1), 1e-10);
    ASSERT_NEAR(Bleu(c, r, 4), oracle::Bleu(c, r, 4), 1e-10);
    const double m = MeteorLite(c, r);
    ASSERT_GE(m, 0.0);
    ASSERT_LE(m, 1.0);
  }
}

TEST(MetricsPropertyTest, IdentityScores) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    auto x = RandomTokens(rng, 10);
    if (x.size() < 2) continue;
    ASSERT_DOUBLE_EQ(RougeN(x, x, 1).f1, 1.0);
    ASSERT_DOUBLE_EQ(RougeN(x, x, 2).f1, 1.0);
    ASSERT_DOUBLE_EQ(RougeL(x, x).f1, 1.0);
    ASSERT_DOUBLE_EQ(Bleu(x, x, 1), 1.0);
    const double n = static_cast<double>(x.size());
    ASSERT_EQ(MeteorLite(x, x), 1.0 - 0.5 / (n * n * n));
  }
}

TEST(NdcgPropertyTest, IdealOrderIsMaximal) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_int_distribution<int> grade(0, 4);
  std::uniform_int_distribution<int> kk(1, 5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = size(rng);
    const int k = kk(rng);
    Judgments j;
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
      ids.push_back("p" + std::to_string(i));
      j[ids.back()] = grade(rng);
    }
    std::vector<std::string> ideal = ids;
    std::stable_sort(ideal.begin(), ideal.end(),
                     [&](const auto &a, const auto &b) { return j[a] > j[b]; });
    const double best = NdcgAtK(ideal, j, k);
    std::sort(ids.begin(), ids.end());
    double brute = 0.0;
    do {
      const double v = NdcgAtK(ids, j, k);
      ASSERT_LE(v, best + 1e-12);
      ASSERT_GE(v, 0.0);
      brute = std::max(brute, v);
    } while (std::next_permutation(ids.begin(), ids.end()));
    ASSERT_NEAR(brute, best, 1e-12);
    const bool any = std::any_of(j.begin(), j.end(),
                                 [](const auto &e) { return e.second > 0; });
    ASSERT_EQ(best, any ? 1.0 : 0.0);
  }
}

// ---- Run files, qrels and evaluation ----

TEST(QRelsTest, LoadAndReject) {
  TempDir dir;
  WriteAll(dir / "q.txt", "7_1 Q0 p1 3\n7_2 Q0 p2 0\n");
  const auto q = LoadQRels(dir / "q.txt");
  ASSERT_NE(q.Find({"7", 1}), nullptr);
  EXPECT_EQ(q.Find({"7", 1})->at("p1"), 3);
  EXPECT_EQ(q.Find({"7", 3}), nullptr);
  EXPECT_EQ(q.Topics(), std::vector<std::string>{"7"});

  WriteAll(dir / "bad.txt", "7_1 Q0 p1 3\n7_1 p1 3\n");
  try {
    LoadQRels(dir / "bad.txt");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
  QRels dup;
  dup.Add({"1", 1}, "p", 1);
  EXPECT_THROW(dup.Add({"1", 1}, "p", 2), InvalidArgument);
  EXPECT_THROW(dup.Add({"1", 1}, "q", 9), InvalidArgument);
}

RunRecord Record(const std::string &topic, int turn, const std::string &answer,
                 std::vector<std::string> ranked) {
  RunRecord r;
  r.topic = topic;
  r.turn = turn;
  r.raw_query = "q";
  r.prompt = "q";
  r.rewritten_query = "q";
  r.ranked = std::move(ranked);
  r.method = "EG";
  r.selected = {r.ranked.front()};
  r.answer = answer;
  r.answer_words = CountWords(answer);
  return r;
}

TEST(RunRecordTest, JsonRoundTrip) {
  auto r = Record("5", 2, "An \"answer\" here.", {"p2", "p1"});
  const auto line = RunRecordToJson(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(RunRecordFromJson(line), r);
  EXPECT_EQ(RunRecordToJson(RunRecordFromJson(line)), line);
}

TEST(RunRecordTest, ReadRunFileReportsLine) {
  TempDir dir;
  WriteAll(dir / "run.jsonl",
           RunRecordToJson(Record("1", 1, "x", {"p"})) + "\n{oops\n");
  try {
    ReadRunFile(dir / "run.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

double Value(const MetricValues &values, const std::string &name) {
  for (const auto &[k, v] : values) {
    if (k == name) return v;
  }
  ADD_FAILURE() << "no metric " << name;
  return 0.0;
}

struct TwoTopics {
  QRels qrels;
  ReferenceSet refs;
  std::vector<RunRecord> run;
};

TwoTopics MakeTwoTopics() {
  TwoTopics t;
  t.qrels.Add({"A", 1}, "p1", 4);
  t.qrels.Add({"A", 2}, "p2", 3);
  t.qrels.Add({"B", 1}, "p3", 3);
  t.refs[{"A", 1}] = {{"the cat sat"}, "the cat sat"};
  t.refs[{"A", 2}] = {{"dogs bark loudly"}, "dogs bark loudly"};
  t.refs[{"B", 1}] = {{"birds fly south"}, "birds fly south"};
  t.run = {Record("A", 1, "the cat sat", {"p1"}),
           Record("A", 2, "dogs bark", {"x", "p2"}),
           Record("B", 1, "fish swim", {"y", "z", "p3"})};
  return t;
}

TEST(EvaluateRunTest, IdenticalAnswersScoreOne) {
  const auto t = MakeTwoTopics();
  const auto report = EvaluateRun(std::span(t.run).first(1), [] {
    QRels q;
    q.Add({"A", 1}, "p1", 4);
    return q;
  }(), t.refs);
  ASSERT_EQ(report.turns.size(), 1u);
  EXPECT_DOUBLE_EQ(Value(report.turns[0].values, "rouge1_f"), 1.0);
  EXPECT_DOUBLE_EQ(Value(report.turns[0].values, "rougeL_f"), 1.0);
  EXPECT_DOUBLE_EQ(Value(report.turns[0].values, "ndcg_cut"), 1.0);
}

TEST(EvaluateRunTest, GlobalMeanIsMeanOfTopicMeans) {
  const auto t = MakeTwoTopics();
  const auto report = EvaluateRun(t.run, t.qrels, t.refs);
  EXPECT_EQ(report.judged_turns, 3u);
  ASSERT_EQ(report.topic_means.size(), 2u);
  for (const auto &name : MetricNames()) {
    const double a = Value(report.topic_means.at("A"), name);
    const double b = Value(report.topic_means.at("B"), name);
    EXPECT_NEAR(Value(report.topic_mean, name), (a + b) / 2.0, 1e-15) << name;
  }
  EXPECT_DOUBLE_EQ(Value(report.turns[2].values, "mrr"), 1.0 / 3.0);
  EXPECT_NE(ReportJson(report).find("\"judged_turns\": 3"), std::string::npos);
  const auto csv = ReportCsv(report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(EvaluateRunTest, Errors) {
  auto t = MakeTwoTopics();
  EXPECT_THROW(EvaluateRun({}, t.qrels, t.refs), InvalidArgument);
  auto dup = t.run;
  dup.push_back(dup.front());
  EXPECT_THROW(EvaluateRun(dup, t.qrels, t.refs), InvalidArgument);
  auto missing = t.run;
  missing.pop_back();
  try {
    EvaluateRun(missing, t.qrels, t.refs);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument &e) {
    EXPECT_NE(std::string(e.what()).find("B"), std::string::npos);
  }
}

TEST(BuildReferencesTest, GradeThreeAndUp) {
  PassageStore store(
      {{"p1", "First one.", ""}, {"p2", "Second.", ""}, {"p3", "Third.", ""}});
  QRels q;
  q.Add({"T", 1}, "p1", 3);
  q.Add({"T", 1}, "p2", 2);
  q.Add({"T", 1}, "p3", 4);
  q.Add({"T", 1}, "gone", 4);
  std::size_t missing = 0;
  const auto refs = BuildReferences(q, store, 3, &missing);
  EXPECT_EQ(missing, 1u);
  EXPECT_EQ(refs.at({"T", 1}).passages,
            (std::vector<std::string>{"First one.", "Third."}));
  EXPECT_EQ(refs.at({"T", 1}).concatenated, "First one. Third.");
}

}  // namespace
}  // namespace convsearch
