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

#include "convsearch/knowledge_graph.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.h"

namespace convsearch {
namespace {

std::string Name(int i) {
  std::string s = std::to_string(i);
  return "e" + std::string(s.size() < 2 ? 2 - s.size() : 0, '0') + s;
}

// |D|=8, E1 = {a,b,c,d}, E2 = {a,b}.
KnowledgeBaseStore SmallKb() {
  return KnowledgeBaseStore(
      {{"e1", {"a", "b", "c", "d"}}, {"e2", {"a", "b"}}, {"e3", {"x"}}}, 8);
}

TEST(RelatednessTest, HandExample) {
  const auto kb = SmallKb();
  EXPECT_NEAR(LinkDistance("e1", "e2", kb), 0.5, 1e-15);
  EXPECT_NEAR(EntityRelatedness("e1", "e2", kb), 0.5, 1e-15);
}

TEST(RelatednessTest, IdenticalInlinkSets) {
  KnowledgeBaseStore kb({{"p", {"a", "b"}}, {"q", {"a", "b"}}}, 10);
  EXPECT_EQ(EntityRelatedness("p", "q", kb), 1.0);
}

TEST(RelatednessTest, DisjointAndUnknown) {
  const auto kb = SmallKb();
  EXPECT_EQ(EntityRelatedness("e1", "e3", kb), 0.0);
  EXPECT_EQ(EntityRelatedness("e1", "nope", kb), 0.0);
  EXPECT_EQ(EntityRelatedness("nope", "nope", kb), 1.0);
}

TEST(RelatednessTest, RawPolarityIsDistance) {
  const auto kb = SmallKb();
  EXPECT_EQ(EntityRelatedness("e1", "e3", kb, RelatednessPolarity::kRaw), 1.0);
}

TEST(PassageScoreErTest, AverageOverPairs) {
  // sr(q,a) = 0.5 and sr(q,b) = 1.
  KnowledgeBaseStore kb({{"q", {"a", "b", "c", "d"}},
                         {"pa", {"a", "b"}},
                         {"pb", {"a", "b", "c", "d"}}},
                        8);
  EXPECT_NEAR(*PassageScoreEr({"pa", "pb"}, {"q"}, kb), 0.75, 1e-15);
  EXPECT_FALSE(PassageScoreEr({}, {"q"}, kb).has_value());
  EXPECT_FALSE(PassageScoreEr({"pa"}, {}, kb).has_value());
  EXPECT_EQ(*PassageScoreEr({"q"}, {"q"}, kb), 1.0);
}

TEST(EntityMapTest, HandExample) {
  const std::vector<EntitySet> passages = {{"e1", "e2"}, {"e2"}};
  const auto map = BuildEntityMap({"e1"}, passages, 0.5);
  ASSERT_EQ(map.entities(), (std::vector<std::string>{"e1", "e2"}));
  EXPECT_EQ(map.at(0, 0), 0.5);
  EXPECT_EQ(map.at(0, 1), 0.5);
  EXPECT_EQ(map.at(0, 2), 0.0);
  EXPECT_EQ(map.at(1, 0), 0.0);
  EXPECT_EQ(map.at(1, 1), 0.5);
  EXPECT_EQ(map.at(1, 2), 0.5);

  const auto g = BuildEntityGraph(map, 0.0);
  EXPECT_EQ(g.at(0, 0), 0.5);
  EXPECT_EQ(g.at(0, 1), 0.25);
  EXPECT_EQ(g.at(1, 0), 0.25);
  EXPECT_EQ(g.at(1, 1), 0.5);

  const auto sparse = BuildEntityGraph(map, 0.3);
  EXPECT_EQ(sparse.at(0, 1), 0.0);
  EXPECT_EQ(sparse.at(0, 0), 0.5);
}

TEST(EntityMapTest, GammaExtremes) {
  const std::vector<EntitySet> passages = {{"e1", "e2"}, {"e3"}};
  const auto one = BuildEntityMap({"e1"}, passages, 1.0);
  const auto zero = BuildEntityMap({"e1"}, passages, 0.0);
  for (std::size_t r = 0; r < one.rows(); ++r) {
    for (std::size_t c = 1; c < one.cols(); ++c) EXPECT_EQ(one.at(r, c), 0.0);
    EXPECT_EQ(zero.at(r, 0), 0.0);
  }
  EXPECT_THROW(BuildEntityMap({}, passages, 1.5), InvalidArgument);
}

TEST(EntityMapTest, SingleEntity) {
  const std::vector<EntitySet> passages = {{"e"}};
  EXPECT_EQ(BuildEntityGraph(BuildEntityMap({}, passages, 0.25), 0.0).size(),
            1u);
}

EntityGraph Path() {
  return EntityGraph::FromWeights({"a", "b", "c"},
                                  {0, 1, 0, 1, 0, 1, 0, 1, 0});
}

TEST(EntityRankTest, TwoNodes) {
  const auto g = EntityGraph::FromWeights({"a", "b"}, {0, 2, 2, 0});
  const auto r = EntityRank(g, GraphParams{});
  EXPECT_NEAR(r.RankOf("a"), 0.5, 1e-12);
  EXPECT_NEAR(r.RankOf("b"), 0.5, 1e-12);
}

TEST(EntityRankTest, SingleNode) {
  const auto g = EntityGraph::FromWeights({"a"}, {0.7});
  EXPECT_NEAR(EntityRank(g, GraphParams{}).RankOf("a"), 1.0, 1e-12);
}

TEST(EntityRankTest, PathGraph) {
  const auto r = EntityRank(Path(), GraphParams{});
  EXPECT_EQ(r.RankOf("a"), r.RankOf("c"));
  EXPECT_GT(r.RankOf("b"), r.RankOf("a"));
  Eigen::MatrixXd w(3, 3);
  w << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  const auto want = oracle::PageRank(w, 0.99);
  EXPECT_NEAR(r.RankOf("b"), want(1), 1e-9);
}

TEST(EntityRankTest, NonConvergenceCarriesResidual) {
  GraphParams p;
  p.pagerank_max_iter = 2;
  p.pagerank_tol = 1e-15;
  try {
    EntityRank(Path(), p);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError &e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(PassageScoreEgTest, MeanSalience) {
  EntityRankVector r;
  r.rank = {{"e1", 0.6}, {"e2", 0.4}};
  EXPECT_DOUBLE_EQ(PassageScoreEg({"e1", "e2"}, r), 0.5);
  EXPECT_EQ(PassageScoreEg({}, r), 0.0);
  EXPECT_DOUBLE_EQ(PassageScoreEg({"e1"}, r), 0.6);
  EXPECT_DOUBLE_EQ(PassageScoreEg({"e1", "zz"}, r), 0.6);
}

TEST(PassageScoreEgTest, DegreeNormalization) {
  const auto g = Path();
  const auto r = EntityRank(g, GraphParams{});
  EXPECT_DOUBLE_EQ(
      PassageScoreEg({"a", "b"}, r, SalienceNormalization::kDegree, &g),
      r.RankOf("a") + r.RankOf("b") / 2.0);
  EXPECT_THROW(PassageScoreEg({"a"}, r, SalienceNormalization::kDegree),
               InvalidArgument);
}

TEST(ExportGraphTest, Tiers) {
  const auto two = EntityGraph::FromWeights({"a", "b"}, {0, 1, 1, 0});
  EntityRankVector r2;
  r2.rank = {{"a", 0.4}, {"b", 0.6}};
  const auto doc = ExportGraph(two, r2, 0.5);
  ASSERT_EQ(doc.nodes.size(), 2u);
  EXPECT_EQ(doc.nodes[0].id, "b");
  EXPECT_EQ(doc.nodes[0].tier, "top");
  EXPECT_EQ(doc.nodes[1].tier, "bottom");
  ASSERT_EQ(doc.edges.size(), 1u);
  EXPECT_EQ(doc.edges[0], (GraphEdge{"a", "b", 1.0}));

  const auto one = EntityGraph::FromWeights({"a"}, {0});
  EntityRankVector r1;
  r1.rank = {{"a", 1.0}};
  EXPECT_EQ(ExportGraph(one, r1, 0.5).nodes[0].tier, "top");

  const auto path = ExportGraph(Path(), EntityRank(Path(), GraphParams{}), 0.34);
  EXPECT_EQ(path.nodes[0].id, "b");
  EXPECT_EQ(path.nodes[0].tier, "top");
}

TEST(GraphParamsTest, Validation) {
  GraphParams p;
  p.gamma = -0.1;
  EXPECT_THROW(p.Validate(), InvalidArgument);
  p = GraphParams{};
  p.alpha = 1.0;
  EXPECT_THROW(p.Validate(), InvalidArgument);
}

// ---- Randomized properties ----

struct RandomKb {
  std::map<std::string, std::set<std::string>> inlinks;
  std::vector<std::set<int>> sets;
  std::int64_t total = 0;
};

RandomKb MakeKb(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> size(2, 64);
  const int n = size(rng);
  std::uniform_int_distribution<int> member(0, n - 1);
  std::uniform_int_distribution<int> count(0, n);
  RandomKb kb;
  std::size_t largest = 0;
  for (int e = 0; e < n; ++e) {
    std::set<int> s;
    for (int k = count(rng) / 2; k > 0; --k) s.insert(member(rng));
    if (e % 7 == 3) s = kb.sets.empty() ? s : kb.sets.back();
    largest = std::max(largest, s.size());
    std::set<std::string> names;
    for (int i : s) names.insert(Name(i));
    kb.inlinks[Name(e)] = names;
    kb.sets.push_back(s);
  }
  std::uniform_int_distribution<std::int64_t> total(
      static_cast<std::int64_t>(largest), n);
  kb.total = total(rng);
  return kb;
}

TEST(RelatednessPropertyTest, MatchesSetOracleAndIsSymmetric) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rk = MakeKb(rng);
    const KnowledgeBaseStore kb(rk.inlinks, rk.total);
    const int n = static_cast<int>(rk.sets.size());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double got = EntityRelatedness(Name(i), Name(j), kb);
        ASSERT_NEAR(got,
                    oracle::Relatedness(i == j, rk.sets[i], rk.sets[j],
                                        static_cast<double>(rk.total)),
                    1e-12);
        ASSERT_EQ(got, EntityRelatedness(Name(j), Name(i), kb));
        ASSERT_GE(got, 0.0);
        ASSERT_LE(got, 1.0);
      }
    }
  }
}

struct RandomMap {
  EntitySet query;
  std::vector<EntitySet> passages;
};

RandomMap MakeMap(std::mt19937_64 &rng, int max_entities) {
  std::uniform_int_distribution<int> ents(1, max_entities);
  std::uniform_int_distribution<int> cols(1, 10);
  std::bernoulli_distribution coin(0.3);
  const int n = ents(rng);
  RandomMap m;
  m.passages.resize(cols(rng));
  for (int e = 0; e < n; ++e) {
    if (coin(rng)) m.query.insert(Name(e));
    for (auto &p : m.passages) {
      if (coin(rng)) p.insert(Name(e));
    }
  }
  if (m.query.empty() && m.passages[0].empty()) m.passages[0].insert(Name(0));
  return m;
}

Eigen::MatrixXd Dense(const EntityGraph &g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) w(i, j) = g.at(i, j);
  }
  return w;
}

TEST(GraphPropertyTest, SymmetricPsdAndThresholded) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> gamma(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = MakeMap(rng, 30);
    const auto map = BuildEntityMap(m.query, m.passages, gamma(rng));
    const auto g = BuildEntityGraph(map, 0.0);
    const auto w = Dense(g);
    ASSERT_TRUE(w == w.transpose());
    ASSERT_GE(oracle::MinEigenvalue(w), -1e-10);
    const double tau = 0.2;
    const auto s = BuildEntityGraph(map, tau);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (i == j) {
          ASSERT_EQ(s.at(i, j), g.at(i, j));
        } else {
          ASSERT_TRUE(s.at(i, j) == 0.0 || s.at(i, j) >= tau);
        }
      }
    }
  }
}

TEST(GraphPropertyTest, GammaOneKeepsOnlyQueryStructure) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = MakeMap(rng, 20);
    const auto g = BuildEntityGraph(BuildEntityMap(m.query, m.passages, 1.0), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        const bool both = m.query.count(g.entities()[i]) &&
                          m.query.count(g.entities()[j]);
        ASSERT_EQ(g.at(i, j), both ? 1.0 : 0.0);
      }
    }
  }
}

TEST(EntityRankPropertyTest, DistributionMatchesDenseOracle) {
  std::mt19937_64 rng(24);
  const GraphParams params;
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = MakeMap(rng, 60);
    const auto g =
        BuildEntityGraph(BuildEntityMap(m.query, m.passages, 0.25), 0.0);
    const auto r = EntityRank(g, params);
    const auto want = oracle::PageRank(Dense(g), params.alpha);
    const double floor = (1.0 - params.alpha) / static_cast<double>(g.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double v = r.RankOf(g.entities()[i]);
      sum += v;
      ASSERT_GE(v, floor - 1e-12);
      ASSERT_NEAR(v, want(static_cast<Eigen::Index>(i)), 1e-8);
    }
    ASSERT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(EntityRankPropertyTest, PermutationEquivariant) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = MakeMap(rng, 25);
    const auto g =
        BuildEntityGraph(BuildEntityMap(m.query, m.passages, 0.5), 0.0);
    // Rename entities so their sorted order is reversed.
    const std::size_t n = g.size();
    std::vector<std::string> names(n);
    std::vector<double> w(n * n);
    for (std::size_t i = 0; i < n; ++i) names[i] = Name(static_cast<int>(n - 1 - i));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        w[(n - 1 - i) * n + (n - 1 - j)] = g.at(i, j);
      }
    }
    std::reverse(names.begin(), names.end());
    const auto h = EntityGraph::FromWeights(names, w);
    const auto rg = EntityRank(g, GraphParams{});
    const auto rh = EntityRank(h, GraphParams{});
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_NEAR(rg.RankOf(g.entities()[i]),
                  rh.RankOf(h.entities()[n - 1 - i]), 1e-9);
    }
  }
}

TEST(PassageScoreEgPropertyTest, ArgsortInvariantUnderScaling) {
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = MakeMap(rng, 15);
    EntityRankVector r;
    EntityRankVector scaled;
    for (int e = 0; e < 15; ++e) {
      const double v = u(rng);
      r.rank[Name(e)] = v;
      scaled.rank[Name(e)] = 3.5 * v;
    }
    std::vector<std::size_t> a(m.passages.size()), b(m.passages.size());
    std::iota(a.begin(), a.end(), 0);
    std::iota(b.begin(), b.end(), 0);
    auto by = [&](const EntityRankVector &ranks) {
      return [&](std::size_t x, std::size_t y) {
        return PassageScoreEg(m.passages[x], ranks) >
               PassageScoreEg(m.passages[y], ranks);
      };
    };
    std::stable_sort(a.begin(), a.end(), by(r));
    std::stable_sort(b.begin(), b.end(), by(scaled));
    ASSERT_EQ(a, b);
  }
}

}  // namespace
}  // namespace convsearch
