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

#include <algorithm>
#include <cmath>
#include <numeric>

namespace convsearch {
namespace {

std::size_t IntersectionSize(const std::vector<std::uint32_t> &a,
                             const std::vector<std::uint32_t> &b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

void GraphParams::Validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidArgument("graph: gamma must lie in [0, 1]");
  }
  if (!(tau >= 0.0)) throw InvalidArgument("graph: tau must be >= 0");
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidArgument("graph: alpha must lie in [0, 1)");
  }
  if (!(pagerank_tol > 0.0)) {
    throw InvalidArgument("graph: pagerank_tol must be positive");
  }
  if (pagerank_max_iter <= 0) {
    throw InvalidArgument("graph: pagerank_max_iter must be positive");
  }
  if (candidate_pool == 0) {
    throw InvalidArgument("graph: candidate_pool must be positive");
  }
}

double LinkDistance(std::string_view e1, std::string_view e2,
                    const KnowledgeBaseStore &kb) {
  if (e1 == e2) return 0.0;
  const auto &a = kb.Inlinks(e1);
  const auto &b = kb.Inlinks(e2);
  const std::size_t common = IntersectionSize(a, b);
  if (common == 0) return 1.0;
  const double larger = static_cast<double>(std::max(a.size(), b.size()));
  const double smaller = static_cast<double>(std::min(a.size(), b.size()));
  const double total = static_cast<double>(kb.total_entities());
  if (total <= smaller) return 1.0;
  const double d = (std::log(larger) - std::log(static_cast<double>(common))) /
                   (std::log(total) - std::log(smaller));
  return std::clamp(d, 0.0, 1.0);
}

double EntityRelatedness(std::string_view e1, std::string_view e2,
                         const KnowledgeBaseStore &kb,
                         RelatednessPolarity polarity) {
  const double d = LinkDistance(e1, e2, kb);
  return polarity == RelatednessPolarity::kSimilarity ? 1.0 - d : d;
}

std::optional<double> PassageScoreEr(const EntitySet &passage_entities,
                                     const EntitySet &query_entities,
                                     const KnowledgeBaseStore &kb,
                                     RelatednessPolarity polarity) {
  if (passage_entities.empty() || query_entities.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto &q : query_entities) {
    for (const auto &p : passage_entities) {
      sum += EntityRelatedness(q, p, kb, polarity);
    }
  }
  return sum / (static_cast<double>(query_entities.size()) *
                static_cast<double>(passage_entities.size()));
}

EntityMap BuildEntityMap(const EntitySet &query_entities,
                         std::span<const EntitySet> passage_entities,
                         double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidArgument("entity map: gamma must lie in [0, 1]");
  }
  EntitySet all = query_entities;
  for (const auto &p : passage_entities) all.insert(p.begin(), p.end());

  EntityMap map;
  map.gamma_ = gamma;
  map.entities_.assign(all.begin(), all.end());
  map.cols_ = 1 + passage_entities.size();
  map.cells_.assign(map.entities_.size() * map.cols_, 0.0);
  for (std::size_t r = 0; r < map.entities_.size(); ++r) {
    const std::string &e = map.entities_[r];
    if (query_entities.count(e)) map.cells_[r * map.cols_] = gamma * 1.0;
    for (std::size_t k = 0; k < passage_entities.size(); ++k) {
      if (passage_entities[k].count(e)) {
        map.cells_[r * map.cols_ + 1 + k] = (1.0 - gamma) * 1.0;
      }
    }
  }
  return map;
}

std::optional<std::size_t> EntityGraph::IndexOf(std::string_view entity) const {
  auto it = std::lower_bound(entities_.begin(), entities_.end(), entity);
  if (it == entities_.end() || *it != entity) return std::nullopt;
  return static_cast<std::size_t>(it - entities_.begin());
}

std::size_t EntityGraph::Degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (j != i && at(i, j) > 0.0) ++d;
  }
  return d;
}

EntityGraph EntityGraph::FromWeights(std::vector<std::string> entities,
                                     std::vector<double> weights, double tau) {
  const std::size_t n = entities.size();
  if (weights.size() != n * n) {
    throw InvalidArgument("entity graph: weight matrix has the wrong size");
  }
  if (!std::is_sorted(entities.begin(), entities.end()) ||
      std::adjacent_find(entities.begin(), entities.end()) != entities.end()) {
    throw InvalidArgument("entity graph: entities must be sorted and unique");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = weights[i * n + j];
      if (!(w >= 0.0) || w != weights[j * n + i]) {
        throw InvalidArgument(
            "entity graph: weights must be symmetric and non-negative");
      }
    }
  }
  EntityGraph g;
  g.entities_ = std::move(entities);
  g.weights_ = std::move(weights);
  g.tau_ = tau;
  return g;
}

EntityGraph BuildEntityGraph(const EntityMap &map, double tau) {
  const std::size_t n = map.rows();
  const std::size_t cols = map.cols();
  EntityGraph g;
  g.entities_ = map.entities();
  g.tau_ = tau;
  g.weights_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < cols; ++c) dot += map.at(i, c) * map.at(j, c);
      if (i != j && dot < tau) dot = 0.0;
      g.weights_[i * n + j] = dot;
      g.weights_[j * n + i] = dot;
    }
  }
  return g;
}

double EntityRankVector::RankOf(std::string_view entity) const {
  auto it = rank.find(std::string(entity));
  return it == rank.end() ? 0.0 : it->second;
}

EntityRankVector EntityRank(const EntityGraph &graph,
                            const GraphParams &params) {
  const std::size_t n = graph.size();
  if (n == 0) throw InvalidArgument("entity rank: graph has no entities");

  // In-neighbour lists with the transition weight w(i,j) / deg(j) folded in.
  std::vector<double> degree(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) degree[j] += graph.at(j, k);
    }
  }
  struct Link {
    std::size_t from;
    double weight;
  };
  std::vector<std::vector<Link>> incoming(n);
  std::vector<std::size_t> dangling;
  for (std::size_t j = 0; j < n; ++j) {
    if (degree[j] <= 0.0) {
      dangling.push_back(j);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double w = graph.at(i, j);
      if (i != j && w > 0.0) incoming[i].push_back({j, w / degree[j]});
    }
  }

  const double alpha = params.alpha;
  const double teleport = (1.0 - alpha) / static_cast<double>(n);
  std::vector<double> rank(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n, 0.0);
  EntityRankVector out;
  for (int iter = 1;; ++iter) {
    double dangling_mass = 0.0;
    for (std::size_t j : dangling) dangling_mass += rank[j];
    const double base =
        teleport + alpha * dangling_mass / static_cast<double>(n);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double flow = 0.0;
      for (const Link &l : incoming[i]) flow += l.weight * rank[l.from];
      next[i] = base + alpha * flow;
      change += std::abs(next[i] - rank[i]);
    }
    rank.swap(next);
    out.iterations = iter;
    out.residual = change;
    if (change < params.pagerank_tol) break;
    if (iter >= params.pagerank_max_iter) {
      throw ConvergenceError(iter, change);
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.rank[graph.entities()[i]] = rank[i];
  return out;
}

double PassageScoreEg(const EntitySet &passage_entities,
                      const EntityRankVector &ranks,
                      SalienceNormalization normalization,
                      const EntityGraph *graph) {
  if (normalization == SalienceNormalization::kDegree && graph == nullptr) {
    throw InvalidArgument("passage score: degree normalization needs a graph");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto &e : passage_entities) {
    auto it = ranks.rank.find(e);
    if (it == ranks.rank.end()) continue;
    ++count;
    if (normalization == SalienceNormalization::kMean) {
      sum += it->second;
    } else {
      std::size_t degree = 1;
      if (auto idx = graph->IndexOf(e)) {
        degree = std::max<std::size_t>(1, graph->Degree(*idx));
      }
      sum += it->second / static_cast<double>(degree);
    }
  }
  if (count == 0) return 0.0;
  return normalization == SalienceNormalization::kMean
             ? sum / static_cast<double>(count)
             : sum;
}

GraphDocument ExportGraph(const EntityGraph &graph,
                          const EntityRankVector &ranks, double top_fraction) {
  const std::size_t n = graph.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = ranks.RankOf(graph.entities()[i]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r[a] > r[b]; });

  const double fraction = std::clamp(top_fraction, 0.0, 1.0);
  const auto top_count = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n) - 1e-12));

  GraphDocument doc;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t i = order[pos];
    doc.nodes.push_back(
        {graph.entities()[i], r[i], pos < top_count ? "top" : "bottom"});
  }
  // Entities are sorted, so i < j gives source < target in id order.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = graph.at(i, j);
      if (w > 0.0 && w >= graph.tau()) {
        doc.edges.push_back({graph.entities()[i], graph.entities()[j], w});
      }
    }
  }
  return doc;
}

}  // namespace convsearch
