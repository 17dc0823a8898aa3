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

// Per-conversation entity knowledge graph.
//
// Entities linked in the queries and in the top candidate passages form a
// weighted presence matrix (one query column weighted gamma, one column per
// passage weighted 1 - gamma). Its Gram matrix is the entity co-occurrence
// graph, and PageRank over that graph gives each entity a salience score.
// Passages are then rescored either by the mean salience of their entities
// or by their average link-based relatedness to the query entities.

#ifndef CONVSEARCH_KNOWLEDGE_GRAPH_H_
#define CONVSEARCH_KNOWLEDGE_GRAPH_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "convsearch/entity_linking.h"
#include "convsearch/error.h"

namespace convsearch {

// kSimilarity returns 1 - d for the link distance d; kRaw returns d itself.
enum class RelatednessPolarity { kSimilarity, kRaw };

// How a passage's entity saliences are combined.
//   kMean:   sum of ranks / number of the passage's graph entities.
//   kDegree: sum of rank(e) / degree(e), degree = number of graph
//            neighbours (treated as 1 for isolated entities).
enum class SalienceNormalization { kMean, kDegree };

struct GraphParams {
  double gamma = 0.25;
  double tau = 0.0;
  double alpha = 0.99;
  double pagerank_tol = 1e-10;
  int pagerank_max_iter = 10000;
  std::size_t candidate_pool = 10;
  RelatednessPolarity polarity = RelatednessPolarity::kSimilarity;
  SalienceNormalization normalization = SalienceNormalization::kMean;

  // Throws InvalidArgument on out-of-range values.
  void Validate() const;
};

// Milne-Witten link distance between two entities:
//
//   d = (log max(|A|,|B|) - log |A∩B|) / (log |D| - log min(|A|,|B|))
//
// over inlink sets A, B and KB size |D|, clamped to [0, 1]. d = 1 when the
// intersection is empty or |D| <= min(|A|,|B|); d = 0 for identical ids.
// Unknown entities have empty inlink sets.
double LinkDistance(std::string_view e1, std::string_view e2,
                    const KnowledgeBaseStore &kb);

double EntityRelatedness(
    std::string_view e1, std::string_view e2, const KnowledgeBaseStore &kb,
    RelatednessPolarity polarity = RelatednessPolarity::kSimilarity);

// Average pairwise relatedness between the query entities and the passage
// entities. std::nullopt when either set is empty; callers keep the
// retrieval order for such passages.
std::optional<double> PassageScoreEr(
    const EntitySet &passage_entities, const EntitySet &query_entities,
    const KnowledgeBaseStore &kb,
    RelatednessPolarity polarity = RelatednessPolarity::kSimilarity);

// Weighted entity-presence matrix. Rows are the sorted union of all
// entities; column 0 is the query column, columns 1..m the passages.
class EntityMap {
 public:
  const std::vector<std::string> &entities() const { return entities_; }
  std::size_t rows() const { return entities_.size(); }
  std::size_t cols() const { return cols_; }
  double gamma() const { return gamma_; }
  double at(std::size_t row, std::size_t col) const {
    return cells_[row * cols_ + col];
  }

 private:
  friend EntityMap BuildEntityMap(const EntitySet &,
                                  std::span<const EntitySet>, double);

  std::vector<std::string> entities_;
  std::size_t cols_ = 0;
  double gamma_ = 0.0;
  std::vector<double> cells_;
};

// Throws InvalidArgument unless gamma is in [0, 1].
EntityMap BuildEntityMap(const EntitySet &query_entities,
                         std::span<const EntitySet> passage_entities,
                         double gamma);

// Symmetric non-negative entity graph over the map's entity ordering.
class EntityGraph {
 public:
  const std::vector<std::string> &entities() const { return entities_; }
  std::size_t size() const { return entities_.size(); }
  double tau() const { return tau_; }
  double at(std::size_t i, std::size_t j) const {
    return weights_[i * entities_.size() + j];
  }
  // Index of an entity, or std::nullopt.
  std::optional<std::size_t> IndexOf(std::string_view entity) const;
  // Number of non-zero off-diagonal entries in row i.
  std::size_t Degree(std::size_t i) const;

  // Builds a graph from an explicit symmetric weight matrix (row-major).
  // Throws InvalidArgument on asymmetric, negative or mis-sized input.
  static EntityGraph FromWeights(std::vector<std::string> entities,
                                 std::vector<double> weights, double tau = 0.0);

 private:
  friend EntityGraph BuildEntityGraph(const EntityMap &, double);

  std::vector<std::string> entities_;
  std::vector<double> weights_;
  double tau_ = 0.0;
};

// Map * Map^T with off-diagonal entries below tau set to zero. The upper
// triangle is computed once and mirrored, so symmetry is exact.
EntityGraph BuildEntityGraph(const EntityMap &map, double tau);

struct EntityRankVector {
  std::map<std::string, double> rank;
  int iterations = 0;
  double residual = 0.0;  // L1 change of the last iteration

  // 0 for entities not in the graph.
  double RankOf(std::string_view entity) const;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(int iterations, double residual)
      : Error("entity rank did not converge after " +
              std::to_string(iterations) + " iterations (residual " +
              std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// Weighted PageRank by power iteration, starting from the uniform vector:
//
//   r_i <- (1 - alpha)/N + alpha * (sum_j w(i,j) r_j / deg(j) + dangling/N)
//
// Self-loops are ignored, deg(j) is the weighted degree, and the rank held
// by entities without edges is spread uniformly. Stops when the L1 change
// drops below params.pagerank_tol; throws ConvergenceError after
// params.pagerank_max_iter iterations and InvalidArgument for an empty graph.
EntityRankVector EntityRank(const EntityGraph &graph, const GraphParams &params);

// Salience score of a passage. Entities outside the rank vector are ignored;
// a passage with no ranked entity scores 0. kDegree needs `graph`.
double PassageScoreEg(
    const EntitySet &passage_entities, const EntityRankVector &ranks,
    SalienceNormalization normalization = SalienceNormalization::kMean,
    const EntityGraph *graph = nullptr);

struct GraphNode {
  std::string id;
  double rank = 0.0;
  std::string tier;  // "top" or "bottom"

  bool operator==(const GraphNode &) const = default;
};

struct GraphEdge {
  std::string source;
  std::string target;
  double weight = 0.0;

  bool operator==(const GraphEdge &) const = default;
};

struct GraphDocument {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  bool operator==(const GraphDocument &) const = default;
};

// Nodes by descending rank (ties by id); the first ceil(top_fraction * N)
// are tier "top". Edges are the non-zero off-diagonal entries with
// source < target, sorted by (source, target).
GraphDocument ExportGraph(const EntityGraph &graph,
                          const EntityRankVector &ranks,
                          double top_fraction = 0.5);

}  // namespace convsearch

#endif  // CONVSEARCH_KNOWLEDGE_GRAPH_H_
