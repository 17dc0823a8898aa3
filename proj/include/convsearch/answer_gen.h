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

#ifndef CONVSEARCH_ANSWER_GEN_H_
#define CONVSEARCH_ANSWER_GEN_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "convsearch/entity_linking.h"
#include "convsearch/knowledge_graph.h"

namespace convsearch {

// O keeps the re-ranked order, ER rescores by entity relatedness to the
// query entities, EG by mean entity salience in the conversation graph.
enum class ScoringMethod { kOriginal, kEntityRelatedness, kEntityGraph };

std::string_view ScoringMethodName(ScoringMethod method);
// Accepts "O", "ER", "EG". Throws InvalidArgument otherwise.
ScoringMethod ParseScoringMethod(std::string_view name);

struct GenerationConfig {
  int min_length = 50;
  int max_length = 0;  // 0: word count of the summarizer input
  int beams = 4;
  int no_repeat_ngram = 3;
  bool early_stopping = true;
  bool include_query = false;
  std::size_t n_passages = 3;

  void Validate() const;
  // max_length, or the input word count when unset.
  int EffectiveMaxLength(std::string_view input) const;
};

// A re-ranked candidate with its text and linked entities.
struct CandidatePassage {
  std::string id;
  std::string text;
  double score = 0.0;  // re-ranker score
  std::vector<EntityMention> mentions;
  EntitySet entities;
};

// Entity graph of one turn and the salience of its entities.
struct ConversationGraph {
  EntityGraph graph;
  EntityRankVector ranks;
};

// Builds Map_E / Graph_E over the query entities and the candidates'
// entities and ranks them. std::nullopt when no entity is present.
std::optional<ConversationGraph> BuildConversationGraph(
    const EntitySet &query_entities,
    std::span<const CandidatePassage> candidates, const GraphParams &params);

struct Selection {
  // Selected passage indices into the candidate pool, best first.
  std::vector<std::size_t> selected;
  // Method score per pooled candidate; std::nullopt for method O and for
  // ER passages without a score.
  std::vector<std::optional<double>> method_scores;
  // Present when the candidates carry any entity.
  std::optional<ConversationGraph> graph;
};

// Picks config.n_passages passages among the first params.candidate_pool
// candidates. ER/EG reorder the pool by descending score; ties and unscored
// ER passages keep the re-ranked order, with unscored passages after the
// scored ones. Throws InvalidArgument for an empty candidate list.
Selection SelectPassages(std::span<const CandidatePassage> candidates,
                         ScoringMethod method, const EntitySet &query_entities,
                         const KnowledgeBaseStore &kb,
                         const GraphParams &params, std::size_t n_passages);

// Passage texts joined by single spaces, optionally preceded by the query.
std::string BuildSummarizerInput(std::span<const std::string> passages,
                                 const GenerationConfig &config,
                                 std::string_view query);

class Summarizer {
 public:
  virtual ~Summarizer() = default;
  // Throws AdapterError on failure.
  virtual std::string Summarize(const std::string &input,
                                const GenerationConfig &config) const = 0;
};

// Extractive stand-in: whole sentences are emitted in order until at least
// min_length words are out, then the output is cut at the effective
// max_length. A sentence ends at a run of '.', '!' or '?' followed by
// whitespace or the end of input. Words are re-joined by single spaces.
std::string StubSummarize(std::string_view input, const GenerationConfig &config);

class StubSummarizer : public Summarizer {
 public:
  std::string Summarize(const std::string &input,
                        const GenerationConfig &config) const override {
    return StubSummarize(input, config);
  }
};

// Throws InvalidArgument for empty input. Adapter failures propagate unless
// fallback_to_stub is set, in which case StubSummarize answers instead.
std::string GenerateAnswer(const std::string &input,
                           const GenerationConfig &config,
                           const Summarizer &summarizer,
                           bool fallback_to_stub = false);

}  // namespace convsearch

#endif  // CONVSEARCH_ANSWER_GEN_H_
