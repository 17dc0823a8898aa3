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

// The per-turn pipeline shared by the batch runner, the terminal loop and
// the HTTP service:
//
//   rewrite -> retrieve -> rerank -> link -> score by method -> select
//   -> generate
//
// A Pipeline is immutable once opened and may serve any number of
// conversations concurrently; each Conversation must be advanced by one
// turn at a time.

#ifndef CONVSEARCH_PIPELINE_H_
#define CONVSEARCH_PIPELINE_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "convsearch/answer_gen.h"
#include "convsearch/config.h"
#include "convsearch/conversation.h"
#include "convsearch/entity_linking.h"
#include "convsearch/index_store.h"
#include "convsearch/knowledge_graph.h"
#include "convsearch/metrics.h"
#include "convsearch/text_index.h"

namespace convsearch {

// What-if knobs applied on top of the pipeline config.
struct AnswerOverrides {
  std::optional<double> gamma;
  std::optional<ScoringMethod> method;
  std::optional<int> min_length;
  std::optional<bool> include_query;
};

// Everything retrieval and linking produced for one turn. Answers can be
// recomputed from it without touching the index or the adapters.
struct TurnState {
  int index = 0;
  std::string raw_query;
  std::string prompt;
  std::string rewritten_query;
  RankedList first_stage;
  RankedList reranked;
  std::vector<EntityMention> query_mentions;
  EntitySet query_entities;   // this turn only
  EntitySet entity_history;   // this turn and every earlier one
  std::vector<CandidatePassage> candidates;  // re-ranked candidate pool
};

struct SalientEntity {
  std::string id;
  double rank = 0.0;
};

struct AnswerOutcome {
  ScoringMethod method = ScoringMethod::kEntityGraph;
  double gamma = 0.0;
  int min_length = 0;
  bool include_query = false;
  Selection selection;
  std::vector<std::string> selected_ids;
  std::string summarizer_input;
  std::string answer;
  std::optional<GraphDocument> graph;
};

struct TurnTimings {
  double rewrite_ms = 0.0;
  double retrieve_ms = 0.0;
  double rerank_ms = 0.0;
  double link_ms = 0.0;
  double answer_ms = 0.0;
};

struct TurnOutcome {
  TurnState state;
  AnswerOutcome answer;
  TurnTimings timings;
};

class Pipeline {
 public:
  struct Components {
    InvertedIndex index;
    PassageStore passages;
    KnowledgeBaseStore kb;
    std::unique_ptr<Linker> linker;
    std::unique_ptr<Rewriter> rewriter;
    std::unique_ptr<Reranker> reranker;
    std::unique_ptr<Summarizer> summarizer;
  };

  // Null adapters in `components` are replaced by the stubs.
  Pipeline(PipelineConfig config, Components components);

  // Loads the index, KB and linker named by the config and connects the
  // configured adapters. Throws on invalid config or unreadable inputs.
  static std::shared_ptr<const Pipeline> Open(const PipelineConfig &config);

  const PipelineConfig &config() const { return config_; }
  const InvertedIndex &index() const { return components_.index; }
  const PassageStore &passages() const { return components_.passages; }
  const KnowledgeBaseStore &kb() const { return components_.kb; }

  // Runs one turn against the committed history of `conversation` without
  // modifying it.
  TurnOutcome RunTurn(const Conversation &conversation,
                      const std::string &raw_query,
                      const AnswerOverrides &overrides = {}) const;

  // Selection and generation over a turn's cached candidates.
  AnswerOutcome Answer(const TurnState &state,
                       const AnswerOverrides &overrides = {}) const;

  // Turn record for the conversation after `outcome` has been produced.
  static Turn MakeTurn(const TurnOutcome &outcome);

  RunRecord MakeRunRecord(const std::string &topic,
                          const TurnOutcome &outcome) const;

  // Top `count` entities of an outcome's graph by rank.
  static std::vector<SalientEntity> TopEntities(const AnswerOutcome &answer,
                                                std::size_t count);

 private:
  std::vector<EntityMention> LinkText(const std::string &text) const;

  PipelineConfig config_;
  Components components_;
};

}  // namespace convsearch

#endif  // CONVSEARCH_PIPELINE_H_
