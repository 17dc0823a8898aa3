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

// Multi-turn session state, query-rewrite prompts and passage re-ranking.

#ifndef CONVSEARCH_CONVERSATION_H_
#define CONVSEARCH_CONVERSATION_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "convsearch/entity_linking.h"
#include "convsearch/error.h"
#include "convsearch/index_store.h"
#include "convsearch/ranked_list.h"

namespace convsearch {

inline constexpr std::string_view kContextToken = "[CTX]";
inline constexpr std::string_view kTurnToken = "[TURN]";
inline constexpr std::size_t kMaxPromptTokens = 512;

struct Turn {
  int index = 0;  // 1-based
  std::string raw_query;
  std::string prompt;
  std::string rewritten_query;
  RankedList first_stage;
  RankedList reranked;
  EntitySet query_entities;
  std::vector<std::string> selected_passages;
  std::string answer;
};

class Conversation {
 public:
  Conversation() = default;
  explicit Conversation(std::string topic_id) : topic_id_(std::move(topic_id)) {}

  const std::string &topic_id() const { return topic_id_; }
  const std::vector<Turn> &turns() const { return turns_; }
  // Union of the query entities of every committed turn.
  const EntitySet &query_entity_history() const { return history_; }
  int next_turn_index() const { return static_cast<int>(turns_.size()) + 1; }

  // Commits a finished turn: assigns the next index and merges its query
  // entities into the history.
  const Turn &AdvanceTurn(Turn turn);

 private:
  std::string topic_id_;
  std::vector<Turn> turns_;
  EntitySet history_;
};

// One earlier exchange as it appears in the rewrite prompt.
struct PromptTurn {
  std::string query;
  std::string passage;
};

// "q_i [CTX] q_1 p_1 [TURN] q_2 p_2 [TURN] ... q_{i-1} p_{i-1}". With no
// history the result is "q_i [CTX]". Oldest turns are dropped until the
// prompt fits in max_tokens whitespace-delimited tokens.
std::string BuildRewritePrompt(std::span<const PromptTurn> history,
                               std::string_view current_query,
                               std::size_t max_tokens = kMaxPromptTokens);

// Current-query part of a rewrite prompt (everything before " [CTX]").
std::string CurrentQueryOfPrompt(std::string_view prompt);

// "[CLS] {query} [SEP] {passage}" with no escaping.
std::string BuildRerankInput(std::string_view query, std::string_view passage);

class Rewriter {
 public:
  virtual ~Rewriter() = default;
  // Throws AdapterError on failure.
  virtual std::string Rewrite(const std::string &prompt) const = 0;
};

struct RerankPair {
  std::string query;
  std::string passage;
};

class Reranker {
 public:
  virtual ~Reranker() = default;
  // One relevance probability per pair. Throws AdapterError on failure.
  virtual std::vector<double> Score(std::span<const RerankPair> pairs) const = 0;
};

// Returns the current query unchanged.
class IdentityRewriter : public Rewriter {
 public:
  std::string Rewrite(const std::string &prompt) const override;
};

// |stems(query) ∩ stems(passage)| / |stems(query)| over distinct stems.
class OverlapReranker : public Reranker {
 public:
  std::vector<double> Score(std::span<const RerankPair> pairs) const override;
};

// Raised when re-ranking fails; carries the turn being processed.
class RerankError : public AdapterError {
 public:
  RerankError(int turn, const AdapterError &cause)
      : AdapterError(cause.kind(), "turn " + std::to_string(turn) +
                                       ": rerank failed: " + cause.what()),
        turn_(turn) {}

  int turn() const { return turn_; }

 private:
  int turn_;
};

// Re-orders the top `depth` candidates by reranker score (stable, so ties
// keep first-stage order) and drops the rest. Throws InvalidArgument if
// depth exceeds the candidate count and RerankError on adapter failure.
RankedList Rerank(std::string_view query, const RankedList &candidates,
                  const PassageStore &passages, const Reranker &reranker,
                  std::size_t depth, int turn_index);

}  // namespace convsearch

#endif  // CONVSEARCH_CONVERSATION_H_
