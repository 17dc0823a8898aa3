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

#include "convsearch/conversation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "convsearch/text_index.h"

namespace convsearch {
namespace {

std::string Assemble(std::span<const PromptTurn> history,
                     std::string_view current_query) {
  std::string prompt(current_query);
  prompt += ' ';
  prompt += kContextToken;
  for (std::size_t j = 0; j < history.size(); ++j) {
    if (j > 0) {
      prompt += ' ';
      prompt += kTurnToken;
    }
    prompt += ' ';
    prompt += history[j].query;
    prompt += ' ';
    prompt += history[j].passage;
  }
  return prompt;
}

}  // namespace

const Turn &Conversation::AdvanceTurn(Turn turn) {
  turn.index = next_turn_index();
  history_.insert(turn.query_entities.begin(), turn.query_entities.end());
  turns_.push_back(std::move(turn));
  return turns_.back();
}

std::string BuildRewritePrompt(std::span<const PromptTurn> history,
                               std::string_view current_query,
                               std::size_t max_tokens) {
  std::size_t first = 0;
  std::string prompt = Assemble(history, current_query);
  while (first < history.size() && CountWords(prompt) > max_tokens) {
    ++first;
    prompt = Assemble(history.subspan(first), current_query);
  }
  return prompt;
}

std::string CurrentQueryOfPrompt(std::string_view prompt) {
  const std::string marker = " " + std::string(kContextToken);
  const std::size_t pos = prompt.find(marker);
  return std::string(pos == std::string_view::npos ? prompt
                                                   : prompt.substr(0, pos));
}

std::string BuildRerankInput(std::string_view query, std::string_view passage) {
  std::string out = "[CLS] ";
  out += query;
  out += " [SEP] ";
  out += passage;
  return out;
}

std::string IdentityRewriter::Rewrite(const std::string &prompt) const {
  return CurrentQueryOfPrompt(prompt);
}

std::vector<double> OverlapReranker::Score(
    std::span<const RerankPair> pairs) const {
  std::vector<double> scores;
  scores.reserve(pairs.size());
  for (const auto &pair : pairs) {
    const auto q = AnalyzeText(pair.query);
    const auto p = AnalyzeText(pair.passage);
    const std::set<std::string> query_stems(q.begin(), q.end());
    const std::set<std::string> passage_stems(p.begin(), p.end());
    if (query_stems.empty()) {
      scores.push_back(0.0);
      continue;
    }
    std::size_t shared = 0;
    for (const auto &s : query_stems) shared += passage_stems.count(s);
    scores.push_back(static_cast<double>(shared) /
                     static_cast<double>(query_stems.size()));
  }
  return scores;
}

RankedList Rerank(std::string_view query, const RankedList &candidates,
                  const PassageStore &passages, const Reranker &reranker,
                  std::size_t depth, int turn_index) {
  if (depth > candidates.size()) {
    throw InvalidArgument("rerank: depth " + std::to_string(depth) +
                          " exceeds " + std::to_string(candidates.size()) +
                          " candidates");
  }
  std::vector<RerankPair> pairs;
  pairs.reserve(depth);
  for (std::size_t i = 0; i < depth; ++i) {
    pairs.push_back({std::string(query), passages.Text(candidates[i].id)});
  }

  std::vector<double> scores;
  try {
    scores = reranker.Score(pairs);
    if (scores.size() != depth) {
      throw AdapterError(AdapterError::Kind::kMalformedPayload,
                         "reranker returned " + std::to_string(scores.size()) +
                             " scores for " + std::to_string(depth) +
                             " pairs");
    }
    for (double s : scores) {
      if (!std::isfinite(s)) {
        throw AdapterError(AdapterError::Kind::kMalformedPayload,
                           "reranker returned a non-finite score");
      }
    }
  } catch (const AdapterError &e) {
    throw RerankError(turn_index, e);
  }

  std::vector<std::size_t> order(depth);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  std::vector<ScoredPassage> out;
  out.reserve(depth);
  for (std::size_t i : order) out.push_back({candidates[i].id, scores[i]});
  return RankedList(std::move(out));
}

}  // namespace convsearch
