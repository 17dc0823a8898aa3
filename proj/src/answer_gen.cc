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

#include "convsearch/answer_gen.h"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "convsearch/error.h"
#include "convsearch/text_index.h"

namespace convsearch {
namespace {

bool IsTerminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Sentences as word lists. A sentence ends after a run of terminal
// punctuation followed by whitespace or the end of the text, so "U.S."
// stays inside its sentence. Trailing text without punctuation is a last
// sentence.
std::vector<std::vector<std::string>> SplitSentences(std::string_view text) {
  std::vector<std::vector<std::string>> sentences;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (IsTerminal(text[i])) {
      while (i < text.size() && IsTerminal(text[i])) ++i;
      if (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
        continue;
      }
      auto words = SplitWords(text.substr(start, i - start));
      if (!words.empty()) sentences.push_back(std::move(words));
      start = i;
    } else {
      ++i;
    }
  }
  auto tail = SplitWords(text.substr(start));
  if (!tail.empty()) sentences.push_back(std::move(tail));
  return sentences;
}

}  // namespace

std::string_view ScoringMethodName(ScoringMethod method) {
  switch (method) {
    case ScoringMethod::kOriginal:
      return "O";
    case ScoringMethod::kEntityRelatedness:
      return "ER";
    case ScoringMethod::kEntityGraph:
      return "EG";
  }
  return "O";
}

ScoringMethod ParseScoringMethod(std::string_view name) {
  if (name == "O") return ScoringMethod::kOriginal;
  if (name == "ER") return ScoringMethod::kEntityRelatedness;
  if (name == "EG") return ScoringMethod::kEntityGraph;
  throw InvalidArgument("unknown scoring method '" + std::string(name) +
                        "' (expected O, ER or EG)");
}

void GenerationConfig::Validate() const {
  if (min_length <= 0) {
    throw InvalidArgument("generation: min_length must be positive");
  }
  if (max_length < 0 || (max_length > 0 && max_length < min_length)) {
    throw InvalidArgument("generation: require min_length <= max_length");
  }
  if (beams <= 0 || no_repeat_ngram < 0) {
    throw InvalidArgument("generation: invalid beam settings");
  }
  if (n_passages == 0) {
    throw InvalidArgument("generation: n_passages must be at least 1");
  }
}

int GenerationConfig::EffectiveMaxLength(std::string_view input) const {
  return max_length > 0 ? max_length : static_cast<int>(CountWords(input));
}

std::optional<ConversationGraph> BuildConversationGraph(
    const EntitySet &query_entities,
    std::span<const CandidatePassage> candidates, const GraphParams &params) {
  std::vector<EntitySet> passage_entities;
  passage_entities.reserve(candidates.size());
  for (const auto &c : candidates) passage_entities.push_back(c.entities);
  EntityMap map = BuildEntityMap(query_entities, passage_entities, params.gamma);
  if (map.rows() == 0) return std::nullopt;
  ConversationGraph out{BuildEntityGraph(map, params.tau), {}};
  out.ranks = EntityRank(out.graph, params);
  return out;
}

Selection SelectPassages(std::span<const CandidatePassage> candidates,
                         ScoringMethod method, const EntitySet &query_entities,
                         const KnowledgeBaseStore &kb,
                         const GraphParams &params, std::size_t n_passages) {
  if (candidates.empty()) {
    throw InvalidArgument("select: no candidate passages");
  }
  const auto pool =
      candidates.first(std::min(params.candidate_pool, candidates.size()));

  Selection out;
  out.method_scores.assign(pool.size(), std::nullopt);
  out.graph = BuildConversationGraph(query_entities, pool, params);

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  if (method == ScoringMethod::kEntityRelatedness) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      out.method_scores[i] = PassageScoreEr(pool[i].entities, query_entities,
                                            kb, params.polarity);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       const auto &sa = out.method_scores[a];
                       const auto &sb = out.method_scores[b];
                       if (sa.has_value() != sb.has_value()) {
                         return sa.has_value();
                       }
                       return sa.has_value() && *sa > *sb;
                     });
  } else if (method == ScoringMethod::kEntityGraph && out.graph.has_value()) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      out.method_scores[i] =
          PassageScoreEg(pool[i].entities, out.graph->ranks,
                         params.normalization, &out.graph->graph);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return *out.method_scores[a] > *out.method_scores[b];
                     });
  }

  order.resize(std::min(n_passages, order.size()));
  out.selected = std::move(order);
  return out;
}

std::string BuildSummarizerInput(std::span<const std::string> passages,
                                 const GenerationConfig &config,
                                 std::string_view query) {
  if (passages.empty()) {
    throw InvalidArgument("summarizer input: no passages");
  }
  std::string out;
  if (config.include_query) {
    out += query;
    out += ' ';
  }
  for (std::size_t i = 0; i < passages.size(); ++i) {
    if (i > 0) out += ' ';
    out += passages[i];
  }
  return out;
}

std::string StubSummarize(std::string_view input,
                          const GenerationConfig &config) {
  const auto max_words = static_cast<std::size_t>(
      std::max(0, config.EffectiveMaxLength(input)));
  const auto min_words = static_cast<std::size_t>(std::max(0, config.min_length));
  std::vector<std::string> words;
  for (auto &sentence : SplitSentences(input)) {
    for (auto &w : sentence) words.push_back(std::move(w));
    if (words.size() >= min_words) break;
  }
  if (words.size() > max_words) words.resize(max_words);
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  return out;
}

std::string GenerateAnswer(const std::string &input,
                           const GenerationConfig &config,
                           const Summarizer &summarizer,
                           bool fallback_to_stub) {
  if (input.empty()) {
    throw InvalidArgument("generate: summarizer input is empty");
  }
  try {
    return summarizer.Summarize(input, config);
  } catch (const AdapterError &) {
    if (!fallback_to_stub) throw;
    return StubSummarize(input, config);
  }
}

}  // namespace convsearch
