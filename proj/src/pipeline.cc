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

#include "convsearch/pipeline.h"

#include <algorithm>
#include <chrono>
#include <set>

#include "convsearch/error.h"
#include "convsearch/http_adapters.h"

namespace convsearch {
namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ElapsedMs() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

Pipeline::Pipeline(PipelineConfig config, Components components)
    : config_(std::move(config)), components_(std::move(components)) {
  config_.Validate(/*check_paths=*/false);
  if (!components_.linker) {
    components_.linker = std::make_unique<GazetteerLinker>();
  }
  if (!components_.rewriter) {
    components_.rewriter = std::make_unique<IdentityRewriter>();
  }
  if (!components_.reranker) {
    components_.reranker = std::make_unique<OverlapReranker>();
  }
  if (!components_.summarizer) {
    components_.summarizer = std::make_unique<StubSummarizer>();
  }
}

std::shared_ptr<const Pipeline> Pipeline::Open(const PipelineConfig &config) {
  config.Validate(/*check_paths=*/true);
  Components c;
  c.index = IndexStore::Load(config.index, &c.passages);
  c.kb = LoadKnowledgeBase(config.kb);
  if (config.linker == LinkerKind::kGazetteer) {
    c.linker = std::make_unique<GazetteerLinker>(
        GazetteerLinker::Load(config.gazetteer));
  } else {
    c.linker = std::make_unique<SpotlightLinker>(config.spotlight_endpoint);
  }
  if (!config.rewriter_endpoint.empty()) {
    c.rewriter = std::make_unique<HttpRewriter>(config.rewriter_endpoint);
  }
  if (!config.reranker_endpoint.empty()) {
    c.reranker = std::make_unique<HttpReranker>(config.reranker_endpoint);
  }
  if (!config.summarizer_endpoint.empty()) {
    c.summarizer = std::make_unique<HttpSummarizer>(config.summarizer_endpoint);
  }
  return std::make_shared<const Pipeline>(config, std::move(c));
}

std::vector<EntityMention> Pipeline::LinkText(const std::string &text) const {
  try {
    return Link(text, *components_.linker, config_.link_confidence);
  } catch (const AdapterError &) {
    if (config_.link_failure_entity_free) return {};
    throw;
  }
}

TurnOutcome Pipeline::RunTurn(const Conversation &conversation,
                              const std::string &raw_query,
                              const AnswerOverrides &overrides) const {
  TurnOutcome out;
  TurnState &s = out.state;
  s.index = conversation.next_turn_index();
  s.raw_query = raw_query;

  Stopwatch watch;
  std::vector<PromptTurn> history;
  for (const Turn &t : conversation.turns()) {
    std::string passage;
    if (!t.reranked.empty()) passage = passages().Text(t.reranked[0].id);
    history.push_back({t.raw_query, std::move(passage)});
  }
  s.prompt = BuildRewritePrompt(history, raw_query);
  if (s.index == 1) {
    s.rewritten_query = raw_query;
  } else {
    try {
      s.rewritten_query = components_.rewriter->Rewrite(s.prompt);
    } catch (const AdapterError &) {
      if (!config_.adapter_fallback) throw;
      s.rewritten_query = IdentityRewriter().Rewrite(s.prompt);
    }
  }
  out.timings.rewrite_ms = watch.ElapsedMs();

  watch = Stopwatch();
  s.first_stage = Retrieve(s.rewritten_query, index(), config_.retrieval);
  out.timings.retrieve_ms = watch.ElapsedMs();

  watch = Stopwatch();
  const std::size_t depth =
      std::min(config_.retrieval.rerank_depth, s.first_stage.size());
  try {
    s.reranked = Rerank(s.rewritten_query, s.first_stage, passages(),
                        *components_.reranker, depth, s.index);
  } catch (const RerankError &) {
    if (!config_.adapter_fallback) throw;
    s.reranked = s.first_stage.prefix(depth);
  }
  out.timings.rerank_ms = watch.ElapsedMs();

  watch = Stopwatch();
  s.query_mentions = LinkText(s.rewritten_query);
  s.query_entities = EntitiesOf(s.query_mentions);
  s.entity_history = conversation.query_entity_history();
  s.entity_history.insert(s.query_entities.begin(), s.query_entities.end());
  const std::size_t pool =
      std::min(config_.graph.candidate_pool, s.reranked.size());
  for (std::size_t i = 0; i < pool; ++i) {
    CandidatePassage c;
    c.id = s.reranked[i].id;
    c.text = passages().Text(c.id);
    c.score = s.reranked[i].score;
    c.mentions = LinkText(c.text);
    c.entities = EntitiesOf(c.mentions);
    s.candidates.push_back(std::move(c));
  }
  out.timings.link_ms = watch.ElapsedMs();

  watch = Stopwatch();
  out.answer = Answer(s, overrides);
  out.timings.answer_ms = watch.ElapsedMs();
  return out;
}

AnswerOutcome Pipeline::Answer(const TurnState &state,
                               const AnswerOverrides &overrides) const {
  GraphParams params = config_.graph;
  GenerationConfig generation = config_.generation;
  AnswerOutcome out;
  out.method = overrides.method.value_or(config_.method);
  if (overrides.gamma) params.gamma = *overrides.gamma;
  if (overrides.min_length) generation.min_length = *overrides.min_length;
  if (overrides.include_query) generation.include_query = *overrides.include_query;
  params.Validate();
  generation.Validate();
  out.gamma = params.gamma;
  out.min_length = generation.min_length;
  out.include_query = generation.include_query;

  if (state.candidates.empty()) return out;

  out.selection = SelectPassages(state.candidates, out.method,
                                 state.entity_history, kb(), params,
                                 generation.n_passages);
  std::vector<std::string> texts;
  for (std::size_t i : out.selection.selected) {
    out.selected_ids.push_back(state.candidates[i].id);
    texts.push_back(state.candidates[i].text);
  }
  out.summarizer_input =
      BuildSummarizerInput(texts, generation, state.rewritten_query);
  out.answer = GenerateAnswer(out.summarizer_input, generation,
                              *components_.summarizer,
                              config_.adapter_fallback);
  if (out.selection.graph) {
    out.graph = ExportGraph(out.selection.graph->graph,
                            out.selection.graph->ranks, config_.top_fraction);
  }
  return out;
}

Turn Pipeline::MakeTurn(const TurnOutcome &outcome) {
  Turn t;
  t.index = outcome.state.index;
  t.raw_query = outcome.state.raw_query;
  t.prompt = outcome.state.prompt;
  t.rewritten_query = outcome.state.rewritten_query;
  t.first_stage = outcome.state.first_stage;
  t.reranked = outcome.state.reranked;
  t.query_entities = outcome.state.query_entities;
  t.selected_passages = outcome.answer.selected_ids;
  t.answer = outcome.answer.answer;
  return t;
}

RunRecord Pipeline::MakeRunRecord(const std::string &topic,
                                  const TurnOutcome &outcome) const {
  const TurnState &s = outcome.state;
  RunRecord r;
  r.topic = topic;
  r.turn = s.index;
  r.raw_query = s.raw_query;
  r.prompt = s.prompt;
  r.rewritten_query = s.rewritten_query;
  // Re-ranked head followed by the rest of the first-stage ranking.
  std::set<std::string> seen;
  for (const auto &e : s.reranked) {
    r.ranked.push_back(e.id);
    seen.insert(e.id);
  }
  for (const auto &e : s.first_stage) {
    if (!seen.count(e.id)) r.ranked.push_back(e.id);
  }
  r.method = std::string(ScoringMethodName(outcome.answer.method));
  r.selected = outcome.answer.selected_ids;
  r.answer = outcome.answer.answer;
  r.answer_words = CountWords(r.answer);
  return r;
}

std::vector<SalientEntity> Pipeline::TopEntities(const AnswerOutcome &answer,
                                                 std::size_t count) {
  std::vector<SalientEntity> out;
  if (!answer.graph) return out;
  for (const auto &node : answer.graph->nodes) {
    if (out.size() == count) break;
    out.push_back({node.id, node.rank});
  }
  return out;
}

}  // namespace convsearch
