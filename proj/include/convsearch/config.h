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

#ifndef CONVSEARCH_CONFIG_H_
#define CONVSEARCH_CONFIG_H_

#include <filesystem>
#include <string>

#include "convsearch/answer_gen.h"
#include "convsearch/knowledge_graph.h"
#include "convsearch/text_index.h"
#include "json.hpp"

namespace convsearch {

inline constexpr int kConfigSchemaVersion = 1;

enum class LinkerKind { kGazetteer, kSpotlight };

// Everything needed to open a pipeline. An empty adapter endpoint selects
// the built-in stub for that stage.
struct PipelineConfig {
  std::filesystem::path index;
  std::filesystem::path kb;

  LinkerKind linker = LinkerKind::kGazetteer;
  std::filesystem::path gazetteer;
  std::string spotlight_endpoint;
  double link_confidence = kDefaultLinkThreshold;
  // Treat texts as entity-free when the linker fails instead of failing
  // the turn.
  bool link_failure_entity_free = false;

  std::string rewriter_endpoint;
  std::string reranker_endpoint;
  std::string summarizer_endpoint;
  // On adapter failure: identity rewrite, first-stage order, stub summary.
  bool adapter_fallback = false;

  RetrievalParams retrieval;
  GraphParams graph;
  GenerationConfig generation;
  ScoringMethod method = ScoringMethod::kEntityGraph;
  double top_fraction = 0.5;

  // Range checks, endpoint syntax and (when check_paths) file existence.
  // Throws InvalidArgument.
  void Validate(bool check_paths = true) const;
};

// Flat JSON object with "schema_version". Keys: index, kb, linker
// ("gazetteer" | "spotlight"), gazetteer, spotlight_endpoint,
// link_confidence, link_failure ("error" | "entity-free"),
// rewriter_endpoint, reranker_endpoint, summarizer_endpoint,
// adapter_fallback, mu, k, rerank_depth, gamma, tau, alpha, pagerank_tol,
// pagerank_max_iter, candidate_pool, relatedness_polarity ("similarity" |
// "raw"), salience_normalization ("mean" | "degree"), min_length,
// max_length, beams, no_repeat_ngram, early_stopping, include_query,
// n_passages, method ("O" | "ER" | "EG"), top_fraction.
nlohmann::ordered_json ConfigToJson(const PipelineConfig &config);

// Applies the keys present in `overrides` (schema_version optional here).
// Relative paths resolve against base_dir. Throws InvalidArgument on unknown
// keys, wrong types or an unsupported schema version.
void ApplyConfigOverrides(PipelineConfig &config,
                          const nlohmann::json &overrides,
                          const std::filesystem::path &base_dir = {});

// Reads a config file; schema_version is mandatory.
PipelineConfig LoadConfig(const std::filesystem::path &path);

}  // namespace convsearch

#endif  // CONVSEARCH_CONFIG_H_
