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

#include "convsearch/config.h"

#include <fstream>

#include "convsearch/error.h"
#include "convsearch/http_adapters.h"

namespace convsearch {
namespace fs = std::filesystem;

namespace {

template <typename T>
T Get(const nlohmann::json &v, const std::string &key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception &) {
    throw InvalidArgument("config: key '" + key + "' has the wrong type");
  }
}

fs::path Resolve(const std::string &p, const fs::path &base) {
  if (p.empty()) return {};
  fs::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

void CheckEndpoint(const std::string &url, const char *what) {
  if (url.empty()) return;
  try {
    ParseEndpoint(url);
  } catch (const InvalidArgument &e) {
    throw InvalidArgument(std::string("config: ") + what + ": " + e.what());
  }
}

void CheckFile(const fs::path &p, const char *what) {
  if (p.empty()) {
    throw InvalidArgument(std::string("config: ") + what + " path is required");
  }
  if (!fs::exists(p)) {
    throw InvalidArgument(std::string("config: ") + what + " " + p.string() +
                          " does not exist");
  }
}

}  // namespace

void PipelineConfig::Validate(bool check_paths) const {
  retrieval.Validate();
  graph.Validate();
  generation.Validate();
  if (!(link_confidence >= 0.0 && link_confidence <= 1.0)) {
    throw InvalidArgument("config: link_confidence must lie in [0, 1]");
  }
  if (!(top_fraction >= 0.0 && top_fraction <= 1.0)) {
    throw InvalidArgument("config: top_fraction must lie in [0, 1]");
  }
  CheckEndpoint(rewriter_endpoint, "rewriter_endpoint");
  CheckEndpoint(reranker_endpoint, "reranker_endpoint");
  CheckEndpoint(summarizer_endpoint, "summarizer_endpoint");
  CheckEndpoint(spotlight_endpoint, "spotlight_endpoint");
  if (linker == LinkerKind::kSpotlight && spotlight_endpoint.empty()) {
    throw InvalidArgument("config: spotlight linker needs spotlight_endpoint");
  }
  if (check_paths) {
    CheckFile(index, "index");
    CheckFile(kb, "kb");
    if (linker == LinkerKind::kGazetteer) CheckFile(gazetteer, "gazetteer");
  }
}

nlohmann::ordered_json ConfigToJson(const PipelineConfig &c) {
  nlohmann::ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["index"] = c.index.string();
  j["kb"] = c.kb.string();
  j["linker"] = c.linker == LinkerKind::kSpotlight ? "spotlight" : "gazetteer";
  j["gazetteer"] = c.gazetteer.string();
  j["spotlight_endpoint"] = c.spotlight_endpoint;
  j["link_confidence"] = c.link_confidence;
  j["link_failure"] = c.link_failure_entity_free ? "entity-free" : "error";
  j["rewriter_endpoint"] = c.rewriter_endpoint;
  j["reranker_endpoint"] = c.reranker_endpoint;
  j["summarizer_endpoint"] = c.summarizer_endpoint;
  j["adapter_fallback"] = c.adapter_fallback;
  j["mu"] = c.retrieval.mu;
  j["k"] = c.retrieval.k;
  j["rerank_depth"] = c.retrieval.rerank_depth;
  j["gamma"] = c.graph.gamma;
  j["tau"] = c.graph.tau;
  j["alpha"] = c.graph.alpha;
  j["pagerank_tol"] = c.graph.pagerank_tol;
  j["pagerank_max_iter"] = c.graph.pagerank_max_iter;
  j["candidate_pool"] = c.graph.candidate_pool;
  j["relatedness_polarity"] =
      c.graph.polarity == RelatednessPolarity::kRaw ? "raw" : "similarity";
  j["salience_normalization"] =
      c.graph.normalization == SalienceNormalization::kDegree ? "degree"
                                                              : "mean";
  j["min_length"] = c.generation.min_length;
  j["max_length"] = c.generation.max_length;
  j["beams"] = c.generation.beams;
  j["no_repeat_ngram"] = c.generation.no_repeat_ngram;
  j["early_stopping"] = c.generation.early_stopping;
  j["include_query"] = c.generation.include_query;
  j["n_passages"] = c.generation.n_passages;
  j["method"] = std::string(ScoringMethodName(c.method));
  j["top_fraction"] = c.top_fraction;
  return j;
}

void ApplyConfigOverrides(PipelineConfig &c, const nlohmann::json &o,
                          const fs::path &base_dir) {
  if (!o.is_object()) throw InvalidArgument("config: expected a JSON object");
  for (const auto &[key, v] : o.items()) {
    if (key == "schema_version") {
      if (Get<int>(v, key) != kConfigSchemaVersion) {
        throw InvalidArgument("config: unsupported schema_version " +
                              v.dump());
      }
    } else if (key == "index") {
      c.index = Resolve(Get<std::string>(v, key), base_dir);
    } else if (key == "kb") {
      c.kb = Resolve(Get<std::string>(v, key), base_dir);
    } else if (key == "linker") {
      const auto s = Get<std::string>(v, key);
      if (s == "gazetteer") {
        c.linker = LinkerKind::kGazetteer;
      } else if (s == "spotlight") {
        c.linker = LinkerKind::kSpotlight;
      } else {
        throw InvalidArgument("config: unknown linker '" + s + "'");
      }
    } else if (key == "gazetteer") {
      c.gazetteer = Resolve(Get<std::string>(v, key), base_dir);
    } else if (key == "spotlight_endpoint") {
      c.spotlight_endpoint = Get<std::string>(v, key);
    } else if (key == "link_confidence") {
      c.link_confidence = Get<double>(v, key);
    } else if (key == "link_failure") {
      const auto s = Get<std::string>(v, key);
      if (s != "error" && s != "entity-free") {
        throw InvalidArgument("config: link_failure must be error|entity-free");
      }
      c.link_failure_entity_free = s == "entity-free";
    } else if (key == "rewriter_endpoint") {
      c.rewriter_endpoint = Get<std::string>(v, key);
    } else if (key == "reranker_endpoint") {
      c.reranker_endpoint = Get<std::string>(v, key);
    } else if (key == "summarizer_endpoint") {
      c.summarizer_endpoint = Get<std::string>(v, key);
    } else if (key == "adapter_fallback") {
      c.adapter_fallback = Get<bool>(v, key);
    } else if (key == "mu") {
      c.retrieval.mu = Get<double>(v, key);
    } else if (key == "k") {
      c.retrieval.k = Get<std::size_t>(v, key);
    } else if (key == "rerank_depth") {
      c.retrieval.rerank_depth = Get<std::size_t>(v, key);
    } else if (key == "gamma") {
      c.graph.gamma = Get<double>(v, key);
    } else if (key == "tau") {
      c.graph.tau = Get<double>(v, key);
    } else if (key == "alpha") {
      c.graph.alpha = Get<double>(v, key);
    } else if (key == "pagerank_tol") {
      c.graph.pagerank_tol = Get<double>(v, key);
    } else if (key == "pagerank_max_iter") {
      c.graph.pagerank_max_iter = Get<int>(v, key);
    } else if (key == "candidate_pool") {
      c.graph.candidate_pool = Get<std::size_t>(v, key);
    } else if (key == "relatedness_polarity") {
      const auto s = Get<std::string>(v, key);
      if (s == "similarity") {
        c.graph.polarity = RelatednessPolarity::kSimilarity;
      } else if (s == "raw") {
        c.graph.polarity = RelatednessPolarity::kRaw;
      } else {
        throw InvalidArgument("config: relatedness_polarity must be "
                              "similarity|raw");
      }
    } else if (key == "salience_normalization") {
      const auto s = Get<std::string>(v, key);
      if (s == "mean") {
        c.graph.normalization = SalienceNormalization::kMean;
      } else if (s == "degree") {
        c.graph.normalization = SalienceNormalization::kDegree;
      } else {
        throw InvalidArgument("config: salience_normalization must be "
                              "mean|degree");
      }
    } else if (key == "min_length") {
      c.generation.min_length = Get<int>(v, key);
    } else if (key == "max_length") {
      c.generation.max_length = Get<int>(v, key);
    } else if (key == "beams") {
      c.generation.beams = Get<int>(v, key);
    } else if (key == "no_repeat_ngram") {
      c.generation.no_repeat_ngram = Get<int>(v, key);
    } else if (key == "early_stopping") {
      c.generation.early_stopping = Get<bool>(v, key);
    } else if (key == "include_query") {
      c.generation.include_query = Get<bool>(v, key);
    } else if (key == "n_passages") {
      c.generation.n_passages = Get<std::size_t>(v, key);
    } else if (key == "method") {
      c.method = ParseScoringMethod(Get<std::string>(v, key));
    } else if (key == "top_fraction") {
      c.top_fraction = Get<double>(v, key);
    } else {
      throw InvalidArgument("config: unknown key '" + key + "'");
    }
  }
}

PipelineConfig LoadConfig(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(path.string(), 0, e.what());
  }
  if (!j.is_object() || !j.contains("schema_version")) {
    throw InvalidArgument("config " + path.string() +
                          ": schema_version is required");
  }
  PipelineConfig config;
  ApplyConfigOverrides(config, j, path.parent_path());
  return config;
}

}  // namespace convsearch
