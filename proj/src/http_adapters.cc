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

#include "convsearch/http_adapters.h"

#include <algorithm>
#include <cstdio>

#include "convsearch/entity_linking.h"
#include "convsearch/error.h"
#include "httplib.h"
#include "json.hpp"

namespace convsearch {
namespace {

using ojson = nlohmann::ordered_json;

std::unique_ptr<httplib::Client> MakeClient(const Endpoint &ep,
                                            std::chrono::milliseconds timeout) {
  auto client = std::make_unique<httplib::Client>(ep.base);
  if (!client->is_valid()) {
    throw AdapterError(AdapterError::Kind::kUnreachable,
                       "invalid endpoint " + ep.base);
  }
  client->set_connection_timeout(timeout);
  client->set_read_timeout(timeout);
  client->set_write_timeout(timeout);
  return client;
}

std::string CheckResponse(const httplib::Result &res, const std::string &url) {
  if (!res) {
    throw AdapterError(AdapterError::Kind::kUnreachable,
                       url + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw AdapterError(AdapterError::Kind::kHttpStatus,
                       url + ": HTTP " + std::to_string(res->status));
  }
  return res->body;
}

nlohmann::json ParseBody(const std::string &body, const std::string &url) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error &e) {
    throw AdapterError(AdapterError::Kind::kMalformedPayload,
                       url + ": invalid JSON: " + e.what());
  }
}

AdapterError Malformed(const std::string &url, const std::string &what) {
  return AdapterError(AdapterError::Kind::kMalformedPayload, url + ": " + what);
}

}  // namespace

Endpoint ParseEndpoint(const std::string &url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos || scheme == 0) {
    throw InvalidArgument("endpoint '" + url + "' lacks a scheme");
  }
  const std::string proto = url.substr(0, scheme);
  if (proto != "http" && proto != "https") {
    throw InvalidArgument("endpoint '" + url + "' must use http or https");
  }
  const std::size_t slash = url.find('/', scheme + 3);
  Endpoint ep;
  ep.base = url.substr(0, slash);
  ep.path = slash == std::string::npos ? "/" : url.substr(slash);
  if (ep.base.size() <= scheme + 3) {
    throw InvalidArgument("endpoint '" + url + "' lacks a host");
  }
  return ep;
}

std::string HttpPost(const std::string &url, const std::string &body,
                     const std::string &content_type,
                     std::chrono::milliseconds timeout) {
  Endpoint ep;
  try {
    ep = ParseEndpoint(url);
  } catch (const InvalidArgument &e) {
    throw AdapterError(AdapterError::Kind::kUnreachable, e.what());
  }
  auto client = MakeClient(ep, timeout);
  return CheckResponse(client->Post(ep.path, body, content_type), url);
}

std::string HttpRewriter::Rewrite(const std::string &prompt) const {
  ojson req;
  req["prompt"] = prompt;
  const auto res = ParseBody(
      HttpPost(url_, req.dump(), "application/json", timeout_), url_);
  if (!res.is_object() || !res.contains("text") || !res["text"].is_string()) {
    throw Malformed(url_, "response lacks string field 'text'");
  }
  std::string text = res["text"].get<std::string>();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Malformed(url_, "rewriter returned an empty query");
  }
  return text;
}

std::vector<double> HttpReranker::Score(
    std::span<const RerankPair> pairs) const {
  ojson req;
  req["pairs"] = ojson::array();
  req["inputs"] = ojson::array();
  for (const auto &p : pairs) {
    req["pairs"].push_back(ojson::array({p.query, p.passage}));
    req["inputs"].push_back(BuildRerankInput(p.query, p.passage));
  }
  const auto res = ParseBody(
      HttpPost(url_, req.dump(), "application/json", timeout_), url_);
  if (!res.is_object() || !res.contains("scores") ||
      !res["scores"].is_array()) {
    throw Malformed(url_, "response lacks array field 'scores'");
  }
  std::vector<double> scores;
  for (const auto &s : res["scores"]) {
    if (!s.is_number()) throw Malformed(url_, "non-numeric score");
    scores.push_back(s.get<double>());
  }
  if (scores.size() != pairs.size()) {
    throw Malformed(url_, "expected " + std::to_string(pairs.size()) +
                              " scores, got " + std::to_string(scores.size()));
  }
  return scores;
}

std::string HttpSummarizer::RequestBody(const std::string &input,
                                        const GenerationConfig &config) {
  ojson req;
  req["text"] = input;
  req["min_length"] = config.min_length;
  req["max_length"] =
      std::max(config.EffectiveMaxLength(input), config.min_length);
  req["beams"] = config.beams;
  req["no_repeat_ngram"] = config.no_repeat_ngram;
  req["early_stopping"] = config.early_stopping;
  return req.dump();
}

std::string HttpSummarizer::Summarize(const std::string &input,
                                      const GenerationConfig &config) const {
  const auto res = ParseBody(
      HttpPost(url_, RequestBody(input, config), "application/json", timeout_),
      url_);
  if (!res.is_object() || !res.contains("summary") ||
      !res["summary"].is_string()) {
    throw Malformed(url_, "response lacks string field 'summary'");
  }
  return res["summary"].get<std::string>();
}

std::vector<EntityMention> SpotlightAnnotate(std::string_view text,
                                             double confidence,
                                             const std::string &endpoint,
                                             std::chrono::milliseconds timeout) {
  Endpoint ep;
  try {
    ep = ParseEndpoint(endpoint);
  } catch (const InvalidArgument &e) {
    throw AdapterError(AdapterError::Kind::kUnreachable, e.what());
  }
  auto client = MakeClient(ep, timeout);
  char conf[32];
  std::snprintf(conf, sizeof(conf), "%g", confidence);
  httplib::Params form{{"text", std::string(text)}, {"confidence", conf}};
  httplib::Headers headers{{"Accept", "application/json"}};
  const std::string body =
      CheckResponse(client->Post(ep.path, headers, form), endpoint);
  return ParseSpotlightResponse(body, text);
}

}  // namespace convsearch
