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

// JSON-over-HTTP clients for the rewriter, re-ranker and summarizer
// services. One POST per call; every failure surfaces as AdapterError.
//
//   rewriter:   {"prompt": s}                        -> {"text": s}
//   reranker:   {"pairs": [[q, p], ...],
//                "inputs": ["[CLS] q [SEP] p", ...]} -> {"scores": [x, ...]}
//   summarizer: {"text", "min_length", "max_length", "beams",
//                "no_repeat_ngram", "early_stopping"} -> {"summary": s}

#ifndef CONVSEARCH_HTTP_ADAPTERS_H_
#define CONVSEARCH_HTTP_ADAPTERS_H_

#include <chrono>
#include <string>

#include "convsearch/answer_gen.h"
#include "convsearch/conversation.h"

namespace convsearch {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // begins with '/'
};

// Splits "http://host:port/path". Throws InvalidArgument when malformed.
Endpoint ParseEndpoint(const std::string &url);

// POSTs a body and returns the response body. Throws AdapterError.
std::string HttpPost(const std::string &url, const std::string &body,
                     const std::string &content_type,
                     std::chrono::milliseconds timeout);

class HttpRewriter : public Rewriter {
 public:
  explicit HttpRewriter(std::string url,
                        std::chrono::milliseconds timeout =
                            std::chrono::milliseconds(30000))
      : url_(std::move(url)), timeout_(timeout) {}

  std::string Rewrite(const std::string &prompt) const override;

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
};

class HttpReranker : public Reranker {
 public:
  explicit HttpReranker(std::string url,
                        std::chrono::milliseconds timeout =
                            std::chrono::milliseconds(30000))
      : url_(std::move(url)), timeout_(timeout) {}

  std::vector<double> Score(std::span<const RerankPair> pairs) const override;

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
};

class HttpSummarizer : public Summarizer {
 public:
  explicit HttpSummarizer(std::string url,
                          std::chrono::milliseconds timeout =
                              std::chrono::milliseconds(60000))
      : url_(std::move(url)), timeout_(timeout) {}

  std::string Summarize(const std::string &input,
                        const GenerationConfig &config) const override;

  // Request body sent for `input`; exposed for fixture replay.
  static std::string RequestBody(const std::string &input,
                                 const GenerationConfig &config);

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
};

}  // namespace convsearch

#endif  // CONVSEARCH_HTTP_ADAPTERS_H_
