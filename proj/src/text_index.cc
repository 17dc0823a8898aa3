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

#include "convsearch/text_index.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "convsearch/error.h"

namespace convsearch {
namespace {

bool IsTokenByte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

char LowerAscii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Collection probability of a term, floored for terms the collection has
// never seen.
double BackgroundProbability(std::uint64_t cf, std::uint64_t total_tokens) {
  if (cf == 0) return 1.0 / (static_cast<double>(total_tokens) + 1.0);
  return static_cast<double>(cf) / static_cast<double>(total_tokens);
}

double TermLogLikelihood(std::uint32_t tf, double background,
                         std::uint32_t doc_length, double mu) {
  return std::log((tf + mu * background) / (doc_length + mu));
}

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void HashBytes(std::uint64_t &h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
}

void HashU64(std::uint64_t &h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
}

}  // namespace

std::vector<TokenSpan> TokenizeWithSpans(std::string_view text) {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !IsTokenByte(text[i])) ++i;
    const std::size_t begin = i;
    std::string token;
    while (i < text.size() && IsTokenByte(text[i])) {
      token.push_back(LowerAscii(text[i]));
      ++i;
    }
    if (!token.empty()) out.push_back({std::move(token), begin, i});
  }
  return out;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto &span : TokenizeWithSpans(text)) out.push_back(std::move(span.text));
  return out;
}

std::size_t CountWords(std::string_view text) {
  return SplitWords(text).size();
}

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  auto space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && space(text[i])) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !space(text[i])) ++i;
    if (i > begin) words.emplace_back(text.substr(begin, i - begin));
  }
  return words;
}

std::vector<std::string> AnalyzeText(std::string_view text,
                                     const Stemmer &stemmer) {
  std::vector<std::string> tokens = Tokenize(text);
  for (auto &t : tokens) t = stemmer.Stem(t);
  return tokens;
}

void RetrievalParams::Validate() const {
  if (!(mu > 0.0)) throw InvalidArgument("retrieval: mu must be positive");
  if (rerank_depth == 0 || rerank_depth > k) {
    throw InvalidArgument("retrieval: require 0 < rerank_depth <= k");
  }
}

bool InvertedIndex::FindDoc(std::string_view id, std::uint32_t *doc) const {
  auto it = doc_by_id_.find(std::string(id));
  if (it == doc_by_id_.end()) return false;
  *doc = it->second;
  return true;
}

std::uint64_t InvertedIndex::collection_frequency(std::string_view term) const {
  auto it = postings_.find(std::string(term));
  return it == postings_.end() ? 0 : it->second.cf;
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
  auto it = postings_.find(std::string(term));
  if (it == postings_.end()) return {};
  return it->second.postings;
}

std::uint32_t InvertedIndex::term_frequency(std::string_view term,
                                            std::uint32_t doc) const {
  auto list = postings(term);
  auto it = std::lower_bound(
      list.begin(), list.end(), doc,
      [](const Posting &p, std::uint32_t d) { return p.doc < d; });
  return (it != list.end() && it->doc == doc) ? it->tf : 0;
}

std::vector<std::string> InvertedIndex::Terms() const {
  std::vector<std::string> terms;
  terms.reserve(postings_.size());
  for (const auto &[term, entry] : postings_) terms.push_back(term);
  std::sort(terms.begin(), terms.end());
  return terms;
}

std::uint64_t InvertedIndex::ContentHash() const {
  std::uint64_t h = kFnvOffset;
  HashU64(h, ids_.size());
  for (std::size_t d = 0; d < ids_.size(); ++d) {
    HashBytes(h, ids_[d]);
    HashU64(h, doc_length_[d]);
  }
  for (const auto &term : Terms()) {
    const TermEntry &entry = postings_.at(term);
    HashBytes(h, term);
    HashU64(h, entry.postings.size());
    for (const Posting &p : entry.postings) {
      HashU64(h, p.doc);
      HashU64(h, p.tf);
    }
  }
  return h;
}

InvertedIndex BuildIndex(std::span<const PassageRecord> corpus,
                         const Stemmer &stemmer) {
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus[a].id < corpus[b].id;
  });

  InvertedIndex index;
  index.stemmer_version_ = stemmer.Version();
  index.ids_.reserve(corpus.size());
  index.doc_length_.reserve(corpus.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const PassageRecord &record = corpus[order[rank]];
    if (rank > 0 && record.id == index.ids_.back()) {
      throw InvalidArgument("index: duplicate passage id " + record.id);
    }
    const auto doc = static_cast<std::uint32_t>(rank);
    index.ids_.push_back(record.id);
    index.doc_by_id_.emplace(record.id, doc);

    std::map<std::string, std::uint32_t> counts;
    std::uint32_t length = 0;
    for (const auto &token : AnalyzeText(record.text, stemmer)) {
      ++counts[token];
      ++length;
    }
    index.doc_length_.push_back(length);
    index.total_tokens_ += length;
    for (const auto &[term, tf] : counts) {
      auto &entry = index.postings_[term];
      entry.cf += tf;
      entry.postings.push_back({doc, tf});
    }
  }
  return index;
}

double LmdScore(std::span<const std::string> query_tokens,
                std::string_view passage_id, const InvertedIndex &index,
                double mu) {
  std::uint32_t doc = 0;
  if (!index.FindDoc(passage_id, &doc)) {
    throw NotFound("index: unknown passage id " + std::string(passage_id));
  }
  double score = 0.0;
  for (const auto &token : query_tokens) {
    const double background = BackgroundProbability(
        index.collection_frequency(token), index.total_tokens());
    score += TermLogLikelihood(index.term_frequency(token, doc), background,
                               index.doc_length(doc), mu);
  }
  return score;
}

RankedList Retrieve(std::string_view query_text, const InvertedIndex &index,
                    const RetrievalParams &params, const Stemmer &stemmer) {
  const std::vector<std::string> query = AnalyzeText(query_text, stemmer);
  const std::size_t n = index.passage_count();
  if (query.empty() || n == 0 || params.k == 0) return {};

  // Walk each posting list with a cursor while documents are visited in
  // ascending order; the per-document sum keeps query-token order so the
  // result is bit-identical to LmdScore.
  struct QueryTerm {
    std::span<const Posting> postings;
    double background;
    std::size_t cursor = 0;
  };
  std::vector<QueryTerm> terms;
  terms.reserve(query.size());
  for (const auto &token : query) {
    terms.push_back({index.postings(token),
                     BackgroundProbability(index.collection_frequency(token),
                                           index.total_tokens())});
  }

  std::vector<double> scores(n, 0.0);
  for (std::uint32_t doc = 0; doc < n; ++doc) {
    double score = 0.0;
    for (auto &term : terms) {
      std::uint32_t tf = 0;
      if (term.cursor < term.postings.size() &&
          term.postings[term.cursor].doc == doc) {
        tf = term.postings[term.cursor].tf;
        ++term.cursor;
      }
      score += TermLogLikelihood(tf, term.background, index.doc_length(doc),
                                 params.mu);
    }
    scores[doc] = score;
  }

  std::vector<std::uint32_t> docs(n);
  std::iota(docs.begin(), docs.end(), 0u);
  const std::size_t k = std::min(params.k, n);
  // Doc numbers follow ascending passage id, so they break ties directly.
  std::partial_sort(docs.begin(), docs.begin() + k, docs.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  std::vector<ScoredPassage> entries;
  entries.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    entries.push_back({index.passage_id(docs[i]), scores[docs[i]]});
  }
  return RankedList(std::move(entries));
}

}  // namespace convsearch
