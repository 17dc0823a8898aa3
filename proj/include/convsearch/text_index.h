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

// Tokenization, the inverted index, and Dirichlet-smoothed query likelihood
// retrieval (LMD).

#ifndef CONVSEARCH_TEXT_INDEX_H_
#define CONVSEARCH_TEXT_INDEX_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "convsearch/ranked_list.h"
#include "convsearch/stemmer.h"

namespace convsearch {

inline constexpr std::string_view kTokenizerVersion = "alnum-lower/1";

struct PassageRecord {
  std::string id;
  std::string text;
  std::string source;
};

struct TokenSpan {
  std::string text;   // lowercased
  std::size_t begin;  // byte offsets into the original text
  std::size_t end;
};

// Lowercases ASCII letters and splits on every run of ASCII characters that
// are not letters or digits. Bytes >= 0x80 are kept inside tokens so UTF-8
// words are never split.
std::vector<std::string> Tokenize(std::string_view text);
std::vector<TokenSpan> TokenizeWithSpans(std::string_view text);

// Number of whitespace-delimited words.
std::size_t CountWords(std::string_view text);

// Whitespace-delimited words, in order.
std::vector<std::string> SplitWords(std::string_view text);

// Tokenize followed by stemming of every token.
std::vector<std::string> AnalyzeText(std::string_view text,
                                     const Stemmer &stemmer = DefaultStemmer());

struct Posting {
  std::uint32_t doc;  // dense document number, see InvertedIndex::passage_id
  std::uint32_t tf;

  bool operator==(const Posting &) const = default;
};

struct RetrievalParams {
  double mu = 2500.0;
  std::size_t k = 1000;
  std::size_t rerank_depth = 10;

  // Throws InvalidArgument unless mu > 0 and 0 < rerank_depth <= k.
  void Validate() const;
};

// Immutable after construction. Documents are numbered densely in ascending
// passage-id order, so posting lists sorted by doc number are also sorted by
// passage id.
class InvertedIndex {
 public:
  InvertedIndex() = default;

  std::size_t passage_count() const { return ids_.size(); }
  std::uint64_t total_tokens() const { return total_tokens_; }
  std::size_t vocabulary_size() const { return postings_.size(); }

  const std::string &passage_id(std::uint32_t doc) const { return ids_[doc]; }
  // Returns false if the id is unknown.
  bool FindDoc(std::string_view id, std::uint32_t *doc) const;

  std::uint32_t doc_length(std::uint32_t doc) const { return doc_length_[doc]; }
  std::uint64_t collection_frequency(std::string_view term) const;
  std::span<const Posting> postings(std::string_view term) const;
  std::uint32_t term_frequency(std::string_view term, std::uint32_t doc) const;

  // Terms in lexicographic order.
  std::vector<std::string> Terms() const;

  const std::string &stemmer_version() const { return stemmer_version_; }

  // Stable 64-bit FNV-1a digest over ids, lengths and postings.
  std::uint64_t ContentHash() const;

 private:
  friend InvertedIndex BuildIndex(std::span<const PassageRecord>,
                                  const Stemmer &);
  friend class IndexStore;

  struct TermEntry {
    std::uint64_t cf = 0;
    std::vector<Posting> postings;
  };

  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::uint32_t> doc_by_id_;
  std::vector<std::uint32_t> doc_length_;
  std::unordered_map<std::string, TermEntry> postings_;
  std::uint64_t total_tokens_ = 0;
  std::string stemmer_version_;
};

// Tokenizes and stems every passage. Throws InvalidArgument naming the
// offending id on duplicates.
InvertedIndex BuildIndex(std::span<const PassageRecord> corpus,
                         const Stemmer &stemmer = DefaultStemmer());

// Sum over query tokens of log((tf + mu * cf / |C|) / (|d| + mu)). Tokens
// unseen in the collection use cf / |C| = 1 / (|C| + 1) in place of zero.
// Query tokens must already be analyzed. Throws NotFound for unknown ids.
double LmdScore(std::span<const std::string> query_tokens,
                std::string_view passage_id, const InvertedIndex &index,
                double mu);

// Top params.k passages by LMD score, ties broken by ascending passage id.
// An empty analyzed query yields an empty list.
RankedList Retrieve(std::string_view query_text, const InvertedIndex &index,
                    const RetrievalParams &params,
                    const Stemmer &stemmer = DefaultStemmer());

}  // namespace convsearch

#endif  // CONVSEARCH_TEXT_INDEX_H_
