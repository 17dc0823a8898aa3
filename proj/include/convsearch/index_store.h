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

#ifndef CONVSEARCH_INDEX_STORE_H_
#define CONVSEARCH_INDEX_STORE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "convsearch/text_index.h"

namespace convsearch {

// Id -> passage lookup over an owned corpus.
class PassageStore {
 public:
  PassageStore() = default;
  explicit PassageStore(std::vector<PassageRecord> passages);

  const PassageRecord *Find(std::string_view id) const;
  // Throws NotFound.
  const std::string &Text(std::string_view id) const;

  const std::vector<PassageRecord> &passages() const { return passages_; }
  std::size_t size() const { return passages_.size(); }

 private:
  std::vector<PassageRecord> passages_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// Newline-delimited JSON, one {"id", "text", "source"} object per line.
// Blank lines are skipped. Throws ParseError with the line number.
std::vector<PassageRecord> ReadCorpus(const std::filesystem::path &path);

struct IndexManifest {
  int format_version = 0;
  std::string tokenizer;
  std::string stemmer;
  std::uint64_t passage_count = 0;
  std::uint64_t total_tokens = 0;
  std::uint64_t vocabulary_size = 0;
  std::string content_hash;  // 16 hex digits

  bool operator==(const IndexManifest &) const = default;
};

inline constexpr int kIndexFormatVersion = 1;

// An index directory holds manifest.json, passages.jsonl, doclen.tsv and
// postings.tsv.
class IndexStore {
 public:
  // Writes (or replaces) the directory and returns the manifest written.
  static IndexManifest Write(const std::filesystem::path &dir,
                             const std::vector<PassageRecord> &passages,
                             const InvertedIndex &index);

  static IndexManifest ReadManifest(const std::filesystem::path &dir);

  // Loads and cross-checks the manifest against the stored postings. Throws
  // ParseError on corrupt files and Error on version or hash mismatch.
  static InvertedIndex Load(const std::filesystem::path &dir,
                            PassageStore *passages);

  static IndexManifest MakeManifest(const InvertedIndex &index);
};

}  // namespace convsearch

#endif  // CONVSEARCH_INDEX_STORE_H_
