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

#ifndef CONVSEARCH_RANKED_LIST_H_
#define CONVSEARCH_RANKED_LIST_H_

#include <cstddef>
#include <string>
#include <vector>

namespace convsearch {

struct ScoredPassage {
  std::string id;
  double score = 0.0;

  bool operator==(const ScoredPassage &) const = default;
};

// Scored passage candidates, best first. Scores are non-increasing and ids
// are distinct.
class RankedList {
 public:
  RankedList() = default;

  // Throws InvalidArgument if the entries violate the ordering or
  // uniqueness invariant.
  explicit RankedList(std::vector<ScoredPassage> entries);

  const std::vector<ScoredPassage> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const ScoredPassage &operator[](std::size_t i) const { return entries_[i]; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::vector<std::string> ids() const;

  // First n entries (or all of them when n exceeds the size).
  RankedList prefix(std::size_t n) const;

  bool operator==(const RankedList &) const = default;

 private:
  std::vector<ScoredPassage> entries_;
};

}  // namespace convsearch

#endif  // CONVSEARCH_RANKED_LIST_H_
