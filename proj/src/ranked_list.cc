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

#include "convsearch/ranked_list.h"

#include <unordered_set>

#include "convsearch/error.h"

namespace convsearch {

RankedList::RankedList(std::vector<ScoredPassage> entries)
    : entries_(std::move(entries)) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!seen.insert(entries_[i].id).second) {
      throw InvalidArgument("ranked list: duplicate passage id " +
                            entries_[i].id);
    }
    if (i > 0 && entries_[i].score > entries_[i - 1].score) {
      throw InvalidArgument("ranked list: scores must be non-increasing at " +
                            entries_[i].id);
    }
  }
}

std::vector<std::string> RankedList::ids() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto &e : entries_) out.push_back(e.id);
  return out;
}

RankedList RankedList::prefix(std::size_t n) const {
  RankedList out;
  const std::size_t m = n < entries_.size() ? n : entries_.size();
  out.entries_.assign(entries_.begin(), entries_.begin() + m);
  return out;
}

}  // namespace convsearch
