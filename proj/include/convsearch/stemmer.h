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

#ifndef CONVSEARCH_STEMMER_H_
#define CONVSEARCH_STEMMER_H_

#include <string>
#include <string_view>

namespace convsearch {

class Stemmer {
 public:
  virtual ~Stemmer() = default;

  // Maps a lowercase token to its stem. Must be deterministic and
  // idempotent.
  virtual std::string Stem(std::string_view token) const = 0;

  // Recorded in index manifests so a stale index can be detected.
  virtual std::string Version() const = 0;
};

// Inflectional stemmer built from the plural, past-tense and progressive
// rules (step 1a/1b/1c) of the Porter algorithm. The derivational steps are
// left out so stems stay readable words ("satellites" -> "satellite").
// Tokens containing non-letters are returned unchanged. The rules are
// applied to a fixpoint, which makes Stem idempotent.
class PorterStemmer : public Stemmer {
 public:
  std::string Stem(std::string_view token) const override;
  std::string Version() const override { return "porter-step1/1"; }
};

// Process-wide default stemmer used by the index, linkers and metrics.
const Stemmer &DefaultStemmer();

}  // namespace convsearch

#endif  // CONVSEARCH_STEMMER_H_
