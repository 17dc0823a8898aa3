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

#ifndef CONVSEARCH_ENTITY_LINKING_H_
#define CONVSEARCH_ENTITY_LINKING_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace convsearch {

// Entity ids present in a text. Presence only; ordered for determinism.
using EntitySet = std::set<std::string>;

enum class MentionKind { kNamedEntity, kConcept };

std::string_view MentionKindName(MentionKind kind);

struct EntityMention {
  std::string surface;
  std::string entity_id;
  double confidence = 0.0;
  // Half-open span in Unicode code points of the annotated text.
  std::size_t begin = 0;
  std::size_t end = 0;
  MentionKind kind = MentionKind::kConcept;

  bool operator==(const EntityMention &) const = default;
};

inline constexpr double kDefaultLinkThreshold = 0.5;

class Linker {
 public:
  virtual ~Linker() = default;
  // Mentions with confidence >= threshold. Throws AdapterError when the
  // backing service fails.
  virtual std::vector<EntityMention> Annotate(std::string_view text,
                                              double threshold) const = 0;
};

// Runs the linker, drops mentions under the threshold, validates spans and
// sorts by span. Throws InvalidArgument for a threshold outside [0, 1] and
// AdapterError (malformed payload) for mentions that break the span or
// confidence invariants.
std::vector<EntityMention> Link(std::string_view text, const Linker &linker,
                                double threshold = kDefaultLinkThreshold);

EntitySet EntitiesOf(const std::vector<EntityMention> &mentions);

std::size_t Utf8Length(std::string_view text);

// Offline dictionary linker. Matching is case-insensitive over tokens,
// greedy left to right, preferring the longest surface form at each
// position, so returned spans never overlap.
class GazetteerLinker : public Linker {
 public:
  struct Entry {
    std::string surface;
    std::string entity_id;
    double confidence = 1.0;
    MentionKind kind = MentionKind::kConcept;
  };

  GazetteerLinker() = default;
  explicit GazetteerLinker(std::vector<Entry> entries);

  // JSONL: {"surface", "entity_id", "confidence"?, "kind"?}.
  static GazetteerLinker Load(const std::filesystem::path &path);

  std::vector<EntityMention> Annotate(std::string_view text,
                                      double threshold) const override;

  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
  // Space-joined surface tokens -> entries, best first.
  std::unordered_map<std::string, std::vector<std::size_t>> by_key_;
  std::size_t max_tokens_ = 0;
};

// Client for a DBpedia-Spotlight-compatible /annotate endpoint.
class SpotlightLinker : public Linker {
 public:
  explicit SpotlightLinker(std::string endpoint,
                           std::chrono::milliseconds timeout =
                               std::chrono::milliseconds(10000))
      : endpoint_(std::move(endpoint)), timeout_(timeout) {}

  std::vector<EntityMention> Annotate(std::string_view text,
                                      double threshold) const override;

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
};

// Issues the annotate request: form fields `text` and `confidence`,
// Accept: application/json. Throws AdapterError with kUnreachable,
// kHttpStatus or kMalformedPayload.
std::vector<EntityMention> SpotlightAnnotate(
    std::string_view text, double confidence, const std::string &endpoint,
    std::chrono::milliseconds timeout = std::chrono::milliseconds(10000));

// Parses a Spotlight JSON body. A missing "Resources" key means no
// annotations. Every resource needs @URI, @surfaceForm, @offset and
// @similarityScore; numeric fields may be strings (as Spotlight sends them)
// or numbers. Throws AdapterError(kMalformedPayload).
std::vector<EntityMention> ParseSpotlightResponse(std::string_view body,
                                                  std::string_view text);

// Inlink sets of a knowledge base subset. Immutable after construction.
class KnowledgeBaseStore {
 public:
  KnowledgeBaseStore() = default;

  // total_entities < 0 means "count distinct ids". Throws InvalidArgument
  // if an explicit total is smaller than some inlink set.
  explicit KnowledgeBaseStore(
      const std::map<std::string, std::set<std::string>> &inlinks,
      std::int64_t total_entities = -1);

  // Sorted interned ids of the entities linking to `entity`; empty for
  // unknown entities.
  const std::vector<std::uint32_t> &Inlinks(std::string_view entity) const;
  std::set<std::string> InlinkNames(std::string_view entity) const;

  bool Contains(std::string_view entity) const;
  std::uint64_t total_entities() const { return total_entities_; }
  std::size_t record_count() const { return inlinks_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::uint32_t>> inlinks_;
  std::vector<std::string> names_;
  std::uint64_t total_entities_ = 0;
};

// JSONL records {"entity_id", "inlinks": [ids]}, optionally preceded by a
// header {"total_entities": N}. Repeated records for one entity are merged.
// Throws ParseError with the line number on malformed lines.
KnowledgeBaseStore LoadKnowledgeBase(const std::filesystem::path &path);

}  // namespace convsearch

#endif  // CONVSEARCH_ENTITY_LINKING_H_
