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

#include "convsearch/entity_linking.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "convsearch/error.h"
#include "convsearch/text_index.h"
#include "json.hpp"

namespace convsearch {
namespace {

using json = nlohmann::json;

std::string JoinTokens(const std::vector<TokenSpan> &tokens, std::size_t from,
                       std::size_t count) {
  std::string key;
  for (std::size_t i = from; i < from + count; ++i) {
    if (i > from) key += ' ';
    key += tokens[i].text;
  }
  return key;
}

// Code point index of a byte offset into valid UTF-8.
std::size_t CharOffset(std::string_view text, std::size_t byte_offset) {
  return Utf8Length(text.substr(0, byte_offset));
}

AdapterError Malformed(const std::string &what) {
  return AdapterError(AdapterError::Kind::kMalformedPayload,
                      "spotlight: " + what);
}

double NumberField(const json &resource, const char *key) {
  const json &v = resource.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t used = 0;
    double out = 0.0;
    try {
      out = std::stod(s, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw Malformed(std::string(key) + " is not numeric: '" + s + "'");
    }
    return out;
  }
  throw Malformed(std::string(key) + " has the wrong type");
}

}  // namespace

std::string_view MentionKindName(MentionKind kind) {
  return kind == MentionKind::kNamedEntity ? "named-entity" : "concept";
}

std::size_t Utf8Length(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::vector<EntityMention> Link(std::string_view text, const Linker &linker,
                                double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("link: threshold must lie in [0, 1]");
  }
  const std::size_t length = Utf8Length(text);
  std::vector<EntityMention> out;
  for (auto &m : linker.Annotate(text, threshold)) {
    if (!(m.confidence >= 0.0 && m.confidence <= 1.0)) {
      throw AdapterError(AdapterError::Kind::kMalformedPayload,
                         "link: confidence outside [0, 1] for " + m.entity_id);
    }
    if (!(m.begin < m.end && m.end <= length)) {
      throw AdapterError(AdapterError::Kind::kMalformedPayload,
                         "link: span out of bounds for " + m.entity_id);
    }
    if (m.confidence >= threshold) out.push_back(std::move(m));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EntityMention &a, const EntityMention &b) {
                     if (a.begin != b.begin) return a.begin < b.begin;
                     return a.end < b.end;
                   });
  return out;
}

EntitySet EntitiesOf(const std::vector<EntityMention> &mentions) {
  EntitySet out;
  for (const auto &m : mentions) out.insert(m.entity_id);
  return out;
}

GazetteerLinker::GazetteerLinker(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto tokens = TokenizeWithSpans(entries_[i].surface);
    if (tokens.empty()) {
      throw InvalidArgument("gazetteer: surface form '" + entries_[i].surface +
                            "' has no tokens");
    }
    max_tokens_ = std::max(max_tokens_, tokens.size());
    by_key_[JoinTokens(tokens, 0, tokens.size())].push_back(i);
  }
  for (auto &[key, list] : by_key_) {
    std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
      if (entries_[a].confidence != entries_[b].confidence) {
        return entries_[a].confidence > entries_[b].confidence;
      }
      return entries_[a].entity_id < entries_[b].entity_id;
    });
  }
}

GazetteerLinker GazetteerLinker::Load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open gazetteer " + path.string());
  std::vector<Entry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json record = json::parse(line);
      Entry e;
      e.surface = record.at("surface").get<std::string>();
      e.entity_id = record.at("entity_id").get<std::string>();
      e.confidence = record.value("confidence", 1.0);
      const std::string kind = record.value("kind", std::string("concept"));
      if (kind == "named-entity") {
        e.kind = MentionKind::kNamedEntity;
      } else if (kind != "concept") {
        throw ParseError(path.string(), lineno, "unknown kind " + kind);
      }
      if (!(e.confidence >= 0.0 && e.confidence <= 1.0)) {
        throw ParseError(path.string(), lineno, "confidence outside [0, 1]");
      }
      entries.push_back(std::move(e));
    } catch (const json::exception &e) {
      throw ParseError(path.string(), lineno, e.what());
    }
  }
  return GazetteerLinker(std::move(entries));
}

std::vector<EntityMention> GazetteerLinker::Annotate(std::string_view text,
                                                     double threshold) const {
  const auto tokens = TokenizeWithSpans(text);
  std::vector<EntityMention> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const Entry *hit = nullptr;
    std::size_t hit_len = 0;
    const std::size_t longest = std::min(max_tokens_, tokens.size() - i);
    for (std::size_t len = longest; len >= 1 && hit == nullptr; --len) {
      auto it = by_key_.find(JoinTokens(tokens, i, len));
      if (it == by_key_.end()) continue;
      for (std::size_t idx : it->second) {
        if (entries_[idx].confidence >= threshold) {
          hit = &entries_[idx];
          hit_len = len;
          break;
        }
      }
    }
    if (hit == nullptr) {
      ++i;
      continue;
    }
    const std::size_t begin_byte = tokens[i].begin;
    const std::size_t end_byte = tokens[i + hit_len - 1].end;
    EntityMention m;
    m.surface = std::string(text.substr(begin_byte, end_byte - begin_byte));
    m.entity_id = hit->entity_id;
    m.confidence = hit->confidence;
    m.begin = CharOffset(text, begin_byte);
    m.end = CharOffset(text, end_byte);
    m.kind = hit->kind;
    out.push_back(std::move(m));
    i += hit_len;
  }
  return out;
}

std::vector<EntityMention> SpotlightLinker::Annotate(std::string_view text,
                                                     double threshold) const {
  return SpotlightAnnotate(text, threshold, endpoint_, timeout_);
}

std::vector<EntityMention> ParseSpotlightResponse(std::string_view body,
                                                  std::string_view text) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error &e) {
    throw Malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Malformed("response is not an object");
  std::vector<EntityMention> out;
  if (!doc.contains("Resources") || doc["Resources"].is_null()) return out;
  const json &resources = doc["Resources"];
  if (!resources.is_array()) throw Malformed("Resources is not an array");

  const std::size_t length = Utf8Length(text);
  for (std::size_t i = 0; i < resources.size(); ++i) {
    const json &r = resources[i];
    const std::string where = "resource " + std::to_string(i) + ": ";
    for (const char *key : {"@URI", "@surfaceForm", "@offset",
                            "@similarityScore"}) {
      if (!r.is_object() || !r.contains(key)) {
        throw Malformed(where + "missing " + key);
      }
    }
    if (!r["@URI"].is_string() || !r["@surfaceForm"].is_string()) {
      throw Malformed(where + "@URI and @surfaceForm must be strings");
    }
    EntityMention m;
    m.entity_id = r["@URI"].get<std::string>();
    m.surface = r["@surfaceForm"].get<std::string>();
    const double offset = NumberField(r, "@offset");
    m.confidence = NumberField(r, "@similarityScore");
    if (offset < 0 || offset != std::floor(offset)) {
      throw Malformed(where + "@offset must be a non-negative integer");
    }
    if (!(m.confidence >= 0.0 && m.confidence <= 1.0)) {
      throw Malformed(where + "@similarityScore outside [0, 1]");
    }
    m.begin = static_cast<std::size_t>(offset);
    m.end = m.begin + Utf8Length(m.surface);
    if (m.begin >= m.end || m.end > length) {
      throw Malformed(where + "span exceeds the annotated text");
    }
    const bool typed = r.contains("@types") && r["@types"].is_string() &&
                       !r["@types"].get<std::string>().empty();
    m.kind = typed ? MentionKind::kNamedEntity : MentionKind::kConcept;
    out.push_back(std::move(m));
  }
  return out;
}

KnowledgeBaseStore::KnowledgeBaseStore(
    const std::map<std::string, std::set<std::string>> &inlinks,
    std::int64_t total_entities) {
  std::unordered_map<std::string, std::uint32_t> ids;
  auto intern = [&](const std::string &name) {
    auto [it, inserted] =
        ids.emplace(name, static_cast<std::uint32_t>(names_.size()));
    if (inserted) names_.push_back(name);
    return it->second;
  };
  std::size_t largest = 0;
  for (const auto &[entity, sources] : inlinks) {
    intern(entity);
    std::vector<std::uint32_t> list;
    list.reserve(sources.size());
    for (const auto &s : sources) list.push_back(intern(s));
    std::sort(list.begin(), list.end());
    largest = std::max(largest, list.size());
    inlinks_.emplace(entity, std::move(list));
  }
  if (total_entities < 0) {
    total_entities_ = names_.size();
  } else {
    if (static_cast<std::uint64_t>(total_entities) < largest) {
      throw InvalidArgument("knowledge base: total_entities " +
                            std::to_string(total_entities) +
                            " is smaller than an inlink set of size " +
                            std::to_string(largest));
    }
    total_entities_ = static_cast<std::uint64_t>(total_entities);
  }
}

const std::vector<std::uint32_t> &KnowledgeBaseStore::Inlinks(
    std::string_view entity) const {
  static const std::vector<std::uint32_t> kEmpty;
  auto it = inlinks_.find(std::string(entity));
  return it == inlinks_.end() ? kEmpty : it->second;
}

std::set<std::string> KnowledgeBaseStore::InlinkNames(
    std::string_view entity) const {
  std::set<std::string> out;
  for (std::uint32_t id : Inlinks(entity)) out.insert(names_[id]);
  return out;
}

bool KnowledgeBaseStore::Contains(std::string_view entity) const {
  return inlinks_.count(std::string(entity)) > 0;
}

KnowledgeBaseStore LoadKnowledgeBase(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open knowledge base " + path.string());
  std::map<std::string, std::set<std::string>> inlinks;
  std::int64_t total = -1;
  std::string line;
  int lineno = 0;
  bool seen_record = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(path.string(), lineno, e.what());
    }
    if (!record.is_object()) {
      throw ParseError(path.string(), lineno, "record is not an object");
    }
    if (record.contains("total_entities")) {
      if (seen_record || total >= 0) {
        throw ParseError(path.string(), lineno,
                         "header must be the first record");
      }
      const json &t = record["total_entities"];
      if (!t.is_number_integer() || t.get<std::int64_t>() < 0) {
        throw ParseError(path.string(), lineno,
                         "total_entities must be a non-negative integer");
      }
      total = t.get<std::int64_t>();
      continue;
    }
    seen_record = true;
    if (!record.contains("entity_id") || !record["entity_id"].is_string() ||
        !record.contains("inlinks") || !record["inlinks"].is_array()) {
      throw ParseError(path.string(), lineno,
                       "record needs entity_id (string) and inlinks (array)");
    }
    auto &set = inlinks[record["entity_id"].get<std::string>()];
    for (const json &id : record["inlinks"]) {
      if (!id.is_string()) {
        throw ParseError(path.string(), lineno, "inlink ids must be strings");
      }
      set.insert(id.get<std::string>());
    }
  }
  try {
    return KnowledgeBaseStore(inlinks, total);
  } catch (const InvalidArgument &e) {
    throw ParseError(path.string(), 1, e.what());
  }
}

}  // namespace convsearch
