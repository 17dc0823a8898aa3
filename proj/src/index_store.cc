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

#include "convsearch/index_store.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "convsearch/error.h"
#include "json.hpp"

namespace convsearch {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string HexDigest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::ifstream OpenForRead(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open " + path.string());
  return in;
}

std::ofstream OpenForWrite(const fs::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::uint64_t ParseCount(const std::string &s, const std::string &path,
                         int line) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ParseError(path, line, "expected a count, got '" + s + "'");
  }
  return v;
}

}  // namespace

PassageStore::PassageStore(std::vector<PassageRecord> passages)
    : passages_(std::move(passages)) {
  for (std::size_t i = 0; i < passages_.size(); ++i) {
    by_id_.emplace(passages_[i].id, i);
  }
}

const PassageRecord *PassageStore::Find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &passages_[it->second];
}

const std::string &PassageStore::Text(std::string_view id) const {
  const PassageRecord *p = Find(id);
  if (p == nullptr) throw NotFound("unknown passage id " + std::string(id));
  return p->text;
}

std::vector<PassageRecord> ReadCorpus(const fs::path &path) {
  std::ifstream in = OpenForRead(path);
  std::vector<PassageRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(path.string(), lineno, e.what());
    }
    if (!record.is_object() || !record.contains("id") ||
        !record["id"].is_string() || !record.contains("text") ||
        !record["text"].is_string()) {
      throw ParseError(path.string(), lineno,
                       "record needs string fields id and text");
    }
    PassageRecord p;
    p.id = record["id"].get<std::string>();
    p.text = record["text"].get<std::string>();
    if (record.contains("source") && record["source"].is_string()) {
      p.source = record["source"].get<std::string>();
    }
    if (p.id.empty()) throw ParseError(path.string(), lineno, "empty id");
    if (p.text.empty()) {
      throw ParseError(path.string(), lineno, "empty text for " + p.id);
    }
    out.push_back(std::move(p));
  }
  return out;
}

IndexManifest IndexStore::MakeManifest(const InvertedIndex &index) {
  IndexManifest m;
  m.format_version = kIndexFormatVersion;
  m.tokenizer = std::string(kTokenizerVersion);
  m.stemmer = index.stemmer_version();
  m.passage_count = index.passage_count();
  m.total_tokens = index.total_tokens();
  m.vocabulary_size = index.vocabulary_size();
  m.content_hash = HexDigest(index.ContentHash());
  return m;
}

IndexManifest IndexStore::Write(const fs::path &dir,
                                const std::vector<PassageRecord> &passages,
                                const InvertedIndex &index) {
  fs::create_directories(dir);
  const IndexManifest manifest = MakeManifest(index);

  {
    std::ofstream out = OpenForWrite(dir / "passages.jsonl");
    // Same order as the index documents.
    PassageStore store(passages);
    for (std::uint32_t d = 0; d < index.passage_count(); ++d) {
      const PassageRecord *p = store.Find(index.passage_id(d));
      json record;
      record["id"] = p->id;
      record["text"] = p->text;
      record["source"] = p->source;
      out << record.dump() << '\n';
    }
  }
  {
    std::ofstream out = OpenForWrite(dir / "doclen.tsv");
    for (std::uint32_t d = 0; d < index.passage_count(); ++d) {
      out << index.passage_id(d) << '\t' << index.doc_length(d) << '\n';
    }
  }
  {
    std::ofstream out = OpenForWrite(dir / "postings.tsv");
    for (const auto &term : index.Terms()) {
      out << term;
      for (const Posting &p : index.postings(term)) {
        out << '\t' << p.doc << ':' << p.tf;
      }
      out << '\n';
    }
  }
  {
    json m;
    m["format_version"] = manifest.format_version;
    m["tokenizer"] = manifest.tokenizer;
    m["stemmer"] = manifest.stemmer;
    m["passage_count"] = manifest.passage_count;
    m["total_tokens"] = manifest.total_tokens;
    m["vocabulary_size"] = manifest.vocabulary_size;
    m["content_hash"] = manifest.content_hash;
    std::ofstream out = OpenForWrite(dir / "manifest.json");
    out << m.dump(2) << '\n';
  }
  return manifest;
}

IndexManifest IndexStore::ReadManifest(const fs::path &dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in = OpenForRead(path);
  json m;
  try {
    m = json::parse(in);
    IndexManifest out;
    out.format_version = m.at("format_version").get<int>();
    out.tokenizer = m.at("tokenizer").get<std::string>();
    out.stemmer = m.at("stemmer").get<std::string>();
    out.passage_count = m.at("passage_count").get<std::uint64_t>();
    out.total_tokens = m.at("total_tokens").get<std::uint64_t>();
    out.vocabulary_size = m.at("vocabulary_size").get<std::uint64_t>();
    out.content_hash = m.at("content_hash").get<std::string>();
    return out;
  } catch (const json::exception &e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

InvertedIndex IndexStore::Load(const fs::path &dir, PassageStore *passages) {
  const IndexManifest manifest = ReadManifest(dir);
  if (manifest.format_version != kIndexFormatVersion) {
    throw Error("index format version " +
                std::to_string(manifest.format_version) + " not supported");
  }
  if (manifest.tokenizer != kTokenizerVersion ||
      manifest.stemmer != DefaultStemmer().Version()) {
    throw Error("index built with tokenizer " + manifest.tokenizer +
                " and stemmer " + manifest.stemmer + "; rebuild required");
  }

  InvertedIndex index;
  index.stemmer_version_ = manifest.stemmer;
  {
    const fs::path path = dir / "doclen.tsv";
    std::ifstream in = OpenForRead(path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto fields = SplitTabs(line);
      if (fields.size() != 2) {
        throw ParseError(path.string(), lineno, "expected id<TAB>length");
      }
      const auto doc = static_cast<std::uint32_t>(index.ids_.size());
      const auto length = ParseCount(fields[1], path.string(), lineno);
      index.ids_.push_back(fields[0]);
      index.doc_by_id_.emplace(fields[0], doc);
      index.doc_length_.push_back(static_cast<std::uint32_t>(length));
      index.total_tokens_ += length;
    }
  }
  {
    const fs::path path = dir / "postings.tsv";
    std::ifstream in = OpenForRead(path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto fields = SplitTabs(line);
      if (fields.size() < 2) {
        throw ParseError(path.string(), lineno, "term without postings");
      }
      auto &entry = index.postings_[fields[0]];
      for (std::size_t i = 1; i < fields.size(); ++i) {
        const std::size_t colon = fields[i].find(':');
        if (colon == std::string::npos) {
          throw ParseError(path.string(), lineno, "expected doc:tf");
        }
        Posting p;
        p.doc = static_cast<std::uint32_t>(
            ParseCount(fields[i].substr(0, colon), path.string(), lineno));
        p.tf = static_cast<std::uint32_t>(
            ParseCount(fields[i].substr(colon + 1), path.string(), lineno));
        if (p.doc >= index.ids_.size() || p.tf == 0 ||
            (!entry.postings.empty() && entry.postings.back().doc >= p.doc)) {
          throw ParseError(path.string(), lineno, "invalid posting");
        }
        entry.cf += p.tf;
        entry.postings.push_back(p);
      }
    }
  }

  if (MakeManifest(index) != manifest) {
    throw Error("index at " + dir.string() +
                " does not match its manifest; rebuild required");
  }

  if (passages != nullptr) {
    auto records = ReadCorpus(dir / "passages.jsonl");
    *passages = PassageStore(std::move(records));
    if (passages->size() != index.passage_count()) {
      throw Error("index passages.jsonl disagrees with manifest");
    }
  }
  return index;
}

}  // namespace convsearch
