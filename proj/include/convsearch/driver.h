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

// Batch and interactive front ends over a Pipeline.

#ifndef CONVSEARCH_DRIVER_H_
#define CONVSEARCH_DRIVER_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "convsearch/pipeline.h"

namespace convsearch {

struct Topic {
  std::string id;
  std::vector<std::string> queries;  // turn 1 first
};

// JSONL {"topic": id, "queries": [..]}. Throws ParseError; an empty file or
// a duplicate topic id is InvalidArgument.
std::vector<Topic> LoadTopics(const std::filesystem::path &path);

struct RunResult {
  std::vector<RunRecord> records;
  // Set when a turn failed; records holds every turn completed before it.
  std::optional<std::string> failure;
};

// Runs every topic in order, one fresh conversation per topic. Adapter
// errors that survive the configured fallback stop the run.
RunResult RunTopics(const Pipeline &pipeline, const std::vector<Topic> &topics);

// One RunRecordToJson line per record.
std::string FormatRunFile(const std::vector<RunRecord> &records);

// Line-oriented loop: one query per line, "exit" (or EOF) quits, blank
// lines re-prompt. Prints the rewritten query, the top-3 passages, the
// answer and the top-5 salient entities for each turn.
void Converse(const Pipeline &pipeline, std::istream &in, std::ostream &out,
              const std::string &topic_id = "interactive");

}  // namespace convsearch

#endif  // CONVSEARCH_DRIVER_H_
