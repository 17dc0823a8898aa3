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

#include "convsearch/driver.h"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "convsearch/error.h"
#include "json.hpp"

namespace convsearch {
namespace {

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string FormatScore(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::vector<Topic> LoadTopics(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open topics file " + path.string());
  std::vector<Topic> topics;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    Topic t;
    try {
      const auto j = nlohmann::json::parse(line);
      t.id = j.at("topic").get<std::string>();
      t.queries = j.at("queries").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(path.string(), line_no, e.what());
    }
    if (t.id.empty() || t.queries.empty()) {
      throw ParseError(path.string(), line_no,
                       "topic needs an id and at least one query");
    }
    if (!seen.insert(t.id).second) {
      throw InvalidArgument("duplicate topic '" + t.id + "' in " +
                            path.string());
    }
    topics.push_back(std::move(t));
  }
  if (topics.empty()) {
    throw InvalidArgument("topics file " + path.string() + " is empty");
  }
  return topics;
}

RunResult RunTopics(const Pipeline &pipeline, const std::vector<Topic> &topics) {
  RunResult result;
  for (const Topic &topic : topics) {
    Conversation conv(topic.id);
    for (const std::string &query : topic.queries) {
      try {
        const TurnOutcome outcome = pipeline.RunTurn(conv, query);
        result.records.push_back(pipeline.MakeRunRecord(topic.id, outcome));
        conv.AdvanceTurn(Pipeline::MakeTurn(outcome));
      } catch (const AdapterError &e) {
        result.failure = "topic " + topic.id + " turn " +
                         std::to_string(conv.next_turn_index()) + ": " +
                         e.what();
        return result;
      }
    }
  }
  return result;
}

std::string FormatRunFile(const std::vector<RunRecord> &records) {
  std::string out;
  for (const auto &r : records) {
    out += RunRecordToJson(r);
    out += '\n';
  }
  return out;
}

void Converse(const Pipeline &pipeline, std::istream &in, std::ostream &out,
              const std::string &topic_id) {
  Conversation conv(topic_id);
  std::string line;
  while (true) {
    out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    const std::string query = Trim(line);
    if (query.empty()) continue;
    if (query == "exit") break;
    TurnOutcome outcome;
    try {
      outcome = pipeline.RunTurn(conv, query);
    } catch (const Error &e) {
      out << "error: " << e.what() << "\n";
      continue;
    }
    const TurnState &s = outcome.state;
    out << "turn " << s.index << "\n";
    out << "rewritten: " << s.rewritten_query << "\n";
    out << "passages:\n";
    for (std::size_t i = 0; i < s.reranked.size() && i < 3; ++i) {
      const auto &p = s.reranked[i];
      out << "  " << (i + 1) << ". " << p.id << " (" << FormatScore(p.score)
          << ") " << pipeline.passages().Text(p.id) << "\n";
    }
    out << "answer: " << outcome.answer.answer << "\n";
    out << "entities:";
    const auto top = Pipeline::TopEntities(outcome.answer, 5);
    if (top.empty()) out << " (none)";
    for (const auto &e : top) out << " " << e.id << "=" << FormatScore(e.rank);
    out << "\n";
    conv.AdvanceTurn(Pipeline::MakeTurn(outcome));
  }
}

}  // namespace convsearch
