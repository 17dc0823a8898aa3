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

// Session-scoped JSON API over a shared Pipeline.
//
//   POST /sessions                          -> {session_id}
//   POST /sessions/{id}/turns               {query, overrides?} -> turn
//   GET  /sessions/{id}                     -> transcript
//   POST /sessions/{id}/turns/{n}/rescore   {gamma?, method?, min_length?,
//                                            include_query?} -> answer
//   GET  /healthz
//
// Unknown sessions or turns answer 404; a second turn submitted while one
// is in flight on the same session answers 409.

#ifndef CONVSEARCH_SERVER_H_
#define CONVSEARCH_SERVER_H_

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "convsearch/pipeline.h"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace convsearch {

struct Session {
  std::string id;
  std::chrono::system_clock::time_point created;
  Conversation conversation;
  std::vector<TurnOutcome> outcomes;  // committed turns, in order

  std::mutex turn_in_flight;  // held for the whole of a turn
  std::mutex data;            // guards conversation and outcomes
};

class SessionStore {
 public:
  std::shared_ptr<Session> Create(const std::string &topic_id);
  // nullptr when unknown.
  std::shared_ptr<Session> Find(const std::string &id) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

// JSON views shared by the API and tests.
nlohmann::ordered_json MentionsToJson(const std::vector<EntityMention> &mentions);
nlohmann::ordered_json GraphToJson(const GraphDocument &graph);
nlohmann::ordered_json AnswerToJson(const TurnState &state,
                                    const AnswerOutcome &answer);
nlohmann::ordered_json TurnToJson(const Pipeline &pipeline,
                                  const std::string &topic,
                                  const TurnOutcome &outcome);

// Parses {gamma?, method?, min_length?, include_query?}. Throws
// InvalidArgument.
AnswerOverrides ParseOverrides(const nlohmann::json &body);

class ApiServer {
 public:
  explicit ApiServer(std::shared_ptr<const Pipeline> pipeline);
  ~ApiServer();

  ApiServer(const ApiServer &) = delete;
  ApiServer &operator=(const ApiServer &) = delete;

  // Returns the bound port, or -1.
  int BindToAnyPort(const std::string &host);
  bool Bind(const std::string &host, int port);
  // Blocks until Stop().
  bool ListenAfterBind();
  void Stop();

 private:
  void Routes();

  std::shared_ptr<const Pipeline> pipeline_;
  SessionStore sessions_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace convsearch

#endif  // CONVSEARCH_SERVER_H_
