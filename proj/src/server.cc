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

#include "convsearch/server.h"

#include <ctime>

#include "convsearch/error.h"
#include "httplib.h"

namespace convsearch {
namespace {

using ojson = nlohmann::ordered_json;

void Reply(httplib::Response &res, int status, const ojson &body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void ReplyError(httplib::Response &res, int status, const std::string &what) {
  ojson body;
  body["error"] = what;
  Reply(res, status, body);
}

std::string Timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json ParseRequest(const httplib::Request &req) {
  if (req.body.empty()) return nlohmann::json::object();
  try {
    auto j = nlohmann::json::parse(req.body);
    if (!j.is_object()) throw InvalidArgument("request body must be an object");
    return j;
  } catch (const nlohmann::json::parse_error &e) {
    throw InvalidArgument(std::string("invalid JSON: ") + e.what());
  }
}

// Maps library errors onto HTTP statuses.
template <typename Fn>
void Guard(httplib::Response &res, Fn &&fn) {
  try {
    fn();
  } catch (const NotFound &e) {
    ReplyError(res, 404, e.what());
  } catch (const InvalidArgument &e) {
    ReplyError(res, 400, e.what());
  } catch (const AdapterError &e) {
    ReplyError(res, 502, e.what());
  } catch (const std::exception &e) {
    ReplyError(res, 500, e.what());
  }
}

}  // namespace

std::shared_ptr<Session> SessionStore::Create(const std::string &topic_id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto s = std::make_shared<Session>();
  s->id = "s" + std::to_string(next_id_++);
  s->created = std::chrono::system_clock::now();
  s->conversation = Conversation(topic_id.empty() ? s->id : topic_id);
  sessions_.emplace(s->id, s);
  return s;
}

std::shared_ptr<Session> SessionStore::Find(const std::string &id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

ojson MentionsToJson(const std::vector<EntityMention> &mentions) {
  ojson out = ojson::array();
  for (const auto &m : mentions) {
    ojson j;
    j["entity_id"] = m.entity_id;
    j["surface"] = m.surface;
    j["begin"] = m.begin;
    j["end"] = m.end;
    j["confidence"] = m.confidence;
    j["kind"] = std::string(MentionKindName(m.kind));
    out.push_back(std::move(j));
  }
  return out;
}

ojson GraphToJson(const GraphDocument &graph) {
  ojson j;
  j["nodes"] = ojson::array();
  for (const auto &n : graph.nodes) {
    j["nodes"].push_back({{"id", n.id}, {"rank", n.rank}, {"tier", n.tier}});
  }
  j["edges"] = ojson::array();
  for (const auto &e : graph.edges) {
    j["edges"].push_back(
        {{"source", e.source}, {"target", e.target}, {"weight", e.weight}});
  }
  return j;
}

ojson AnswerToJson(const TurnState &state, const AnswerOutcome &answer) {
  ojson j;
  j["turn"] = state.index;
  j["method"] = std::string(ScoringMethodName(answer.method));
  j["gamma"] = answer.gamma;
  j["min_length"] = answer.min_length;
  j["include_query"] = answer.include_query;
  ojson passages = ojson::array();
  for (std::size_t i = 0; i < state.candidates.size(); ++i) {
    const auto &c = state.candidates[i];
    ojson p;
    p["id"] = c.id;
    p["text"] = c.text;
    p["score"] = c.score;
    p["entities"] = MentionsToJson(c.mentions);
    const auto &scores = answer.selection.method_scores;
    if (i < scores.size() && scores[i].has_value()) {
      p["method_score"] = *scores[i];
    } else {
      p["method_score"] = nullptr;
    }
    passages.push_back(std::move(p));
  }
  j["passages"] = std::move(passages);
  j["selected"] = answer.selected_ids;
  j["graph"] = answer.graph ? GraphToJson(*answer.graph)
                            : GraphToJson(GraphDocument{});
  j["answer"] = answer.answer;
  j["answer_words"] = CountWords(answer.answer);
  return j;
}

ojson TurnToJson(const Pipeline &pipeline, const std::string &topic,
                 const TurnOutcome &outcome) {
  const TurnState &s = outcome.state;
  ojson j;
  j["turn"] = s.index;
  j["raw_query"] = s.raw_query;
  j["prompt"] = s.prompt;
  j["rewritten_query"] = s.rewritten_query;
  j["query_entities"] = MentionsToJson(s.query_mentions);
  j["entity_history"] =
      std::vector<std::string>(s.entity_history.begin(), s.entity_history.end());
  const ojson answer = AnswerToJson(s, outcome.answer);
  for (const auto &[key, value] : answer.items()) {
    if (key != "turn") j[key] = value;
  }
  j["timings"] = {{"rewrite_ms", outcome.timings.rewrite_ms},
                  {"retrieve_ms", outcome.timings.retrieve_ms},
                  {"rerank_ms", outcome.timings.rerank_ms},
                  {"link_ms", outcome.timings.link_ms},
                  {"answer_ms", outcome.timings.answer_ms}};
  j["run_record"] =
      ojson::parse(RunRecordToJson(pipeline.MakeRunRecord(topic, outcome)));
  return j;
}

AnswerOverrides ParseOverrides(const nlohmann::json &body) {
  AnswerOverrides o;
  if (body.is_null()) return o;
  if (!body.is_object()) throw InvalidArgument("overrides must be an object");
  try {
    for (const auto &[key, v] : body.items()) {
      if (key == "gamma") {
        o.gamma = v.get<double>();
      } else if (key == "method") {
        o.method = ParseScoringMethod(v.get<std::string>());
      } else if (key == "min_length") {
        o.min_length = v.get<int>();
      } else if (key == "include_query") {
        o.include_query = v.get<bool>();
      } else {
        throw InvalidArgument("unknown override '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception &e) {
    throw InvalidArgument(std::string("bad override: ") + e.what());
  }
  return o;
}

ApiServer::ApiServer(std::shared_ptr<const Pipeline> pipeline)
    : pipeline_(std::move(pipeline)),
      http_(std::make_unique<httplib::Server>()) {
  Routes();
}

ApiServer::~ApiServer() { Stop(); }

int ApiServer::BindToAnyPort(const std::string &host) {
  return http_->bind_to_any_port(host);
}

bool ApiServer::Bind(const std::string &host, int port) {
  return http_->bind_to_port(host, port);
}

bool ApiServer::ListenAfterBind() { return http_->listen_after_bind(); }

void ApiServer::Stop() {
  if (http_) http_->stop();
}

void ApiServer::Routes() {
  http_->Get("/healthz", [](const httplib::Request &, httplib::Response &res) {
    Reply(res, 200, {{"status", "ok"}});
  });

  http_->Post("/sessions",
              [this](const httplib::Request &req, httplib::Response &res) {
                Guard(res, [&] {
                  const auto body = ParseRequest(req);
                  const std::string topic = body.value("topic_id", "");
                  auto s = sessions_.Create(topic);
                  Reply(res, 201, {{"session_id", s->id},
                                   {"topic_id", s->conversation.topic_id()}});
                });
              });

  http_->Get(R"(/sessions/([^/]+))",
             [this](const httplib::Request &req, httplib::Response &res) {
               Guard(res, [&] {
                 auto s = sessions_.Find(req.matches[1]);
                 if (!s) throw NotFound("unknown session " +
                                        std::string(req.matches[1]));
                 std::lock_guard<std::mutex> lock(s->data);
                 ojson j;
                 j["session_id"] = s->id;
                 j["topic_id"] = s->conversation.topic_id();
                 j["created"] = Timestamp(s->created);
                 j["turns"] = ojson::array();
                 for (const auto &o : s->outcomes) {
                   j["turns"].push_back(
                       TurnToJson(*pipeline_, s->conversation.topic_id(), o));
                 }
                 Reply(res, 200, j);
               });
             });

  http_->Post(
      R"(/sessions/([^/]+)/turns)",
      [this](const httplib::Request &req, httplib::Response &res) {
        Guard(res, [&] {
          auto s = sessions_.Find(req.matches[1]);
          if (!s) {
            throw NotFound("unknown session " + std::string(req.matches[1]));
          }
          std::unique_lock<std::mutex> busy(s->turn_in_flight,
                                            std::try_to_lock);
          if (!busy.owns_lock()) {
            ReplyError(res, 409, "a turn is already in flight for " + s->id);
            return;
          }
          const auto body = ParseRequest(req);
          if (!body.contains("query") || !body["query"].is_string() ||
              body["query"].get<std::string>().empty()) {
            throw InvalidArgument("request needs a non-empty string 'query'");
          }
          const AnswerOverrides overrides =
              ParseOverrides(body.value("overrides", nlohmann::json()));

          Conversation snapshot;
          {
            std::lock_guard<std::mutex> lock(s->data);
            snapshot = s->conversation;
          }
          TurnOutcome outcome = pipeline_->RunTurn(
              snapshot, body["query"].get<std::string>(), overrides);
          ojson reply = TurnToJson(*pipeline_, snapshot.topic_id(), outcome);
          {
            std::lock_guard<std::mutex> lock(s->data);
            s->conversation.AdvanceTurn(Pipeline::MakeTurn(outcome));
            s->outcomes.push_back(std::move(outcome));
          }
          Reply(res, 200, reply);
        });
      });

  http_->Post(
      R"(/sessions/([^/]+)/turns/(\d+)/rescore)",
      [this](const httplib::Request &req, httplib::Response &res) {
        Guard(res, [&] {
          auto s = sessions_.Find(req.matches[1]);
          if (!s) {
            throw NotFound("unknown session " + std::string(req.matches[1]));
          }
          const int n = std::stoi(req.matches[2]);
          const AnswerOverrides overrides = ParseOverrides(ParseRequest(req));
          TurnState state;
          {
            std::lock_guard<std::mutex> lock(s->data);
            if (n < 1 || n > static_cast<int>(s->outcomes.size())) {
              throw NotFound("session " + s->id + " has no turn " +
                             std::to_string(n));
            }
            state = s->outcomes[n - 1].state;
          }
          const AnswerOutcome answer = pipeline_->Answer(state, overrides);
          Reply(res, 200, AnswerToJson(state, answer));
        });
      });
}

}  // namespace convsearch
