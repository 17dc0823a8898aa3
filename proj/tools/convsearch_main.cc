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

// convsearch: index | run | eval | converse | serve
//
// Pipeline settings come from --config (JSON, see config.h) and are then
// overridden by flags named after the config keys, e.g. --gamma 0.5.

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "convsearch/config.h"
#include "convsearch/driver.h"
#include "convsearch/error.h"
#include "convsearch/index_store.h"
#include "convsearch/metrics.h"
#include "convsearch/server.h"
#include "json.hpp"

namespace convsearch {
namespace {

constexpr int kExitPartialRun = 3;

// One string-valued flag per config key; typed through the default value.
class ConfigFlags {
 public:
  void Register(CLI::App *app) {
    app->add_option("--config", config_path_, "pipeline config (JSON)");
    defaults_ = ConfigToJson(PipelineConfig{});
    for (const auto &[key, value] : defaults_.items()) {
      if (key == "schema_version") continue;
      app->add_option("--" + key, values_[key],
                      "config key '" + key + "' (default " + value.dump() +
                          ")");
    }
  }

  PipelineConfig Build() const {
    PipelineConfig config;
    if (!config_path_.empty()) config = LoadConfig(config_path_);
    nlohmann::json overrides = nlohmann::json::object();
    for (const auto &[key, text] : values_) {
      if (text.empty()) continue;
      const auto &def = defaults_.at(key);
      if (def.is_string()) {
        overrides[key] = text;
      } else {
        try {
          overrides[key] = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error &) {
          throw InvalidArgument("--" + key + ": cannot parse '" + text + "'");
        }
      }
    }
    ApplyConfigOverrides(config, overrides, std::filesystem::current_path());
    return config;
  }

 private:
  std::string config_path_;
  nlohmann::ordered_json defaults_;
  std::map<std::string, std::string> values_;
};

void WriteFile(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("short write to " + path.string());
}

int CmdIndex(const std::string &corpus, const std::string &out_dir) {
  const auto passages = ReadCorpus(corpus);
  const InvertedIndex index = BuildIndex(passages);
  const IndexManifest m = IndexStore::Write(out_dir, passages, index);
  nlohmann::ordered_json j;
  j["format_version"] = m.format_version;
  j["tokenizer"] = m.tokenizer;
  j["stemmer"] = m.stemmer;
  j["passage_count"] = m.passage_count;
  j["total_tokens"] = m.total_tokens;
  j["vocabulary_size"] = m.vocabulary_size;
  j["content_hash"] = m.content_hash;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int CmdRun(const PipelineConfig &config, const std::string &topics_path,
           const std::string &out_path) {
  const auto topics = LoadTopics(topics_path);
  const auto pipeline = Pipeline::Open(config);
  const RunResult result = RunTopics(*pipeline, topics);
  const std::string text = FormatRunFile(result.records);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    WriteFile(out_path, text);
  }
  if (result.failure) {
    std::cerr << "partial run (" << result.records.size()
              << " turns written): " << *result.failure << "\n";
    return kExitPartialRun;
  }
  return 0;
}

int CmdEval(const std::string &run_path, const std::string &qrels_path,
            const std::string &index_dir, const std::string &references_path,
            const std::string &csv_path, const std::string &json_path,
            const EvalConfig &eval) {
  const auto run = ReadRunFile(run_path);
  const QRels qrels = LoadQRels(qrels_path);
  ReferenceSet refs;
  if (!references_path.empty()) {
    refs = LoadReferences(references_path);
  } else {
    PassageStore store;
    IndexStore::Load(index_dir, &store);
    std::size_t missing = 0;
    refs = BuildReferences(qrels, store, 3, &missing);
    if (missing > 0) {
      std::cerr << "warning: " << missing
                << " judged passages are not in the index\n";
    }
  }
  const MetricReport report = EvaluateRun(run, qrels, refs, eval);
  const std::string json = ReportJson(report);
  if (!csv_path.empty()) WriteFile(csv_path, ReportCsv(report));
  if (!json_path.empty()) WriteFile(json_path, json);
  std::cout << json << "\n";
  return 0;
}

ApiServer *g_server = nullptr;

void OnSignal(int) {
  if (g_server) g_server->Stop();
}

int CmdServe(const PipelineConfig &config, const std::string &host, int port) {
  ApiServer server(Pipeline::Open(config));
  int bound = port;
  if (port == 0) {
    bound = server.BindToAnyPort(host);
    if (bound < 0) throw Error("cannot bind " + host);
  } else if (!server.Bind(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  g_server = &server;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  std::cout << "listening on http://" << host << ":" << bound << std::endl;
  server.ListenAfterBind();
  g_server = nullptr;
  return 0;
}

int Main(int argc, char **argv) {
  CLI::App app{"Conversational search with entity-graph answer selection"};
  app.require_subcommand(1);

  auto *index = app.add_subcommand("index", "build an index from a corpus");
  std::string corpus, index_out;
  index->add_option("--corpus", corpus, "JSONL {id, text[, source]}")
      ->required();
  index->add_option("--out", index_out, "index directory")->required();

  auto *run = app.add_subcommand("run", "run topics through the pipeline");
  ConfigFlags run_flags;
  run_flags.Register(run);
  std::string topics, run_out;
  run->add_option("--topics", topics, "JSONL {topic, queries}")->required();
  run->add_option("--out", run_out, "run file (default stdout)");

  auto *eval = app.add_subcommand("eval", "score a run file");
  std::string run_file, qrels, eval_index, references, csv_out, json_out;
  EvalConfig eval_config;
  eval->add_option("--run", run_file)->required();
  eval->add_option("--qrels", qrels)->required();
  auto *ref_group = eval->add_option_group("references");
  ref_group->add_option("--index", eval_index,
                        "index holding the judged passages");
  ref_group->add_option("--references", references,
                        "JSONL {topic, turn, passages}");
  ref_group->require_option(1);
  eval->add_option("--csv", csv_out, "per-turn CSV output");
  eval->add_option("--json", json_out, "JSON summary output");
  eval->add_option("--ndcg-k", eval_config.ndcg_k)->capture_default_str();
  eval->add_option("--relevance-cutoff", eval_config.relevance_cutoff)
      ->capture_default_str();

  auto *converse = app.add_subcommand("converse", "interactive terminal loop");
  ConfigFlags converse_flags;
  converse_flags.Register(converse);

  auto *serve = app.add_subcommand("serve", "HTTP API");
  ConfigFlags serve_flags;
  serve_flags.Register(serve);
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port, "0 picks a free port")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*index) return CmdIndex(corpus, index_out);
    if (*run) return CmdRun(run_flags.Build(), topics, run_out);
    if (*eval) {
      return CmdEval(run_file, qrels, eval_index, references, csv_out,
                     json_out, eval_config);
    }
    if (*converse) {
      const auto pipeline = Pipeline::Open(converse_flags.Build());
      Converse(*pipeline, std::cin, std::cout);
      return 0;
    }
    if (*serve) return CmdServe(serve_flags.Build(), host, port);
  } catch (const std::exception &e) {
    std::cerr << "convsearch: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace convsearch

int main(int argc, char **argv) { return convsearch::Main(argc, argv); }
