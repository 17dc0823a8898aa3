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

// Answer-generation metrics (ROUGE-1/2/L, BLEU-1/4, METEOR-lite), ranking
// metrics (nDCG@k, AP, RR) and run-level evaluation.
//
// All text metrics tokenize with Tokenize() from text_index.h; the
// token-span overloads take pre-tokenized input.

#ifndef CONVSEARCH_METRICS_H_
#define CONVSEARCH_METRICS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "convsearch/index_store.h"

namespace convsearch {

using Tokens = std::span<const std::string>;

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Clipped n-gram matches: sum over n-grams g of min(count_cand(g),
// count_ref(g)).
std::size_t NgramOverlap(Tokens candidate, Tokens reference, int n);

// All zero when either side has no n-grams. Throws InvalidArgument for n < 1.
PrecisionRecall RougeN(Tokens candidate, Tokens reference, int n);
PrecisionRecall RougeN(std::string_view candidate, std::string_view reference,
                       int n);

std::size_t LcsLength(Tokens a, Tokens b);
PrecisionRecall RougeL(Tokens candidate, Tokens reference);
PrecisionRecall RougeL(std::string_view candidate, std::string_view reference);

// Geometric mean of clipped precisions for orders 1..max_n times the brevity
// penalty exp(1 - r/c) when c < r. An order with no clipped match uses
// (0 + 1) / (total + 1). Empty candidates score 0. With several references
// counts are clipped by the per-reference maximum and r is the reference
// length closest to c (shorter on ties).
double Bleu(Tokens candidate, Tokens reference, int max_n);
double Bleu(std::string_view candidate, std::string_view reference, int max_n);
double BleuMulti(Tokens candidate,
                 std::span<const std::vector<std::string>> references,
                 int max_n);

// Unigram METEOR without synonym matching. Exact matches are aligned first,
// then stem matches; each candidate word prefers the reference position
// right after its predecessor's match, which keeps chunks long.
//   Fmean = 10PR / (R + 9P), penalty = 0.5 (chunks / matches)^3,
//   score = Fmean (1 - penalty).
struct MeteorAlignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};
MeteorAlignment MeteorAlign(Tokens candidate, Tokens reference);
double MeteorLite(Tokens candidate, Tokens reference);
double MeteorLite(std::string_view candidate, std::string_view reference);

// Judged grades of one turn, passage id -> grade.
using Judgments = std::map<std::string, int>;

// Exponential gain (2^g - 1) / log2(rank + 1) over the top k, normalised by
// the ideal ordering of every judged grade. 0 without relevant passages.
double NdcgAtK(std::span<const std::string> ranked, const Judgments &judged,
               int k);
// Relevance means grade >= cutoff.
double AveragePrecision(std::span<const std::string> ranked,
                        const Judgments &judged, int cutoff = 1);
double ReciprocalRank(std::span<const std::string> ranked,
                      const Judgments &judged, int cutoff = 1);

struct TurnKey {
  std::string topic;
  int turn = 0;

  auto operator<=>(const TurnKey &) const = default;
  bool operator==(const TurnKey &) const = default;
};

class QRels {
 public:
  // Throws InvalidArgument on an out-of-range grade or a repeated key.
  void Add(const TurnKey &key, const std::string &passage_id, int grade);

  const Judgments *Find(const TurnKey &key) const;
  const std::map<TurnKey, Judgments> &turns() const { return turns_; }
  std::vector<std::string> Topics() const;

 private:
  std::map<TurnKey, Judgments> turns_;
};

// TREC format: "<topic>_<turn> Q0 <passage_id> <grade>". Throws ParseError.
QRels LoadQRels(const std::filesystem::path &path);

struct ReferenceTexts {
  std::vector<std::string> passages;  // one per relevant passage, by id
  std::string concatenated;           // the same, joined by single spaces
};
using ReferenceSet = std::map<TurnKey, ReferenceTexts>;

// References from every passage with grade >= min_grade. Judged passages
// absent from the store are counted in *missing (if given) and skipped.
ReferenceSet BuildReferences(const QRels &qrels, const PassageStore &passages,
                             int min_grade = 3, std::size_t *missing = nullptr);

// JSONL {"topic", "turn", "passages": [texts]}.
ReferenceSet LoadReferences(const std::filesystem::path &path);

// One line of a run file.
struct RunRecord {
  std::string topic;
  int turn = 0;
  std::string raw_query;
  std::string prompt;
  std::string rewritten_query;
  std::vector<std::string> ranked;
  std::string method;
  std::vector<std::string> selected;
  std::string answer;
  std::size_t answer_words = 0;

  bool operator==(const RunRecord &) const = default;
};

// Serialized as one JSON object without a trailing newline. Field order is
// fixed so run files are byte-stable.
std::string RunRecordToJson(const RunRecord &record);
RunRecord RunRecordFromJson(std::string_view line);
// Throws ParseError with the line number.
std::vector<RunRecord> ReadRunFile(const std::filesystem::path &path);

struct EvalConfig {
  int ndcg_k = 3;
  int relevance_cutoff = 1;  // MAP / MRR
};

// Named metric values in a fixed order.
using MetricValues = std::vector<std::pair<std::string, double>>;

struct TurnMetrics {
  TurnKey key;
  bool judged = false;
  MetricValues values;
};

struct MetricReport {
  std::vector<TurnMetrics> turns;  // sorted by (topic, turn)
  std::map<std::string, MetricValues> topic_means;
  MetricValues turn_mean;   // mean over judged turns
  MetricValues topic_mean;  // mean of the topic means
  std::size_t judged_turns = 0;
};

// Metric names in report order.
const std::vector<std::string> &MetricNames();

// Generation metrics against the concatenated reference (BLEU also against
// each relevant passage as a separate reference, the "_multi" columns) and
// ranking metrics against the qrels. Turns without judgments are reported
// but left out of the means. Throws InvalidArgument for an empty run,
// duplicate turns, or topics present on only one side (listing them).
MetricReport EvaluateRun(std::span<const RunRecord> run, const QRels &qrels,
                         const ReferenceSet &references,
                         const EvalConfig &config = {});

// One row per (topic, turn).
std::string ReportCsv(const MetricReport &report);
std::string ReportJson(const MetricReport &report);

}  // namespace convsearch

#endif  // CONVSEARCH_METRICS_H_
