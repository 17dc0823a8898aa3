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

#include "convsearch/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "convsearch/error.h"
#include "convsearch/stemmer.h"
#include "convsearch/text_index.h"
#include "json.hpp"

namespace convsearch {
namespace {

using ojson = nlohmann::ordered_json;

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts CountNgrams(Tokens tokens, int n) {
  NgramCounts counts;
  const auto len = static_cast<std::size_t>(n);
  if (tokens.size() < len) return counts;
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i,
                                      tokens.begin() + i + len)];
  }
  return counts;
}

std::size_t NgramTotal(Tokens tokens, int n) {
  const auto len = static_cast<std::size_t>(n);
  return tokens.size() >= len ? tokens.size() - len + 1 : 0;
}

PrecisionRecall FromCounts(std::size_t overlap, std::size_t cand_total,
                           std::size_t ref_total) {
  PrecisionRecall out;
  if (cand_total == 0 || ref_total == 0) return out;
  out.precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
  out.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

void CheckOrder(int n) {
  if (n < 1) throw InvalidArgument("n-gram order must be at least 1");
}

double BleuFromCounts(const std::vector<std::size_t> &matches,
                      const std::vector<std::size_t> &totals,
                      std::size_t cand_len, std::size_t ref_len) {
  if (cand_len == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const double p =
        matches[i] == 0
            ? 1.0 / (static_cast<double>(totals[i]) + 1.0)
            : static_cast<double>(matches[i]) / static_cast<double>(totals[i]);
    log_sum += std::log(p);
  }
  const double geo = std::exp(log_sum / static_cast<double>(matches.size()));
  const double bp =
      cand_len < ref_len
          ? std::exp(1.0 - static_cast<double>(ref_len) /
                               static_cast<double>(cand_len))
          : 1.0;
  return bp * geo;
}

void CheckBleuOrder(int max_n) {
  if (max_n < 1 || max_n > 4) {
    throw InvalidArgument("bleu: max_n must lie in 1..4");
  }
}

void AlignStage(Tokens candidate, Tokens reference,
                const std::vector<std::string> &cand_keys,
                const std::vector<std::string> &ref_keys,
                std::vector<long> &align, std::vector<bool> &ref_used) {
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (align[i] >= 0) continue;
    long chosen = -1;
    if (i > 0 && align[i - 1] >= 0) {
      const auto next = static_cast<std::size_t>(align[i - 1] + 1);
      if (next < reference.size() && !ref_used[next] &&
          ref_keys[next] == cand_keys[i]) {
        chosen = static_cast<long>(next);
      }
    }
    if (chosen < 0) {
      for (std::size_t j = 0; j < reference.size(); ++j) {
        if (!ref_used[j] && ref_keys[j] == cand_keys[i]) {
          chosen = static_cast<long>(j);
          break;
        }
      }
    }
    if (chosen >= 0) {
      align[i] = chosen;
      ref_used[static_cast<std::size_t>(chosen)] = true;
    }
  }
}

double Mean(const std::vector<double> &v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

MetricValues MeanOf(const std::vector<const MetricValues *> &rows) {
  MetricValues out;
  for (std::size_t m = 0; m < MetricNames().size(); ++m) {
    std::vector<double> column;
    for (const MetricValues *r : rows) column.push_back((*r)[m].second);
    out.emplace_back(MetricNames()[m], Mean(column));
  }
  return out;
}

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

ojson ValuesToJson(const MetricValues &values) {
  ojson out = ojson::object();
  for (const auto &[name, v] : values) out[name] = v;
  return out;
}

TurnKey ParseTurnKey(const std::string &s, const std::string &path, int line) {
  const std::size_t us = s.rfind('_');
  if (us == std::string::npos || us == 0 || us + 1 == s.size()) {
    throw ParseError(path, line, "expected <topic>_<turn>, got '" + s + "'");
  }
  TurnKey key;
  key.topic = s.substr(0, us);
  try {
    std::size_t used = 0;
    key.turn = std::stoi(s.substr(us + 1), &used);
    if (used != s.size() - us - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception &) {
    throw ParseError(path, line, "bad turn number in '" + s + "'");
  }
  return key;
}

}  // namespace

std::size_t NgramOverlap(Tokens candidate, Tokens reference, int n) {
  CheckOrder(n);
  const NgramCounts cand = CountNgrams(candidate, n);
  const NgramCounts ref = CountNgrams(reference, n);
  std::size_t overlap = 0;
  for (const auto &[gram, c] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(c, it->second);
  }
  return overlap;
}

PrecisionRecall RougeN(Tokens candidate, Tokens reference, int n) {
  CheckOrder(n);
  return FromCounts(NgramOverlap(candidate, reference, n),
                    NgramTotal(candidate, n), NgramTotal(reference, n));
}

PrecisionRecall RougeN(std::string_view candidate, std::string_view reference,
                       int n) {
  const auto c = Tokenize(candidate);
  const auto r = Tokenize(reference);
  return RougeN(Tokens(c), Tokens(r), n);
}

std::size_t LcsLength(Tokens a, Tokens b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

PrecisionRecall RougeL(Tokens candidate, Tokens reference) {
  return FromCounts(LcsLength(candidate, reference), candidate.size(),
                    reference.size());
}

PrecisionRecall RougeL(std::string_view candidate, std::string_view reference) {
  const auto c = Tokenize(candidate);
  const auto r = Tokenize(reference);
  return RougeL(Tokens(c), Tokens(r));
}

double Bleu(Tokens candidate, Tokens reference, int max_n) {
  CheckBleuOrder(max_n);
  std::vector<std::size_t> matches;
  std::vector<std::size_t> totals;
  for (int n = 1; n <= max_n; ++n) {
    matches.push_back(NgramOverlap(candidate, reference, n));
    totals.push_back(NgramTotal(candidate, n));
  }
  return BleuFromCounts(matches, totals, candidate.size(), reference.size());
}

double Bleu(std::string_view candidate, std::string_view reference,
            int max_n) {
  const auto c = Tokenize(candidate);
  const auto r = Tokenize(reference);
  return Bleu(Tokens(c), Tokens(r), max_n);
}

double BleuMulti(Tokens candidate,
                 std::span<const std::vector<std::string>> references,
                 int max_n) {
  CheckBleuOrder(max_n);
  if (references.empty()) return 0.0;
  std::vector<std::size_t> matches;
  std::vector<std::size_t> totals;
  for (int n = 1; n <= max_n; ++n) {
    const NgramCounts cand = CountNgrams(candidate, n);
    NgramCounts max_ref;
    for (const auto &ref : references) {
      for (const auto &[gram, c] : CountNgrams(ref, n)) {
        auto &slot = max_ref[gram];
        slot = std::max(slot, c);
      }
    }
    std::size_t m = 0;
    for (const auto &[gram, c] : cand) {
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) m += std::min(c, it->second);
    }
    matches.push_back(m);
    totals.push_back(NgramTotal(candidate, n));
  }
  std::size_t best = references[0].size();
  for (const auto &ref : references) {
    const auto diff = [&](std::size_t len) {
      return len > candidate.size() ? len - candidate.size()
                                    : candidate.size() - len;
    };
    if (diff(ref.size()) < diff(best) ||
        (diff(ref.size()) == diff(best) && ref.size() < best)) {
      best = ref.size();
    }
  }
  return BleuFromCounts(matches, totals, candidate.size(), best);
}

MeteorAlignment MeteorAlign(Tokens candidate, Tokens reference) {
  std::vector<long> align(candidate.size(), -1);
  std::vector<bool> ref_used(reference.size(), false);
  const std::vector<std::string> cand_words(candidate.begin(), candidate.end());
  const std::vector<std::string> ref_words(reference.begin(), reference.end());
  AlignStage(candidate, reference, cand_words, ref_words, align, ref_used);

  std::vector<std::string> cand_stems;
  std::vector<std::string> ref_stems;
  for (const auto &w : candidate) cand_stems.push_back(DefaultStemmer().Stem(w));
  for (const auto &w : reference) ref_stems.push_back(DefaultStemmer().Stem(w));
  AlignStage(candidate, reference, cand_stems, ref_stems, align, ref_used);

  MeteorAlignment out;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (align[i] < 0) continue;
    ++out.matches;
    const bool continues =
        i > 0 && align[i - 1] >= 0 && align[i] == align[i - 1] + 1;
    if (!continues) ++out.chunks;
  }
  return out;
}

double MeteorLite(Tokens candidate, Tokens reference) {
  const MeteorAlignment a = MeteorAlign(candidate, reference);
  if (a.matches == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double p = m / static_cast<double>(candidate.size());
  const double r = m / static_cast<double>(reference.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(a.chunks) / m;
  const double penalty = 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

double MeteorLite(std::string_view candidate, std::string_view reference) {
  const auto c = Tokenize(candidate);
  const auto r = Tokenize(reference);
  return MeteorLite(Tokens(c), Tokens(r));
}

double NdcgAtK(std::span<const std::string> ranked, const Judgments &judged,
               int k) {
  if (k < 1) throw InvalidArgument("ndcg: k must be at least 1");
  const auto gain = [](int grade) { return std::exp2(grade) - 1.0; };
  const auto kk = static_cast<std::size_t>(k);
  double dcg = 0.0;
  for (std::size_t r = 0; r < std::min(kk, ranked.size()); ++r) {
    auto it = judged.find(ranked[r]);
    const int grade = it == judged.end() ? 0 : it->second;
    dcg += gain(grade) / std::log2(static_cast<double>(r) + 2.0);
  }
  std::vector<int> grades;
  for (const auto &[id, g] : judged) grades.push_back(g);
  std::sort(grades.rbegin(), grades.rend());
  double ideal = 0.0;
  for (std::size_t r = 0; r < std::min(kk, grades.size()); ++r) {
    ideal += gain(grades[r]) / std::log2(static_cast<double>(r) + 2.0);
  }
  return ideal > 0.0 ? dcg / ideal : 0.0;
}

double AveragePrecision(std::span<const std::string> ranked,
                        const Judgments &judged, int cutoff) {
  std::size_t relevant = 0;
  for (const auto &[id, g] : judged) relevant += g >= cutoff ? 1 : 0;
  if (relevant == 0) return 0.0;
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    auto it = judged.find(ranked[r]);
    if (it != judged.end() && it->second >= cutoff) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(relevant);
}

double ReciprocalRank(std::span<const std::string> ranked,
                      const Judgments &judged, int cutoff) {
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    auto it = judged.find(ranked[r]);
    if (it != judged.end() && it->second >= cutoff) {
      return 1.0 / static_cast<double>(r + 1);
    }
  }
  return 0.0;
}

void QRels::Add(const TurnKey &key, const std::string &passage_id, int grade) {
  if (grade < 0 || grade > 4) {
    throw InvalidArgument("qrels: grade " + std::to_string(grade) +
                          " outside 0..4");
  }
  if (!turns_[key].emplace(passage_id, grade).second) {
    throw InvalidArgument("qrels: repeated judgment for " + key.topic + "_" +
                          std::to_string(key.turn) + " " + passage_id);
  }
}

const Judgments *QRels::Find(const TurnKey &key) const {
  auto it = turns_.find(key);
  return it == turns_.end() ? nullptr : &it->second;
}

std::vector<std::string> QRels::Topics() const {
  std::set<std::string> topics;
  for (const auto &[key, j] : turns_) topics.insert(key.topic);
  return {topics.begin(), topics.end()};
}

QRels LoadQRels(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open qrels " + path.string());
  QRels qrels;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string key, q0, passage, grade_str, extra;
    if (!(fields >> key)) continue;
    if (!(fields >> q0 >> passage >> grade_str) || (fields >> extra)) {
      throw ParseError(path.string(), lineno,
                       "expected '<topic>_<turn> Q0 <passage_id> <grade>'");
    }
    int grade = 0;
    try {
      std::size_t used = 0;
      grade = std::stoi(grade_str, &used);
      if (used != grade_str.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception &) {
      throw ParseError(path.string(), lineno, "bad grade '" + grade_str + "'");
    }
    try {
      qrels.Add(ParseTurnKey(key, path.string(), lineno), passage, grade);
    } catch (const InvalidArgument &e) {
      throw ParseError(path.string(), lineno, e.what());
    }
  }
  return qrels;
}

ReferenceSet BuildReferences(const QRels &qrels, const PassageStore &passages,
                             int min_grade, std::size_t *missing) {
  ReferenceSet out;
  std::size_t absent = 0;
  for (const auto &[key, judged] : qrels.turns()) {
    ReferenceTexts ref;
    for (const auto &[id, grade] : judged) {
      if (grade < min_grade) continue;
      const PassageRecord *p = passages.Find(id);
      if (p == nullptr) {
        ++absent;
        continue;
      }
      ref.passages.push_back(p->text);
    }
    if (ref.passages.empty()) continue;
    for (std::size_t i = 0; i < ref.passages.size(); ++i) {
      if (i > 0) ref.concatenated += ' ';
      ref.concatenated += ref.passages[i];
    }
    out.emplace(key, std::move(ref));
  }
  if (missing != nullptr) *missing = absent;
  return out;
}

ReferenceSet LoadReferences(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open references " + path.string());
  ReferenceSet out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TurnKey key{j.at("topic").get<std::string>(), j.at("turn").get<int>()};
      ReferenceTexts ref;
      ref.passages = j.at("passages").get<std::vector<std::string>>();
      for (std::size_t i = 0; i < ref.passages.size(); ++i) {
        if (i > 0) ref.concatenated += ' ';
        ref.concatenated += ref.passages[i];
      }
      out[key] = std::move(ref);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(path.string(), lineno, e.what());
    }
  }
  return out;
}

std::string RunRecordToJson(const RunRecord &r) {
  ojson j;
  j["topic"] = r.topic;
  j["turn"] = r.turn;
  j["raw_query"] = r.raw_query;
  j["prompt"] = r.prompt;
  j["rewritten_query"] = r.rewritten_query;
  j["ranked"] = r.ranked;
  j["method"] = r.method;
  j["selected"] = r.selected;
  j["answer"] = r.answer;
  j["answer_words"] = r.answer_words;
  return j.dump();
}

RunRecord RunRecordFromJson(std::string_view line) {
  const auto j = nlohmann::json::parse(line);
  RunRecord r;
  r.topic = j.at("topic").get<std::string>();
  r.turn = j.at("turn").get<int>();
  r.raw_query = j.value("raw_query", std::string());
  r.prompt = j.value("prompt", std::string());
  r.rewritten_query = j.at("rewritten_query").get<std::string>();
  r.ranked = j.at("ranked").get<std::vector<std::string>>();
  r.method = j.value("method", std::string());
  r.selected = j.value("selected", std::vector<std::string>());
  r.answer = j.at("answer").get<std::string>();
  r.answer_words = j.contains("answer_words")
                       ? j["answer_words"].get<std::size_t>()
                       : CountWords(r.answer);
  return r;
}

std::vector<RunRecord> ReadRunFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open run file " + path.string());
  std::vector<RunRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(RunRecordFromJson(line));
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(path.string(), lineno, e.what());
    }
  }
  return out;
}

const std::vector<std::string> &MetricNames() {
  static const std::vector<std::string> names = {
      "answer_words", "rouge1_p",    "rouge1_r",    "rouge1_f",
      "rouge2_p",     "rouge2_r",    "rouge2_f",    "rougeL_p",
      "rougeL_r",     "rougeL_f",    "bleu1",       "bleu4",
      "bleu1_multi",  "bleu4_multi", "meteor",      "ndcg_cut",
      "map",          "mrr"};
  return names;
}

MetricReport EvaluateRun(std::span<const RunRecord> run, const QRels &qrels,
                         const ReferenceSet &references,
                         const EvalConfig &config) {
  if (run.empty()) throw InvalidArgument("eval: run is empty");

  std::vector<const RunRecord *> records;
  for (const auto &r : run) records.push_back(&r);
  std::sort(records.begin(), records.end(),
            [](const RunRecord *a, const RunRecord *b) {
              return TurnKey{a->topic, a->turn} < TurnKey{b->topic, b->turn};
            });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i]->topic == records[i - 1]->topic &&
        records[i]->turn == records[i - 1]->turn) {
      throw InvalidArgument("eval: duplicate run entry for " +
                            records[i]->topic + "_" +
                            std::to_string(records[i]->turn));
    }
  }

  std::set<std::string> run_topics;
  for (const auto *r : records) run_topics.insert(r->topic);
  const auto qrel_list = qrels.Topics();
  const std::set<std::string> qrel_topics(qrel_list.begin(), qrel_list.end());
  std::vector<std::string> missing;
  for (const auto &t : run_topics) {
    if (!qrel_topics.count(t)) missing.push_back("qrels lack topic " + t);
  }
  for (const auto &t : qrel_topics) {
    if (!run_topics.count(t)) missing.push_back("run lacks topic " + t);
  }
  if (!missing.empty()) {
    std::string msg = "eval: run and qrels cover different topics:";
    for (const auto &m : missing) msg += " [" + m + "]";
    throw InvalidArgument(msg);
  }

  MetricReport report;
  static const Judgments kNoJudgments;
  for (const RunRecord *r : records) {
    TurnMetrics tm;
    tm.key = {r->topic, r->turn};
    const Judgments *judged = qrels.Find(tm.key);
    tm.judged = judged != nullptr;
    if (judged == nullptr) judged = &kNoJudgments;

    auto ref_it = references.find(tm.key);
    const ReferenceTexts empty_ref;
    const ReferenceTexts &ref =
        ref_it == references.end() ? empty_ref : ref_it->second;

    const auto cand = Tokenize(r->answer);
    const auto ref_tokens = Tokenize(ref.concatenated);
    std::vector<std::vector<std::string>> per_passage;
    for (const auto &p : ref.passages) per_passage.push_back(Tokenize(p));

    const auto r1 = RougeN(Tokens(cand), Tokens(ref_tokens), 1);
    const auto r2 = RougeN(Tokens(cand), Tokens(ref_tokens), 2);
    const auto rl = RougeL(Tokens(cand), Tokens(ref_tokens));
    tm.values = {
        {"answer_words", static_cast<double>(r->answer_words)},
        {"rouge1_p", r1.precision},
        {"rouge1_r", r1.recall},
        {"rouge1_f", r1.f1},
        {"rouge2_p", r2.precision},
        {"rouge2_r", r2.recall},
        {"rouge2_f", r2.f1},
        {"rougeL_p", rl.precision},
        {"rougeL_r", rl.recall},
        {"rougeL_f", rl.f1},
        {"bleu1", ref_tokens.empty() ? 0.0 : Bleu(Tokens(cand), ref_tokens, 1)},
        {"bleu4", ref_tokens.empty() ? 0.0 : Bleu(Tokens(cand), ref_tokens, 4)},
        {"bleu1_multi", BleuMulti(Tokens(cand), per_passage, 1)},
        {"bleu4_multi", BleuMulti(Tokens(cand), per_passage, 4)},
        {"meteor", MeteorLite(Tokens(cand), Tokens(ref_tokens))},
        {"ndcg_cut", NdcgAtK(r->ranked, *judged, config.ndcg_k)},
        {"map", AveragePrecision(r->ranked, *judged, config.relevance_cutoff)},
        {"mrr", ReciprocalRank(r->ranked, *judged, config.relevance_cutoff)},
    };
    report.turns.push_back(std::move(tm));
  }

  std::map<std::string, std::vector<const MetricValues *>> by_topic;
  std::vector<const MetricValues *> judged_rows;
  for (const auto &tm : report.turns) {
    if (!tm.judged) continue;
    by_topic[tm.key.topic].push_back(&tm.values);
    judged_rows.push_back(&tm.values);
  }
  report.judged_turns = judged_rows.size();
  report.turn_mean = MeanOf(judged_rows);
  std::vector<const MetricValues *> topic_rows;
  for (const auto &[topic, rows] : by_topic) {
    report.topic_means[topic] = MeanOf(rows);
  }
  for (const auto &[topic, values] : report.topic_means) {
    topic_rows.push_back(&values);
  }
  report.topic_mean = MeanOf(topic_rows);
  return report;
}

std::string ReportCsv(const MetricReport &report) {
  std::string out = "topic,turn,judged";
  for (const auto &name : MetricNames()) out += "," + name;
  out += '\n';
  for (const auto &tm : report.turns) {
    out += tm.key.topic + "," + std::to_string(tm.key.turn) + "," +
           (tm.judged ? "1" : "0");
    for (const auto &[name, v] : tm.values) out += "," + FormatNumber(v);
    out += '\n';
  }
  return out;
}

std::string ReportJson(const MetricReport &report) {
  ojson j;
  j["turns"] = report.turns.size();
  j["judged_turns"] = report.judged_turns;
  j["mean_over_turns"] = ValuesToJson(report.turn_mean);
  j["mean_over_topics"] = ValuesToJson(report.topic_mean);
  ojson topics = ojson::object();
  for (const auto &[topic, values] : report.topic_means) {
    topics[topic] = ValuesToJson(values);
  }
  j["topics"] = std::move(topics);
  return j.dump(2) + "\n";
}

}  // namespace convsearch
