#include "focal/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "nlohmann/json.hpp"

#include "focal/error.hpp"
#include "focal/util.hpp"

namespace focal {

double kir(const KirCounts& counts) {
  if (counts.correct < 0 || counts.wrong < 0 || counts.missing < 0)
    throw Error("negative key-point counts");
  const double denom = static_cast<double>(counts.correct) +
                       counts.lambda * static_cast<double>(counts.wrong) +
                       static_cast<double>(counts.missing);
  if (counts.total() == 0) throw Error("no key points to score");
  return static_cast<double>(counts.correct) / denom;
}

double vcc(const std::vector<RunResult>& results) {
  if (results.empty()) throw Error("no runs to average");
  std::int64_t total = 0;
  for (const auto& r : results) total += r.vlmCallCount;
  return static_cast<double>(total) / static_cast<double>(results.size());
}

double taskAcc(const std::vector<RunResult>& results,
               const std::vector<GroundTruth>& truths) {
  if (results.empty()) throw Error("no runs to average");
  if (results.size() != truths.size())
    throw Error("run/truth count mismatch");
  std::int64_t hits = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].summary.predictedTaskCount == truths[i].taskCount) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

namespace {

// Runs one judge call and retries when the parser rejects the reply.
// Transport failures propagate; only malformed replies are retried.
std::string judgeCall(Backend& judge, TokenLedger& ledger, const std::string& prompt,
                      int retries, bool (*accept)(const std::string&),
                      const char* what) {
  if (retries < 1) throw Error("judge retries must be at least 1");
  std::string last;
  for (int attempt = 0; attempt < retries; ++attempt) {
    BackendRequest req;
    req.agentTag = AgentTag::judge;
    req.promptText = prompt;
    BackendResponse resp = judge.complete(req);
    ledger.record(AgentTag::judge, resp.usage);
    if (accept(resp.text)) return resp.text;
    last = resp.text;
  }
  throw Error(std::string("judge reply unusable after retries: ") + what +
              ": " + last);
}

// "1,3" or "NONE" on the last non-empty line.
bool acceptMatchReply(const std::string& text) {
  std::string line;
  for (const auto& l : splitLines(text)) {
    if (!trim(l).empty()) line = trim(l);
  }
  if (line.empty()) return false;
  if (line == "NONE") return true;
  for (char ch : line) {
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == ',' || ch == ' '))
      return false;
  }
  return true;
}

std::vector<int> parseMatchReply(const std::string& text) {
  std::string line;
  for (const auto& l : splitLines(text)) {
    if (!trim(l).empty()) line = trim(l);
  }
  std::vector<int> out;
  if (line == "NONE") return out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    field = trim(field);
    if (field.empty()) continue;
    out.push_back(std::stoi(field));
  }
  return out;
}

bool parseScoreLine(const std::string& text, const std::string& label, int* out) {
  for (const auto& l : splitLines(text)) {
    const std::string line = trim(l);
    if (!startsWith(line, label + ":")) continue;
    const std::string value = trim(line.substr(label.size() + 1));
    try {
      const int score = std::stoi(value);
      if (score < 1 || score > 5) return false;
      *out = score;
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }
  return false;
}

bool acceptGevalReply(const std::string& text) {
  int dummy = 0;
  for (const char* label :
       {"ACCURACY", "COVERAGE", "CONCISENESS", "CONSISTENCY", "CLARITY"}) {
    if (!parseScoreLine(text, label, &dummy)) return false;
  }
  return true;
}

}  // namespace

KirCounts matchKeyPoints(const GroundTruth& truth, const SessionSummary& summary,
                         Backend& judge, TokenLedger& judgeLedger,
                         const JudgeOptions& options, double lambda) {
  KirCounts counts;
  counts.lambda = lambda;
  if (truth.taskKeyPoints.empty()) throw Error("ground truth has no key points");

  // Candidate list is shared across all tasks of the session.
  std::string candidates;
  for (const auto& [taskId, text] : summary.taskSummaries) {
    candidates += std::to_string(taskId) + ": " + text + "\n";
  }
  if (candidates.empty()) candidates = "(no summaries)\n";

  for (std::size_t t = 0; t < truth.taskKeyPoints.size(); ++t) {
    const std::int32_t taskId = static_cast<std::int32_t>(t) + 1;
    const auto& keyPoints = truth.taskKeyPoints[t];
    if (keyPoints.empty()) throw Error("task " + std::to_string(taskId) +
                                       " has no key points");
    const std::string anchor = keyPoints.front();
    std::string reference;
    if (t < truth.referenceSummaries.size()) reference = truth.referenceSummaries[t];

    std::set<int> matched;
    if (!summary.taskSummaries.empty()) {
      std::map<std::string, std::string> vars;
      vars["anchor"] = anchor;
      vars["reference"] = reference;
      vars["candidates"] = candidates;
      const std::string prompt = renderTemplate(options.templates.judgeMatch, vars);
      const std::string reply = judgeCall(judge, judgeLedger, prompt,
                                          options.retries, acceptMatchReply,
                                          "task match");
      for (int id : parseMatchReply(reply)) matched.insert(id);
    }

    for (const auto& point : keyPoints) {
      bool inMatched = false;
      bool inOther = false;
      for (const auto& [candId, text] : summary.taskSummaries) {
        if (text.find(point) == std::string::npos) continue;
        if (matched.count(candId))
          inMatched = true;
        else
          inOther = true;
      }
      if (inMatched)
        ++counts.correct;  // matched presence wins even if echoed elsewhere
      else if (inOther)
        ++counts.wrong;
      else
        ++counts.missing;
    }
  }
  return counts;
}

GEvalScores gEval(const std::string& summaryText, const std::string& referenceText,
                  Backend& judge, TokenLedger& judgeLedger,
                  const JudgeOptions& options) {
  std::map<std::string, std::string> vars;
  vars["summary"] = summaryText;
  vars["reference"] = referenceText;
  const std::string prompt = renderTemplate(options.templates.judgeGeval, vars);
  const std::string reply = judgeCall(judge, judgeLedger, prompt, options.retries,
                                      acceptGevalReply, "summary rating");
  GEvalScores scores;
  parseScoreLine(reply, "ACCURACY", &scores.accuracy);
  parseScoreLine(reply, "COVERAGE", &scores.coverage);
  parseScoreLine(reply, "CONCISENESS", &scores.conciseness);
  parseScoreLine(reply, "CONSISTENCY", &scores.consistency);
  parseScoreLine(reply, "CLARITY", &scores.clarity);
  return scores;
}

double TokenOverlapScorer::score(const std::string& candidate,
                                 const std::string& reference) {
  return tokenSetF1(candidate, reference);
}

MetricsAggregates aggregate(const std::vector<SessionMetrics>& rows) {
  if (rows.empty()) throw Error("no rows to aggregate");
  MetricsAggregates agg;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    agg.vcc += static_cast<double>(r.vlmCallCount);
    agg.tcs += static_cast<double>(r.tcs);
    agg.brainTokens += static_cast<double>(r.brainTokens);
    agg.recordTokens += static_cast<double>(r.recordTokens);
    agg.summaryTokens += static_cast<double>(r.summaryTokens);
    agg.taskAcc += static_cast<double>(r.taskAccHit);
    agg.kir += r.kirValue;
    agg.geval += r.gevalMean;
    agg.similarity += r.similarity;
  }
  agg.vcc /= n;
  agg.tcs /= n;
  agg.brainTokens /= n;
  agg.recordTokens /= n;
  agg.summaryTokens /= n;
  agg.taskAcc /= n;
  agg.kir /= n;
  agg.geval /= n;
  agg.similarity /= n;
  return agg;
}

namespace {

// Mean pairwise similarity between predicted and reference summaries after
// greedy 1:1 alignment on score. Unmatched entries on either side score 0
// against an implicit empty partner, so over- and under-segmentation both
// lower the mean.
double sessionSimilarity(const SessionSummary& summary, const GroundTruth& truth,
                         SimilarityScorer& scorer) {
  std::vector<std::string> predicted;
  for (const auto& [id, text] : summary.taskSummaries) predicted.push_back(text);
  const std::vector<std::string>& reference = truth.referenceSummaries;
  if (reference.empty()) throw Error("ground truth has no reference summaries");

  struct Pair {
    double score;
    std::size_t pred;
    std::size_t ref;
  };
  std::vector<Pair> pairs;
  for (std::size_t p = 0; p < predicted.size(); ++p)
    for (std::size_t r = 0; r < reference.size(); ++r)
      pairs.push_back({scorer.score(predicted[p], reference[r]), p, r});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.ref < b.ref;
  });

  std::vector<bool> predUsed(predicted.size(), false);
  std::vector<bool> refUsed(reference.size(), false);
  double total = 0.0;
  for (const auto& pr : pairs) {
    if (predUsed[pr.pred] || refUsed[pr.ref]) continue;
    predUsed[pr.pred] = true;
    refUsed[pr.ref] = true;
    total += pr.score;
  }
  const std::size_t slots = std::max(predicted.size(), reference.size());
  return total / static_cast<double>(slots);
}

}  // namespace

MetricsReport evaluateRun(const std::vector<RunResult>& results,
                          const std::vector<Session>& sessions, Backend& judge,
                          SimilarityScorer& scorer, const JudgeOptions& options,
                          const std::string& split, const std::string& system,
                          double lambda) {
  if (results.empty()) throw Error("no runs to evaluate");
  std::map<std::string, const Session*> byId;
  for (const auto& s : sessions) byId[s.id] = &s;

  MetricsReport report;
  report.split = split;
  report.system = system;
  report.scorer = scorer.name();

  for (const auto& result : results) {
    auto it = byId.find(result.sessionId);
    if (it == byId.end())
      throw Error("no session for run " + result.sessionId);
    const Session& session = *it->second;
    if (!session.groundTruth)
      throw Error("session " + session.id + " has no ground truth");
    const GroundTruth& truth = *session.groundTruth;

    SessionMetrics row;
    row.sessionId = result.sessionId;
    row.vlmCallCount = result.vlmCallCount;
    row.tcs = result.ledger.tcs();
    row.brainTokens = result.ledger.brainTokens();
    row.recordTokens = result.ledger.recordTokens();
    row.summaryTokens = result.ledger.summaryTokens();
    row.taskAccHit =
        result.summary.predictedTaskCount == truth.taskCount ? 1 : 0;

    TokenLedger judgeLedger;
    row.kirCounts =
        matchKeyPoints(truth, result.summary, judge, judgeLedger, options, lambda);
    row.kirValue = kir(row.kirCounts);

    double gevalTotal = 0.0;
    int gevalCalls = 0;
    for (std::size_t t = 0; t < truth.referenceSummaries.size(); ++t) {
      const std::int32_t taskId = static_cast<std::int32_t>(t) + 1;
      // Rate the predicted summary paired with this reference slot when one
      // exists; a missing prediction is rated as an empty summary.
      std::string predicted;
      for (const auto& [candId, text] : result.summary.taskSummaries) {
        if (candId == taskId) predicted = text;
      }
      GEvalScores scores = gEval(predicted, truth.referenceSummaries[t], judge,
                                 judgeLedger, options);
      gevalTotal += scores.mean();
      ++gevalCalls;
    }
    row.gevalMean = gevalCalls > 0 ? gevalTotal / gevalCalls : 0.0;
    row.similarity = sessionSimilarity(result.summary, truth, scorer);
    report.perSession.push_back(row);
  }

  report.aggregates = aggregate(report.perSession);
  return report;
}

void saveReport(const MetricsReport& report, const std::filesystem::path& path) {
  nlohmann::json j;
  j["split"] = report.split;
  j["system"] = report.system;
  j["scorer"] = report.scorer;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.perSession) {
    nlohmann::json row;
    row["session_id"] = r.sessionId;
    row["vlm_call_count"] = r.vlmCallCount;
    row["tcs"] = r.tcs;
    row["brain_tokens"] = r.brainTokens;
    row["record_tokens"] = r.recordTokens;
    row["summary_tokens"] = r.summaryTokens;
    row["task_acc_hit"] = r.taskAccHit;
    row["kir"] = r.kirValue;
    row["kir_counts"] = {{"correct", r.kirCounts.correct},
                         {"wrong", r.kirCounts.wrong},
                         {"missing", r.kirCounts.missing},
                         {"lambda", r.kirCounts.lambda}};
    row["geval"] = r.gevalMean;
    row["similarity"] = r.similarity;
    rows.push_back(row);
  }
  j["per_session"] = rows;
  j["aggregates"] = {
      {"vcc", report.aggregates.vcc},
      {"tcs", report.aggregates.tcs},
      {"brain_tokens", report.aggregates.brainTokens},
      {"record_tokens", report.aggregates.recordTokens},
      {"summary_tokens", report.aggregates.summaryTokens},
      {"task_acc", report.aggregates.taskAcc},
      {"kir", report.aggregates.kir},
      {"geval", report.aggregates.geval},
      {"similarity", report.aggregates.similarity},
  };
  writeTextFile(path, j.dump(2) + "\n");
}

MetricsReport loadReport(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(readTextFile(path));
  } catch (const nlohmann::json::exception&) {
    throw Error("malformed metrics report: " + path.string());
  }
  MetricsReport report;
  try {
    report.split = j.at("split").get<std::string>();
    report.system = j.at("system").get<std::string>();
    report.scorer = j.at("scorer").get<std::string>();
    for (const auto& row : j.at("per_session")) {
      SessionMetrics r;
      r.sessionId = row.at("session_id").get<std::string>();
      r.vlmCallCount = row.at("vlm_call_count").get<std::int64_t>();
      r.tcs = row.at("tcs").get<std::int64_t>();
      r.brainTokens = row.at("brain_tokens").get<std::int64_t>();
      r.recordTokens = row.at("record_tokens").get<std::int64_t>();
      r.summaryTokens = row.at("summary_tokens").get<std::int64_t>();
      r.taskAccHit = row.at("task_acc_hit").get<int>();
      r.kirValue = row.at("kir").get<double>();
      const auto& kc = row.at("kir_counts");
      r.kirCounts.correct = kc.at("correct").get<std::int64_t>();
      r.kirCounts.wrong = kc.at("wrong").get<std::int64_t>();
      r.kirCounts.missing = kc.at("missing").get<std::int64_t>();
      r.kirCounts.lambda = kc.at("lambda").get<double>();
      r.gevalMean = row.at("geval").get<double>();
      r.similarity = row.at("similarity").get<double>();
      report.perSession.push_back(r);
    }
  } catch (const nlohmann::json::exception&) {
    throw Error("malformed metrics report: " + path.string());
  }
  if (report.perSession.empty())
    throw Error("malformed metrics report: " + path.string());
  report.aggregates = aggregate(report.perSession);
  return report;
}

std::string reportCsv(const MetricsReport& report) {
  std::string out =
      "session_id,vlm_call_count,tcs,brain_tokens,record_tokens,summary_tokens,"
      "task_acc_hit,kir,geval,similarity\n";
  for (const auto& r : report.perSession) {
    out += r.sessionId + "," + std::to_string(r.vlmCallCount) + "," +
           std::to_string(r.tcs) + "," + std::to_string(r.brainTokens) + "," +
           std::to_string(r.recordTokens) + "," +
           std::to_string(r.summaryTokens) + "," +
           std::to_string(r.taskAccHit) + "," + formatFixed(r.kirValue, 4) +
           "," + formatFixed(r.gevalMean, 4) + "," +
           formatFixed(r.similarity, 4) + "\n";
  }
  const auto& a = report.aggregates;
  out += "MEAN," + formatFixed(a.vcc, 4) + "," + formatFixed(a.tcs, 4) + "," +
         formatFixed(a.brainTokens, 4) + "," + formatFixed(a.recordTokens, 4) +
         "," + formatFixed(a.summaryTokens, 4) + "," +
         formatFixed(a.taskAcc, 4) + "," + formatFixed(a.kir, 4) + "," +
         formatFixed(a.geval, 4) + "," + formatFixed(a.similarity, 4) + "\n";
  return out;
}

}  // namespace focal
