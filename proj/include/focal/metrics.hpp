#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "focal/backend.hpp"
#include "focal/pipeline.hpp"
#include "focal/prompts.hpp"
#include "focal/session.hpp"

namespace focal {

struct KirCounts {
  std::int64_t correct = 0;   // recalled under the right task
  std::int64_t wrong = 0;     // recalled only under another task
  std::int64_t missing = 0;
  double lambda = 2.0;        // wrong-task penalty weight

  std::int64_t total() const { return correct + wrong + missing; }
  bool operator==(const KirCounts&) const = default;
};

/// correct / (correct + lambda * wrong + missing). Errors on zero points.
double kir(const KirCounts& counts);

/// Mean vision calls per session.
double vcc(const std::vector<RunResult>& results);

/// Fraction of sessions whose predicted task count equals the ground truth.
double taskAcc(const std::vector<RunResult>& results,
               const std::vector<GroundTruth>& truths);

struct JudgeOptions {
  PromptTemplates templates = PromptTemplates::builtin();
  int retries = 2;  // attempts at parsing a judge reply
};

/// Classifies every ground-truth key point. The judge picks, per task, the
/// matched predicted summaries; a point counts correct when some matched
/// summary contains it, wrong when only an unmatched summary does, missing
/// otherwise. Matched presence wins over wrong-task presence.
KirCounts matchKeyPoints(const GroundTruth& truth, const SessionSummary& summary,
                         Backend& judge, TokenLedger& judgeLedger,
                         const JudgeOptions& options, double lambda = 2.0);

struct GEvalScores {
  int accuracy = 0;
  int coverage = 0;
  int conciseness = 0;
  int consistency = 0;
  int clarity = 0;

  double mean() const {
    return (accuracy + coverage + conciseness + consistency + clarity) / 5.0;
  }
  bool operator==(const GEvalScores&) const = default;
};

/// One judge call scoring the summary against the reference on five 1-5
/// dimensions. Replies outside [1, 5] or missing a dimension are parse
/// errors, retried up to options.retries times.
GEvalScores gEval(const std::string& summaryText, const std::string& referenceText,
                  Backend& judge, TokenLedger& judgeLedger, const JudgeOptions& options);

class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual double score(const std::string& candidate, const std::string& reference) = 0;
  virtual const char* name() const = 0;
};

/// Shipped fallback: harmonic mean of token-set precision and recall.
/// An embedding-based scorer can slot in behind the same interface.
class TokenOverlapScorer : public SimilarityScorer {
 public:
  double score(const std::string& candidate, const std::string& reference) override;
  const char* name() const override { return "token-f1"; }
};

struct SessionMetrics {
  std::string sessionId;
  std::int64_t vlmCallCount = 0;
  std::int64_t tcs = 0;
  std::int64_t brainTokens = 0;
  std::int64_t recordTokens = 0;
  std::int64_t summaryTokens = 0;
  int taskAccHit = 0;
  KirCounts kirCounts;
  double kirValue = 0.0;
  double gevalMean = 0.0;
  double similarity = 0.0;
};

struct MetricsAggregates {
  double vcc = 0.0;
  double tcs = 0.0;
  double brainTokens = 0.0;
  double recordTokens = 0.0;
  double summaryTokens = 0.0;
  double taskAcc = 0.0;
  double kir = 0.0;
  double geval = 0.0;
  double similarity = 0.0;
};

struct MetricsReport {
  std::string split;
  std::string system;
  std::string scorer;
  std::vector<SessionMetrics> perSession;
  MetricsAggregates aggregates;  // always recomputable from perSession
};

/// Recomputes the aggregate block from the per-session rows.
MetricsAggregates aggregate(const std::vector<SessionMetrics>& rows);

/// Scores one run against its split. Sessions are matched to results by id;
/// every scored session needs ground truth.
MetricsReport evaluateRun(const std::vector<RunResult>& results,
                          const std::vector<Session>& sessions, Backend& judge,
                          SimilarityScorer& scorer, const JudgeOptions& options,
                          const std::string& split, const std::string& system,
                          double lambda = 2.0);

void saveReport(const MetricsReport& report, const std::filesystem::path& path);
MetricsReport loadReport(const std::filesystem::path& path);

/// Per-session table with an aggregate footer row.
std::string reportCsv(const MetricsReport& report);

}  // namespace focal
