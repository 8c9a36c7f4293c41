// End-to-end acceptance checks. Each check prints one [PASS]/[FAIL] line
// (or [SKIP] for the network-gated one) and the binary exits nonzero if any
// check fails. Tolerances and time budgets are pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "focal/backend.hpp"
#include "focal/benchgen.hpp"
#include "focal/brain.hpp"
#include "focal/commands.hpp"
#include "focal/config.hpp"
#include "focal/error.hpp"
#include "focal/http_backend.hpp"
#include "focal/memory.hpp"
#include "focal/metrics.hpp"
#include "focal/mock_backend.hpp"
#include "focal/pipeline.hpp"
#include "focal/prompts.hpp"
#include "focal/report.hpp"
#include "focal/session.hpp"
#include "focal/taxonomy.hpp"
#include "focal/util.hpp"

using namespace focal;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& what) {
  if (!condition) throw CheckFailure(what);
}

std::filesystem::path workRoot() {
  return std::filesystem::temp_directory_path() / "focal_acceptance";
}

// ---------------------------------------------------------------------------
// 1. Token-cost fixtures and the published reduction percentages.

void checkCostFixtures() {
  TokenLedger planned;
  planned.record(AgentTag::brain, {0, 3744});
  planned.record(AgentTag::record, {0, 12873});
  planned.record(AgentTag::summary, {0, 1296});
  require(planned.tcs() == 17913,
          "planned-cost fixture: expected 17913, got " + std::to_string(planned.tcs()));

  TokenLedger fullCoverage;
  fullCoverage.record(AgentTag::record, {0, 42583});
  fullCoverage.record(AgentTag::summary, {0, 2657});
  require(fullCoverage.tcs() == 45240,
          "full-coverage fixture: expected 45240, got " +
              std::to_string(fullCoverage.tcs()));

  const double tcsCut = reductionPercent(45240.0, 17913.0);
  require(std::abs(tcsCut - 60.4) < 0.1,
          "session-cost reduction: expected 60.4 +/- 0.1, got " + formatFixed(tcsCut, 3));
  const double vccCut = reductionPercent(17.3, 4.8);
  require(std::abs(vccCut - 72.3) < 0.1,
          "call-count reduction: expected 72.3 +/- 0.1, got " + formatFixed(vccCut, 3));
}

// ---------------------------------------------------------------------------
// 2. Recall-ratio formula against brute-force enumeration.

void checkKirOracle() {
  for (int total = 1; total <= 12; ++total) {
    for (int c = 0; c <= total; ++c) {
      for (int w = 0; w + c <= total; ++w) {
        const int m = total - c - w;
        KirCounts counts;
        counts.correct = c;
        counts.wrong = w;
        counts.missing = m;
        counts.lambda = 2.0;
        const double direct =
            static_cast<double>(c) / (static_cast<double>(c) + 2.0 * w + m);
        const double got = kir(counts);
        require(got == direct, "formula mismatch at c=" + std::to_string(c) +
                                   " w=" + std::to_string(w) +
                                   " m=" + std::to_string(m));
        require(got >= 0.0 && got <= 1.0,
                "ratio out of range at c=" + std::to_string(c));

        // one wrong-task recall costs exactly two missing points
        KirCounts left = counts;
        left.wrong += 1;
        KirCounts right = counts;
        right.missing += 2;
        require(std::abs(kir(left) - kir(right)) < 1e-12,
                "penalty identity broken at c=" + std::to_string(c) +
                    " w=" + std::to_string(w) + " m=" + std::to_string(m));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 3. Memory isolation under randomized append sequences.

void checkMemoryIsolation() {
  Rng rng(424242);
  int violations = 0;
  for (int round = 0; round < 1000; ++round) {
    const int tasks = rng.nextInt(1, 6);
    MemoryStoreSet set(MemoryMode::isolated);
    for (int t = 1; t <= tasks; ++t) set.initTask(t);
    const int appends = rng.nextInt(0, 50);
    for (int i = 1; i <= appends; ++i) {
      const int task = rng.nextInt(1, tasks);
      set.appendTask(task, i, "task" + std::to_string(task) + " entry " +
                                   std::to_string(i));
    }
    for (const auto& [storeKey, entries] : set.rawStores()) {
      for (const auto& entry : entries) {
        if (entry.taskId != storeKey) ++violations;
      }
      // reads must agree with the provenance-checked store
      const auto visible = set.readTask(storeKey);
      if (visible.size() != entries.size()) ++violations;
    }
  }
  require(violations == 0,
          std::to_string(violations) + " provenance violations in 1000 rounds");
}

// ---------------------------------------------------------------------------
// 4. Interruption split: planned pipeline recovers the resumed task, the
// full-coverage baseline over-segments.

void checkInterruptionRecovery() {
  const auto sessions = generateInterruption(defaultPool(), 100, 8);
  require(sessions.size() == 100, "expected 100 interruption sessions");

  MockBackend backend;
  PipelineOptions options;
  options.useHeuristicPlanner = true;

  std::vector<RunResult> focalRuns;
  std::vector<RunResult> naiveRuns;
  std::vector<GroundTruth> truths;
  for (const auto& s : sessions) {
    focalRuns.push_back(runFocal(s, backend, MemoryMode::isolated, options));
    naiveRuns.push_back(runNaive(s, backend, options));
    truths.push_back(*s.groundTruth);
  }

  const double focalAcc = taskAcc(focalRuns, truths);
  require(focalAcc == 1.0,
          "planned pipeline task accuracy: expected 1.00, got " +
              formatFixed(focalAcc, 3));

  const double naiveAcc = taskAcc(naiveRuns, truths);
  require(naiveAcc <= 0.05,
          "full-coverage task accuracy: expected <= 0.05, got " +
              formatFixed(naiveAcc, 3));
}

// ---------------------------------------------------------------------------
// 5. Efficiency ordering on the multitask split.

void checkEfficiencyOrdering() {
  const auto sessions = generateMultitask(defaultPool(), defaultPatterns(), 320, 7);
  MockBackend backend;

  std::vector<RunResult> focalRuns;
  std::vector<RunResult> naiveRuns;
  double totalActions = 0;
  for (const auto& s : sessions) {
    focalRuns.push_back(runFocal(s, backend, MemoryMode::isolated, {}));
    naiveRuns.push_back(runNaive(s, backend, {}));
    totalActions += static_cast<double>(s.actions.size());

    const auto& f = focalRuns.back();
    const auto& n = naiveRuns.back();
    require(f.ledger.tcs() < n.ledger.tcs(),
            "session " + s.id + ": planned cost " + std::to_string(f.ledger.tcs()) +
                " not below full-coverage cost " + std::to_string(n.ledger.tcs()));
  }

  const double focalVcc = vcc(focalRuns);
  const double naiveVcc = vcc(naiveRuns);
  require(focalVcc <= 0.40 * naiveVcc,
          "call ratio: " + formatFixed(focalVcc, 3) + " vs 0.40 * " +
              formatFixed(naiveVcc, 3));

  const double meanLength = totalActions / static_cast<double>(sessions.size());
  require(naiveVcc == meanLength,
          "full-coverage calls " + formatFixed(naiveVcc, 6) +
              " != mean session length " + formatFixed(meanLength, 6));
}

// ---------------------------------------------------------------------------
// 6. Cross-task pollution: present under global memory, absent under
// isolated memory, witnessed in the captured record prompts.

struct PollutionScan {
  int pollutedSessions = 0;
  int scannedSessions = 0;
};

std::string shotOfDescription(const std::string& text) {
  const auto open = text.find("STATE[");
  if (open == std::string::npos) return "";
  const auto bar = text.find('|', open);
  const auto close = text.find(']', open);
  if (bar == std::string::npos || close == std::string::npos || bar > close) return "";
  return text.substr(bar + 1, close - bar - 1);
}

PollutionScan scanPollution(const std::vector<Session>& sessions, MemoryMode mode) {
  PollutionScan scan;
  MockBackend inner;
  for (const auto& s : sessions) {
    CapturingBackend capture(inner);
    const RunResult r = runFocal(s, capture, mode, {});

    // at least two planned tasks must have sampled evidence for cross-task
    // visibility to be possible at all
    std::set<std::int32_t> sampledTasks;
    for (const auto& [taskId, record] : r.stores)
      if (!record.descriptions.empty()) sampledTasks.insert(taskId);
    if (sampledTasks.size() < 2) continue;
    ++scan.scannedSessions;

    std::map<std::string, std::int32_t> shotToIndex;
    for (const auto& a : s.actions)
      if (a.screenshot) shotToIndex[stemOf(*a.screenshot)] = a.index;

    bool polluted = false;
    for (const auto& req : capture.requests()) {
      if (req.agentTag != AgentTag::record || !req.imageRef) continue;
      const std::int32_t describingIndex = shotToIndex.at(stemOf(*req.imageRef));
      const std::int32_t describingTask =
          resolve(*r.plan, describingIndex).taskId;
      for (const std::string& line :
           sectionLines(req.promptText, "TASK CONTEXT:", "- ")) {
        const std::string shot = shotOfDescription(line.substr(2));
        if (shot.empty()) continue;
        const std::int32_t sourceTask =
            resolve(*r.plan, shotToIndex.at(shot)).taskId;
        if (sourceTask != describingTask) polluted = true;
      }
    }
    if (polluted) ++scan.pollutedSessions;
  }
  return scan;
}

void checkPollutionWitness() {
  const auto sessions = generateMultitask(defaultPool(), defaultPatterns(), 320, 7);

  const PollutionScan shared = scanPollution(sessions, MemoryMode::global);
  require(shared.scannedSessions > 0, "no sessions with two sampled tasks");
  require(shared.pollutedSessions == shared.scannedSessions,
          "shared memory: " + std::to_string(shared.pollutedSessions) + " of " +
              std::to_string(shared.scannedSessions) +
              " eligible sessions showed cross-task context");

  const PollutionScan isolated = scanPollution(sessions, MemoryMode::isolated);
  require(isolated.pollutedSessions == 0,
          "isolated memory: " + std::to_string(isolated.pollutedSessions) +
              " sessions leaked cross-task context");
}

// ---------------------------------------------------------------------------
// 7. Generator statistics for both splits.

void checkGeneratorStatistics() {
  const Taxonomy taxonomy = Taxonomy::standard();

  const auto multitask = generateMultitask(defaultPool(), defaultPatterns(), 320, 7);
  require(multitask.size() == 320, "expected 320 multitask sessions");
  double totalActions = 0;
  for (const auto& s : multitask) {
    const auto& gt = *s.groundTruth;
    require(gt.taskCount >= 2 && gt.taskCount <= 4,
            s.id + ": task count " + std::to_string(gt.taskCount));
    std::set<std::string> prefixes;
    std::set<std::int32_t> seen;
    for (const auto& [index, taskId] : gt.assignments) {
      if (seen.insert(taskId).second)
        prefixes.insert(taxonomy.prefixForApp(s.actions[index - 1].metadata.app));
    }
    require(prefixes.size() >= 2, s.id + ": fewer than 2 distinct prefixes");
    totalActions += static_cast<double>(s.actions.size());
  }
  const double multitaskMean = totalActions / 320.0;
  require(std::abs(multitaskMean - 17.3) <= 1.0,
          "multitask mean length " + formatFixed(multitaskMean, 2) +
              " outside 17.3 +/- 1.0");

  const auto interruption = generateInterruption(defaultPool(), 100, 8);
  require(interruption.size() == 100, "expected 100 interruption sessions");
  totalActions = 0;
  for (const auto& s : interruption) {
    const auto& gt = *s.groundTruth;
    require(gt.taskCount == 2, s.id + ": task count != 2");
    int nonContiguous = 0;
    for (std::int32_t task = 1; task <= gt.taskCount; ++task) {
      std::vector<std::int32_t> indices;
      for (const auto& [index, taskId] : gt.assignments)
        if (taskId == task) indices.push_back(index);
      for (std::size_t i = 1; i < indices.size(); ++i) {
        if (indices[i] != indices[i - 1] + 1) {
          ++nonContiguous;
          break;
        }
      }
    }
    require(nonContiguous == 1,
            s.id + ": " + std::to_string(nonContiguous) + " non-contiguous tasks");
    totalActions += static_cast<double>(s.actions.size());
  }
  const double interruptionMean = totalActions / 100.0;
  require(std::abs(interruptionMean - 16.5) <= 1.0,
          "interruption mean length " + formatFixed(interruptionMean, 2) +
              " outside 16.5 +/- 1.0");
}

// ---------------------------------------------------------------------------
// 8. Full-loop determinism: generate, run all three systems, evaluate, twice,
// and require byte-identical trees.

void fullLoop(const std::filesystem::path& root) {
  std::ostringstream sink;
  CommandIo io{sink, sink};
  Config config;  // built-in defaults: 320 + 100 sessions, seed 7

  cmdGenerate(config, root / "bench", io);
  for (const std::string split : {"multitask", "interruption"}) {
    for (const std::string system : {"focal", "focal-gm", "naive"}) {
      const auto runDir = root / ("runs_" + split + "_" + system);
      cmdRun(config, root / "bench" / split, system, runDir, io);
      cmdEvaluate(config, runDir, root / "bench" / split,
                  root / (split + "_" + system + ".metrics.json"), io);
    }
  }
}

void checkDeterminism() {
  const auto root = workRoot() / "determinism";
  std::filesystem::remove_all(root);
  fullLoop(root / "first");
  fullLoop(root / "second");

  std::vector<std::filesystem::path> firstFiles;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(root / "first")) {
    if (entry.is_regular_file()) firstFiles.push_back(entry.path());
  }
  require(!firstFiles.empty(), "first loop produced no files");

  std::size_t compared = 0;
  for (const auto& file : firstFiles) {
    const auto relative = std::filesystem::relative(file, root / "first");
    const auto twin = root / "second" / relative;
    require(std::filesystem::exists(twin), "missing in second run: " + relative.string());
    require(readTextFile(file) == readTextFile(twin),
            "byte mismatch: " + relative.string());
    ++compared;
  }
  // both runs must produce the same file set
  std::size_t secondCount = 0;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(root / "second")) {
    if (entry.is_regular_file()) ++secondCount;
  }
  require(secondCount == compared, "extra files in second run");
  std::filesystem::remove_all(root);
}

// ---------------------------------------------------------------------------
// 9. Partition validator rejects every injected violation with the right
// diagnostic.

void checkPartitionValidator() {
  Rng rng(1337);
  int correct = 0;
  for (int round = 0; round < 100; ++round) {
    const std::int32_t actions = rng.nextInt(5, 20);
    const std::int32_t tasks = rng.nextInt(2, 4);
    GroundTruth truth;
    truth.taskCount = tasks;
    for (std::int32_t i = 1; i <= actions; ++i) {
      // every task keeps at least one index by construction below
      const std::int32_t task =
          i <= tasks ? i : rng.nextInt(1, tasks);
      truth.assignments.push_back({i, task});
    }
    validatePartition(truth, actions);  // sanity: valid before injection

    GroundTruth broken = truth;
    std::string expected;
    if (round % 2 == 0) {
      const std::size_t victim =
          static_cast<std::size_t>(rng.nextInt(0, actions - 1));
      const std::int32_t index = broken.assignments[victim].first;
      broken.assignments.erase(broken.assignments.begin() +
                               static_cast<std::ptrdiff_t>(victim));
      expected = "index " + std::to_string(index) + " unassigned";
    } else {
      const std::size_t victim =
          static_cast<std::size_t>(rng.nextInt(0, actions - 1));
      const auto [index, task] = broken.assignments[victim];
      const std::int32_t otherTask = task == tasks ? 1 : task + 1;
      broken.assignments.push_back({index, otherTask});
      std::sort(broken.assignments.begin(), broken.assignments.end());
      expected = "index " + std::to_string(index) + " assigned to multiple tasks";
    }

    try {
      validatePartition(broken, actions);
    } catch (const Error& e) {
      if (std::string(e.what()) == expected) ++correct;
      continue;
    }
  }
  require(correct == 100,
          std::to_string(correct) + "/100 injected violations diagnosed");
}

// ---------------------------------------------------------------------------
// 10. Optional live-backend smoke test, gated on FOCAL_LIVE_BASE_URL.

void checkLiveBackend(const std::string& baseUrl) {
  const auto sessions = generateMultitask(defaultPool(), defaultPatterns(), 1, 7);

  HttpBackendOptions options;
  options.baseUrl = baseUrl;
  const char* model = std::getenv("FOCAL_LIVE_MODEL");
  if (model != nullptr) options.model = model;
  HttpBackend backend(options);

  const RunResult r = runFocal(sessions[0], backend, MemoryMode::isolated, {});
  require(r.ledger.brainTokens() > 0, "no planner tokens recorded");
  require(r.ledger.recordTokens() > 0, "no vision tokens recorded");
  require(r.ledger.summaryTokens() > 0, "no summary tokens recorded");
  require(r.plan.has_value(), "no plan attached");
  std::cout << "       live planner: " << toString(r.plan->plannerKind)
            << ", calls=" << r.vlmCallCount << ", cost=" << r.ledger.tcs()
            << "\n";
}

struct Criterion {
  std::string name;
  double budgetSeconds;  // no enforcement when <= 0
  std::function<void()> body;
};

}  // namespace

int main() {
  std::filesystem::remove_all(workRoot());

  const std::vector<Criterion> criteria = {
      {"token-cost fixtures and reduction arithmetic", 1.0, checkCostFixtures},
      {"recall-ratio formula matches brute-force enumeration", 1.0, checkKirOracle},
      {"isolated memory never mixes task provenance", 10.0, checkMemoryIsolation},
      {"interruption split: planned pipeline resumes, baseline over-segments",
       60.0, checkInterruptionRecovery},
      {"planned pipeline is strictly cheaper on every multitask session", 120.0,
       checkEfficiencyOrdering},
      {"cross-task context appears under shared memory only", 60.0,
       checkPollutionWitness},
      {"generated corpus statistics", 30.0, checkGeneratorStatistics},
      {"full generate/run/evaluate loop is byte-deterministic", 300.0,
       checkDeterminism},
      {"partition validator diagnoses injected violations", 0.0,
       checkPartitionValidator},
  };

  int failures = 0;
  int index = 0;
  for (const auto& criterion : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      criterion.body();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (failure.empty() && criterion.budgetSeconds > 0 &&
        elapsed > criterion.budgetSeconds) {
      failure = "exceeded time budget of " + formatFixed(criterion.budgetSeconds, 0) +
                "s";
    }
    if (failure.empty()) {
      std::cout << "[PASS] " << index << ". " << criterion.name << " ("
                << formatFixed(elapsed, 2) << "s)\n";
    } else {
      ++failures;
      std::cout << "[FAIL] " << index << ". " << criterion.name << " ("
                << formatFixed(elapsed, 2) << "s): " << failure << "\n";
    }
  }

  const char* liveUrl = std::getenv("FOCAL_LIVE_BASE_URL");
  if (liveUrl == nullptr || std::string(liveUrl).empty()) {
    std::cout << "[SKIP] 10. live-backend smoke test (FOCAL_LIVE_BASE_URL unset)\n";
  } else {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      checkLiveBackend(liveUrl);
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (failure.empty()) {
      std::cout << "[PASS] 10. live-backend smoke test ("
                << formatFixed(elapsed, 2) << "s)\n";
    } else {
      ++failures;
      std::cout << "[FAIL] 10. live-backend smoke test ("
                << formatFixed(elapsed, 2) << "s): " << failure << "\n";
    }
  }

  std::filesystem::remove_all(workRoot());
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria satisfied\n";
  return 0;
}
