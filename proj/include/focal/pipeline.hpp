#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "focal/agents.hpp"
#include "focal/backend.hpp"
#include "focal/brain.hpp"
#include "focal/memory.hpp"
#include "focal/session.hpp"

namespace focal {

enum class SystemKind { focal, focalGM, naive };

const char* toString(SystemKind kind);
std::optional<SystemKind> systemKindFromString(const std::string& name);

/// Everything one session run produced, sufficient to evaluate without
/// rerunning: summary, plan, per-call usage, finalized stores.
struct RunResult {
  std::string sessionId;
  SystemKind systemKind = SystemKind::focal;
  SessionSummary summary;
  std::optional<SessionPlan> plan;  // absent for the naive system
  TokenLedger ledger;
  std::int64_t vlmCallCount = 0;
  std::map<std::int32_t, TaskRecord> stores;   // focal / focal-gm
  std::vector<std::string> naiveDescriptions;  // naive
  std::vector<std::int32_t> skippedIndices;    // describe failures, if any
};

struct PipelineOptions {
  PlannerOptions planner;
  AgentOptions agents;
  // heuristic planning bypasses the model entirely
  bool useHeuristicPlanner = false;
};

/// Plan, then walk actions in order: route every sampled action through its
/// task's memory, describe it, append the description, and summarize each
/// finalized store. `mode` picks task-isolated or shared memory.
RunResult runFocal(const Session& session, Backend& backend, MemoryMode mode,
                   const PipelineOptions& options);

/// Full-coverage baseline: every action is described without context, the
/// chronological concatenation goes to one final summarization call, and the
/// predicted task count is whatever "=== TASK k ===" markers come back.
RunResult runNaive(const Session& session, Backend& backend,
                   const PipelineOptions& options);

RunResult runSystem(const Session& session, SystemKind kind, Backend& backend,
                    const PipelineOptions& options);

/// Runs a whole split, persisting one artifact per session into outputDir.
/// A failing session is reported and skipped; only a fully failing batch is
/// an error. jobs > 1 runs sessions concurrently (artifact bytes do not
/// depend on scheduling).
std::vector<RunResult> runBatch(const std::vector<Session>& sessions, SystemKind kind,
                                Backend& backend, const std::filesystem::path& outputDir,
                                const PipelineOptions& options, int jobs = 1,
                                std::ostream* progress = nullptr);

void saveRunResult(const RunResult& result, const std::filesystem::path& path);
RunResult loadRunResult(const std::filesystem::path& path);

/// Parses "=== TASK k ===" blocks out of a segmentation reply. Zero markers
/// mean zero predicted tasks.
SessionSummary parseSegmentedSummary(const std::string& text);

}  // namespace focal
