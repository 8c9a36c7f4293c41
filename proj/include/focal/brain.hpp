#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "focal/prompts.hpp"
#include "focal/session.hpp"
#include "focal/taxonomy.hpp"

namespace focal {

class Backend;
class TokenLedger;

enum class DecisionKind { newTask, continueTask };

struct Decision {
  std::int32_t taskId = 0;
  DecisionKind kind = DecisionKind::newTask;
  bool sample = false;

  bool operator==(const Decision&) const = default;
};

enum class PlannerKind { llm, heuristic };

const char* toString(PlannerKind kind);
const char* toString(DecisionKind kind);

/// One decision per action. Task ids are dense and numbered by first
/// appearance; every task samples at least one action.
struct SessionPlan {
  std::vector<Decision> decisions;
  PlannerKind plannerKind = PlannerKind::heuristic;

  bool operator==(const SessionPlan&) const = default;
};

struct PlannerOptions {
  PromptTemplates templates = PromptTemplates::builtin();
  Taxonomy taxonomy = Taxonomy::standard();
  int attempts = 2;            // total model attempts before fallback
  bool fallbackEnabled = true; // heuristic fallback after exhausted attempts
};

/// Throws unless the plan satisfies every structural invariant for a
/// session of `actionCount` actions.
void validatePlan(const SessionPlan& plan, std::int32_t actionCount);

/// Prefix-grouping decisions: a new task opens when the action's application
/// prefix differs from every open task's prefix; a matching prefix resumes
/// that task. Samples the first and last action of each task and every
/// within-task title change.
std::vector<Decision> heuristicDecisions(const std::vector<Metadata>& metadata,
                                         const Taxonomy& taxonomy);

SessionPlan planHeuristic(const std::vector<Metadata>& metadata, const Taxonomy& taxonomy);

/// Asks the planning model for a plan built from metadata only. Unparseable
/// or transport-failed attempts are retried up to options.attempts; after
/// that the heuristic takes over (or an error is raised when fallback is
/// disabled). Malformed-but-parseable plans are repaired, not rejected.
SessionPlan planSession(const std::vector<Metadata>& metadata, Backend& backend,
                        TokenLedger& ledger, const PlannerOptions& options);

/// Builds the metadata-only planning prompt (index | app | title rows).
std::string buildPlanPrompt(const std::vector<Metadata>& metadata,
                            const PromptTemplates& templates);

/// Parses a model plan reply. Returns false when no well-formed line exists.
/// Gaps and inconsistencies in a parseable reply are repaired: orphaned
/// indices join the nearest preceding task, ids are renumbered densely,
/// kinds are recomputed from first appearance, and a task without samples
/// gets its first action sampled.
bool parsePlanReply(const std::string& reply, std::int32_t actionCount,
                    std::vector<Decision>& outDecisions);

/// Decision for a 1-based action index. Throws std::out_of_range outside
/// [1, N].
const Decision& resolve(const SessionPlan& plan, std::int32_t index);

}  // namespace focal
