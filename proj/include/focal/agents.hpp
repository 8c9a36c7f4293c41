#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "focal/backend.hpp"
#include "focal/prompts.hpp"
#include "focal/session.hpp"

namespace focal {

/// Everything a record call may see: the action's metadata, its screenshot,
/// and the memory read from exactly one store.
struct RecordPromptContext {
  Metadata metadata;
  std::optional<std::string> screenshot;
  std::vector<std::string> taskMemory;
};

struct AgentOptions {
  PromptTemplates templates = PromptTemplates::builtin();
  // 0 keeps the whole memory in the prompt; n > 0 keeps the newest n entries.
  std::size_t memoryMaxEntries = 0;
};

std::string buildRecordPrompt(const RecordPromptContext& context, const AgentOptions& options);
std::string buildSummaryPrompt(const TaskRecord& record, const AgentOptions& options);

/// One vision call describing the action. A backend failure degrades to
/// nullopt so the pipeline can skip the action and keep going.
std::optional<std::string> describe(const RecordPromptContext& context, Backend& backend,
                                    TokenLedger& ledger, const AgentOptions& options);

/// Summarizes one finalized task record from its own descriptions only.
std::string summarizeTask(const TaskRecord& record, Backend& backend, TokenLedger& ledger,
                          const AgentOptions& options);

/// Assembles per-task summaries into a session summary. Task ids must be
/// dense 1..K in first-appearance order; an empty list yields K = 0.
SessionSummary composeSession(
    const std::vector<std::pair<std::int32_t, std::string>>& taskSummaries);

}  // namespace focal
