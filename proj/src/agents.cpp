#include "focal/agents.hpp"

#include "focal/error.hpp"
#include "focal/util.hpp"

namespace focal {

std::string buildRecordPrompt(const RecordPromptContext& context,
                              const AgentOptions& options) {
  std::vector<std::string> memory = context.taskMemory;
  if (options.memoryMaxEntries > 0 && memory.size() > options.memoryMaxEntries)
    memory.erase(memory.begin(),
                 memory.end() - static_cast<std::ptrdiff_t>(options.memoryMaxEntries));

  std::string memoryBlock;
  if (memory.empty()) {
    memoryBlock = "(no prior context)";
  } else {
    std::vector<std::string> lines;
    lines.reserve(memory.size());
    for (const std::string& entry : memory) lines.push_back("- " + entry);
    memoryBlock = joinStrings(lines, "\n");
  }

  return renderTemplate(options.templates.record,
                        {{"app", context.metadata.app},
                         {"title", context.metadata.title},
                         {"screenshot", context.screenshot.value_or("(none)")},
                         {"memory", memoryBlock}});
}

std::string buildSummaryPrompt(const TaskRecord& record, const AgentOptions& options) {
  std::vector<std::string> lines;
  lines.reserve(record.descriptions.size());
  for (const std::string& description : record.descriptions)
    lines.push_back("- " + description);
  return renderTemplate(options.templates.summary,
                        {{"task_id", std::to_string(record.taskId)},
                         {"evidence", joinStrings(lines, "\n")}});
}

std::optional<std::string> describe(const RecordPromptContext& context, Backend& backend,
                                    TokenLedger& ledger, const AgentOptions& options) {
  BackendRequest request{AgentTag::record, buildRecordPrompt(context, options),
                         context.screenshot};
  try {
    BackendResponse response = backend.complete(request);
    ledger.record(AgentTag::record, response.usage);
    return response.text;
  } catch (const BackendError&) {
    return std::nullopt;  // skip the action, the pipeline continues
  }
}

std::string summarizeTask(const TaskRecord& record, Backend& backend, TokenLedger& ledger,
                          const AgentOptions& options) {
  if (record.descriptions.empty()) throw Error("task has no evidence");
  BackendRequest request{AgentTag::summary, buildSummaryPrompt(record, options),
                         std::nullopt};
  BackendResponse response = backend.complete(request);
  ledger.record(AgentTag::summary, response.usage);
  return response.text;
}

SessionSummary composeSession(
    const std::vector<std::pair<std::int32_t, std::string>>& taskSummaries) {
  for (std::size_t i = 0; i < taskSummaries.size(); ++i)
    if (taskSummaries[i].first != static_cast<std::int32_t>(i) + 1)
      throw Error("non-dense task ids in session summary");
  SessionSummary summary;
  summary.taskSummaries = taskSummaries;
  summary.predictedTaskCount = static_cast<std::int32_t>(taskSummaries.size());
  return summary;
}

}  // namespace focal
