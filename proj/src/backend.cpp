#include "focal/backend.hpp"

#include "focal/error.hpp"

namespace focal {

const char* toString(AgentTag tag) {
  switch (tag) {
    case AgentTag::brain: return "brain";
    case AgentTag::record: return "record";
    case AgentTag::summary: return "summary";
    case AgentTag::judge: return "judge";
  }
  return "?";
}

std::optional<AgentTag> agentTagFromString(const std::string& name) {
  if (name == "brain") return AgentTag::brain;
  if (name == "record") return AgentTag::record;
  if (name == "summary") return AgentTag::summary;
  if (name == "judge") return AgentTag::judge;
  return std::nullopt;
}

void TokenLedger::record(AgentTag tag, const TokenUsage& usage) {
  if (usage.promptTokens < 0 || usage.completionTokens < 0)
    throw Error("negative token usage");
  switch (tag) {
    case AgentTag::brain: brain_ += usage.total(); break;
    case AgentTag::record: record_ += usage.total(); break;
    case AgentTag::summary: summary_ += usage.total(); break;
    case AgentTag::judge: judge_ += usage.total(); break;
  }
  calls_.push_back({tag, usage});
}

BackendResponse CapturingBackend::complete(const BackendRequest& request) {
  requests_.push_back(request);
  return inner_.complete(request);
}

}  // namespace focal
