#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace focal {

struct TokenUsage {
  std::int64_t promptTokens = 0;
  std::int64_t completionTokens = 0;

  std::int64_t total() const { return promptTokens + completionTokens; }
  bool operator==(const TokenUsage&) const = default;
};

enum class AgentTag { brain, record, summary, judge };

const char* toString(AgentTag tag);
std::optional<AgentTag> agentTagFromString(const std::string& name);

struct CallUsage {
  AgentTag agent = AgentTag::record;
  TokenUsage usage;

  bool operator==(const CallUsage&) const = default;
};

/// Per-channel token totals for one run. Judge tokens are tracked on their
/// own channel and never enter the session cost.
class TokenLedger {
 public:
  void record(AgentTag tag, const TokenUsage& usage);

  std::int64_t brainTokens() const { return brain_; }
  std::int64_t recordTokens() const { return record_; }
  std::int64_t summaryTokens() const { return summary_; }
  std::int64_t judgeTokens() const { return judge_; }

  /// Total cost of a summarized session: brain + record + summary.
  std::int64_t tcs() const { return brain_ + record_ + summary_; }

  const std::vector<CallUsage>& calls() const { return calls_; }

 private:
  std::int64_t brain_ = 0;
  std::int64_t record_ = 0;
  std::int64_t summary_ = 0;
  std::int64_t judge_ = 0;
  std::vector<CallUsage> calls_;
};

struct BackendRequest {
  AgentTag agentTag = AgentTag::record;
  std::string promptText;
  std::optional<std::string> imageRef;  // vision calls only
};

struct BackendResponse {
  std::string text;
  TokenUsage usage;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendResponse complete(const BackendRequest& request) = 0;
};

/// Decorator that records every request passing through, for prompt
/// inspection in tests. Not thread-safe.
class CapturingBackend : public Backend {
 public:
  explicit CapturingBackend(Backend& inner) : inner_(inner) {}

  BackendResponse complete(const BackendRequest& request) override;

  const std::vector<BackendRequest>& requests() const { return requests_; }
  void clear() { requests_.clear(); }

 private:
  Backend& inner_;
  std::vector<BackendRequest> requests_;
};

}  // namespace focal
