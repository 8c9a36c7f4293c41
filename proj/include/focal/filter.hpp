#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "focal/session.hpp"

namespace focal {

struct RawObservation {
  std::string app;
  std::string title;  // may be empty; emitted actions get a placeholder
  std::optional<std::string> screenshot;
  std::int64_t timestamp = 0;

  bool operator==(const RawObservation&) const = default;
};

enum class FilterVerdict { emit, discard };
enum class DiscardReason { emptyApp, missingScreenshotFile, duplicateOfPrevious,
                           nonMonotonicTimestamp };

const char* toString(DiscardReason reason);

struct FilterDecision {
  FilterVerdict verdict = FilterVerdict::discard;
  std::optional<DiscardReason> reason;  // present exactly when discarding
};

struct FilterOptions {
  // Synthetic feeds use placeholder screenshot ids with no file behind
  // them; those callers disable the existence check.
  bool verifyScreenshotPaths = true;
  std::string untitledPlaceholder = "(untitled)";
};

/// Pull interface for observation streams; next() returns nothing when the
/// stream is exhausted.
class ActionSource {
 public:
  virtual ~ActionSource() = default;
  virtual std::optional<RawObservation> next() = 0;
};

class VectorSource : public ActionSource {
 public:
  explicit VectorSource(std::vector<RawObservation> observations)
      : observations_(std::move(observations)) {}

  std::optional<RawObservation> next() override {
    if (position_ >= observations_.size()) return std::nullopt;
    return observations_[position_++];
  }

 private:
  std::vector<RawObservation> observations_;
  std::size_t position_ = 0;
};

/// Replays the action records of a stored trace as raw observations.
class TraceReplaySource : public ActionSource {
 public:
  explicit TraceReplaySource(const std::filesystem::path& path);

  std::optional<RawObservation> next() override;

 private:
  std::vector<RawObservation> observations_;
  std::size_t position_ = 0;
};

/// Emit iff: app nonempty, the screenshot (when present) resolves to an
/// existing file, the timestamp advances, and (app, title, screenshot)
/// differs from the previous emitted action. Checks look only at the
/// immediately preceding emitted action.
FilterDecision validateObservation(const RawObservation& observation,
                                   const std::optional<Action>& previous,
                                   const FilterOptions& options = {});

/// Drains a source through the filter into a validated session with actions
/// re-indexed 1..N. Throws when everything is discarded.
Session acquireSession(ActionSource& source, const std::string& sessionId,
                       const FilterOptions& options = {});

}  // namespace focal
