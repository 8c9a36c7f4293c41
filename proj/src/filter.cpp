#include "focal/filter.hpp"

#include "focal/error.hpp"

namespace focal {

const char* toString(DiscardReason reason) {
  switch (reason) {
    case DiscardReason::emptyApp: return "emptyApp";
    case DiscardReason::missingScreenshotFile: return "missingScreenshotFile";
    case DiscardReason::duplicateOfPrevious: return "duplicateOfPrevious";
    case DiscardReason::nonMonotonicTimestamp: return "nonMonotonicTimestamp";
  }
  return "?";
}

TraceReplaySource::TraceReplaySource(const std::filesystem::path& path) {
  Session session = loadSession(path);
  observations_.reserve(session.actions.size());
  for (const Action& action : session.actions)
    observations_.push_back(
        {action.metadata.app, action.metadata.title, action.screenshot, action.timestamp});
}

std::optional<RawObservation> TraceReplaySource::next() {
  if (position_ >= observations_.size()) return std::nullopt;
  return observations_[position_++];
}

FilterDecision validateObservation(const RawObservation& observation,
                                   const std::optional<Action>& previous,
                                   const FilterOptions& options) {
  if (observation.app.empty())
    return {FilterVerdict::discard, DiscardReason::emptyApp};

  if (observation.screenshot && options.verifyScreenshotPaths &&
      !std::filesystem::exists(*observation.screenshot))
    return {FilterVerdict::discard, DiscardReason::missingScreenshotFile};

  if (previous) {
    if (observation.timestamp <= previous->timestamp)
      return {FilterVerdict::discard, DiscardReason::nonMonotonicTimestamp};
    // Compare the title as it would be emitted, so refiltering an already
    // filtered stream changes nothing.
    const std::string& title =
        observation.title.empty() ? options.untitledPlaceholder : observation.title;
    bool sameTriple = observation.app == previous->metadata.app &&
                      title == previous->metadata.title &&
                      observation.screenshot == previous->screenshot;
    if (sameTriple)
      return {FilterVerdict::discard, DiscardReason::duplicateOfPrevious};
  }
  return {FilterVerdict::emit, std::nullopt};
}

Session acquireSession(ActionSource& source, const std::string& sessionId,
                       const FilterOptions& options) {
  Session session;
  session.id = sessionId;
  std::optional<Action> previous;

  while (auto observation = source.next()) {
    FilterDecision decision = validateObservation(*observation, previous, options);
    if (decision.verdict == FilterVerdict::discard) continue;
    Action action;
    action.index = static_cast<std::int32_t>(session.actions.size()) + 1;
    action.metadata.app = observation->app;
    action.metadata.title =
        observation->title.empty() ? options.untitledPlaceholder : observation->title;
    action.screenshot = observation->screenshot;
    action.timestamp = observation->timestamp;
    previous = action;
    session.actions.push_back(std::move(action));
  }

  if (session.actions.empty()) throw Error("empty session after filtering");
  return session;
}

}  // namespace focal
