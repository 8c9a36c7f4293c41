#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace focal {

struct Metadata {
  std::string app;    // nonempty in validated actions
  std::string title;  // nonempty in validated actions

  bool operator==(const Metadata&) const = default;
};

struct Action {
  std::int32_t index = 0;  // 1-based, contiguous within a session
  Metadata metadata;
  std::optional<std::string> screenshot;
  std::int64_t timestamp = 0;  // integer tick, strictly increasing

  bool operator==(const Action&) const = default;
};

struct GroundTruth {
  std::int32_t taskCount = 0;
  // (action index, task id), kept sorted by index. A list rather than a map
  // so validatePartition can see injected double assignments.
  std::vector<std::pair<std::int32_t, std::int32_t>> assignments;
  std::vector<std::vector<std::string>> taskKeyPoints;  // [taskId - 1]
  std::vector<std::string> referenceSummaries;          // [taskId - 1]

  bool operator==(const GroundTruth&) const = default;
};

struct Session {
  std::string id;
  std::vector<Action> actions;
  std::optional<GroundTruth> groundTruth;

  bool operator==(const Session&) const = default;
};

/// Append-only evidence for one task: descriptions aligned with the sampled
/// action indices they came from.
struct TaskRecord {
  std::int32_t taskId = 0;
  std::vector<std::int32_t> sampledIndices;  // strictly increasing
  std::vector<std::string> descriptions;     // same length as sampledIndices

  bool operator==(const TaskRecord&) const = default;
};

struct SessionSummary {
  // (task id, summary text) in first-appearance order, ids dense 1..K.
  std::vector<std::pair<std::int32_t, std::string>> taskSummaries;
  std::int32_t predictedTaskCount = 0;

  bool operator==(const SessionSummary&) const = default;
};

/// Structural checks on an in-memory session: nonempty, contiguous 1-based
/// indices, strictly increasing timestamps, nonempty app and title.
void validateSession(const Session& session);

/// Checks that a ground truth exactly partitions [1, actionCount] with task
/// ids inside [1, taskCount]. Task index sets need not be contiguous.
void validatePartition(const GroundTruth& truth, std::int32_t actionCount);

/// Reads a line-delimited trace. The first line may be a header record with
/// the session id and optional ground truth; every other line is one action.
Session loadSession(const std::filesystem::path& path);

void saveSession(const Session& session, const std::filesystem::path& path);

}  // namespace focal
