#include "focal/session.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "focal/error.hpp"
#include "focal/util.hpp"

namespace focal {

using nlohmann::json;

void validateSession(const Session& session) {
  if (session.actions.empty()) throw TraceError("session must contain at least one action");
  std::int64_t prevTs = 0;
  bool first = true;
  for (std::size_t i = 0; i < session.actions.size(); ++i) {
    const Action& a = session.actions[i];
    if (a.index != static_cast<std::int32_t>(i) + 1)
      throw TraceError("non-contiguous index " + std::to_string(a.index) + " at position " +
                       std::to_string(i + 1));
    if (a.metadata.app.empty())
      throw TraceError("empty app at index " + std::to_string(a.index));
    if (a.metadata.title.empty())
      throw TraceError("empty title at index " + std::to_string(a.index));
    if (!first && a.timestamp <= prevTs)
      throw TraceError("non-monotonic timestamp at index " + std::to_string(a.index));
    prevTs = a.timestamp;
    first = false;
  }
  if (session.groundTruth)
    validatePartition(*session.groundTruth, static_cast<std::int32_t>(session.actions.size()));
}

void validatePartition(const GroundTruth& truth, std::int32_t actionCount) {
  if (truth.taskCount < 1) throw TraceError("task count must be at least 1");
  std::set<std::int32_t> seen;
  for (const auto& [index, taskId] : truth.assignments) {
    if (index < 1 || index > actionCount)
      throw TraceError("assigned index " + std::to_string(index) + " outside [1, " +
                       std::to_string(actionCount) + "]");
    if (taskId < 1 || taskId > truth.taskCount)
      throw TraceError("task id " + std::to_string(taskId) + " out of range [1, " +
                       std::to_string(truth.taskCount) + "]");
    if (!seen.insert(index).second)
      throw TraceError("index " + std::to_string(index) + " assigned to multiple tasks");
  }
  for (std::int32_t i = 1; i <= actionCount; ++i)
    if (!seen.count(i)) throw TraceError("index " + std::to_string(i) + " unassigned");
  if (truth.taskKeyPoints.size() != static_cast<std::size_t>(truth.taskCount) &&
      !truth.taskKeyPoints.empty())
    throw TraceError("key point lists do not match task count");
  if (truth.referenceSummaries.size() != static_cast<std::size_t>(truth.taskCount) &&
      !truth.referenceSummaries.empty())
    throw TraceError("reference summaries do not match task count");
}

namespace {

json groundTruthToJson(const GroundTruth& truth) {
  json assignments = json::object();
  for (const auto& [index, taskId] : truth.assignments)
    assignments[std::to_string(index)] = taskId;
  json j{
      {"task_count", truth.taskCount},
      {"assignments", assignments},
  };
  if (!truth.taskKeyPoints.empty()) j["key_points"] = truth.taskKeyPoints;
  if (!truth.referenceSummaries.empty()) j["reference_summaries"] = truth.referenceSummaries;
  return j;
}

GroundTruth groundTruthFromJson(const json& j, int line) {
  GroundTruth truth;
  truth.taskCount = j.at("task_count").get<std::int32_t>();
  for (const auto& [key, value] : j.at("assignments").items()) {
    std::size_t used = 0;
    int index = std::stoi(key, &used);
    if (used != key.size())
      throw TraceError("malformed assignment key at line " + std::to_string(line));
    truth.assignments.emplace_back(index, value.get<std::int32_t>());
  }
  std::sort(truth.assignments.begin(), truth.assignments.end());
  if (j.contains("key_points"))
    truth.taskKeyPoints = j.at("key_points").get<std::vector<std::vector<std::string>>>();
  if (j.contains("reference_summaries"))
    truth.referenceSummaries = j.at("reference_summaries").get<std::vector<std::string>>();
  return truth;
}

}  // namespace

Session loadSession(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot open trace: " + path.string());

  Session session;
  session.id = path.stem().string();
  if (session.id.size() > 6 && session.id.ends_with(".trace"))
    session.id = session.id.substr(0, session.id.size() - 6);

  std::string line;
  int lineNo = 0;
  std::int32_t expectedIndex = 1;
  std::int64_t prevTs = 0;
  bool haveAction = false;
  std::set<std::int32_t> seenIndices;

  while (std::getline(in, line)) {
    ++lineNo;
    if (trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception&) {
      throw TraceError("malformed line " + std::to_string(lineNo));
    }
    if (!record.is_object()) throw TraceError("malformed line " + std::to_string(lineNo));

    if (record.contains("session_id")) {
      if (haveAction || lineNo != 1)
        throw TraceError("header record not at line 1 (line " + std::to_string(lineNo) + ")");
      session.id = record.at("session_id").get<std::string>();
      if (record.contains("ground_truth"))
        session.groundTruth = groundTruthFromJson(record.at("ground_truth"), lineNo);
      continue;
    }

    Action action;
    try {
      action.index = record.at("index").get<std::int32_t>();
      action.metadata.app = record.at("app").get<std::string>();
      action.metadata.title = record.at("title").get<std::string>();
      action.timestamp = record.at("timestamp").get<std::int64_t>();
      if (record.contains("screenshot"))
        action.screenshot = record.at("screenshot").get<std::string>();
    } catch (const json::exception&) {
      throw TraceError("malformed line " + std::to_string(lineNo));
    }

    if (seenIndices.count(action.index))
      throw TraceError("duplicate index " + std::to_string(action.index) + " at line " +
                       std::to_string(lineNo));
    seenIndices.insert(action.index);
    if (action.index != expectedIndex)
      throw TraceError("non-contiguous index at line " + std::to_string(lineNo));
    ++expectedIndex;
    if (action.metadata.app.empty())
      throw TraceError("empty app at line " + std::to_string(lineNo));
    if (action.metadata.title.empty())
      throw TraceError("empty title at line " + std::to_string(lineNo));
    if (haveAction && action.timestamp <= prevTs)
      throw TraceError("non-monotonic timestamp at line " + std::to_string(lineNo));
    prevTs = action.timestamp;
    haveAction = true;
    session.actions.push_back(std::move(action));
  }

  if (session.actions.empty()) throw TraceError("session must contain at least one action");
  if (session.groundTruth)
    validatePartition(*session.groundTruth, static_cast<std::int32_t>(session.actions.size()));
  return session;
}

void saveSession(const Session& session, const std::filesystem::path& path) {
  validateSession(session);

  std::string out;
  json header{{"session_id", session.id}};
  if (session.groundTruth) header["ground_truth"] = groundTruthToJson(*session.groundTruth);
  out += header.dump();
  out += '\n';

  for (const Action& action : session.actions) {
    json record{
        {"index", action.index},
        {"timestamp", action.timestamp},
        {"app", action.metadata.app},
        {"title", action.metadata.title},
    };
    if (action.screenshot) record["screenshot"] = *action.screenshot;
    out += record.dump();
    out += '\n';
  }
  writeTextFile(path, out);
}

}  // namespace focal
