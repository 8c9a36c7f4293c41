#include "focal/memory.hpp"

#include "focal/error.hpp"

namespace focal {

const char* toString(MemoryMode mode) {
  return mode == MemoryMode::isolated ? "isolated" : "global";
}

void MemoryStoreSet::initTask(std::int32_t taskId) {
  if (finalized_) throw Error("store finalized");
  if (stores_.count(taskId))
    throw Error("task " + std::to_string(taskId) + " already initialized");
  if (taskId != activeTasks_ + 1)
    throw Error("non-dense task id " + std::to_string(taskId) + " (expected " +
                std::to_string(activeTasks_ + 1) + ")");
  stores_.emplace(taskId, std::vector<MemoryEntry>{});
  ++activeTasks_;
}

std::vector<std::string> MemoryStoreSet::readTask(std::int32_t taskId) const {
  auto it = stores_.find(taskId);
  if (it == stores_.end())
    throw Error("unknown task id " + std::to_string(taskId));
  std::vector<std::string> out;
  if (mode_ == MemoryMode::global) {
    // Shared pool: a valid task argument does not narrow anything.
    out.reserve(sharedLog_.size());
    for (const MemoryEntry& entry : sharedLog_) out.push_back(entry.text);
    return out;
  }
  out.reserve(it->second.size());
  for (const MemoryEntry& entry : it->second) out.push_back(entry.text);
  return out;
}

void MemoryStoreSet::appendTask(std::int32_t taskId, std::int32_t actionIndex,
                                const std::string& text) {
  if (finalized_) throw Error("store finalized");
  auto it = stores_.find(taskId);
  if (it == stores_.end())
    throw Error("unknown task id " + std::to_string(taskId));
  MemoryEntry entry{actionIndex, taskId, text};
  it->second.push_back(entry);
  sharedLog_.push_back(entry);
}

std::map<std::int32_t, TaskRecord> MemoryStoreSet::finalize() {
  if (finalized_) throw Error("store already finalized");
  finalized_ = true;
  std::map<std::int32_t, TaskRecord> records;
  for (const auto& [taskId, entries] : stores_) {
    TaskRecord record;
    record.taskId = taskId;
    for (const MemoryEntry& entry : entries) {
      record.sampledIndices.push_back(entry.actionIndex);
      record.descriptions.push_back(entry.text);
    }
    records.emplace(taskId, std::move(record));
  }
  return records;
}

}  // namespace focal
