#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "focal/session.hpp"

namespace focal {

enum class MemoryMode { isolated, global };

const char* toString(MemoryMode mode);

struct MemoryEntry {
  std::int32_t actionIndex = 0;
  std::int32_t taskId = 0;  // routing provenance, kept with every entry
  std::string text;

  bool operator==(const MemoryEntry&) const = default;
};

/// Append-only per-task description stores. In isolated mode each task reads
/// back only its own entries; in global mode every read returns the full
/// shared list regardless of the task asked for, which is exactly the
/// cross-task pollution the ablation needs. Writes are routed identically in
/// both modes, and every entry keeps its provenance so isolation is
/// checkable from the data, not from the wiring.
class MemoryStoreSet {
 public:
  explicit MemoryStoreSet(MemoryMode mode) : mode_(mode) {}

  /// Registers the next task. Ids must arrive densely: 1, 2, 3, ...
  void initTask(std::int32_t taskId);

  /// Description texts visible to `taskId` right now, in append order.
  std::vector<std::string> readTask(std::int32_t taskId) const;

  void appendTask(std::int32_t taskId, std::int32_t actionIndex, const std::string& text);

  /// Freezes the set and returns one record per initialized task. Any later
  /// append or second finalize is an error.
  std::map<std::int32_t, TaskRecord> finalize();

  std::int32_t activeTaskCount() const { return activeTasks_; }
  MemoryMode mode() const { return mode_; }
  bool finalized() const { return finalized_; }

  /// Raw per-task entries with provenance, for isolation audits.
  const std::map<std::int32_t, std::vector<MemoryEntry>>& rawStores() const {
    return stores_;
  }

 private:
  MemoryMode mode_;
  bool finalized_ = false;
  std::int32_t activeTasks_ = 0;
  std::map<std::int32_t, std::vector<MemoryEntry>> stores_;  // taskId -> entries
  std::vector<MemoryEntry> sharedLog_;                       // append order across tasks
};

}  // namespace focal
