#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "focal/session.hpp"
#include "focal/taxonomy.hpp"
#include "focal/util.hpp"

namespace focal {

struct ActionTemplate {
  std::string title;
  std::string screenshotBase;  // synthetic screenshot id stem

  bool operator==(const ActionTemplate&) const = default;
};

struct Subtask {
  std::string prefix;  // application prefix from the taxonomy
  std::string slug;
  std::string description;
  std::vector<ActionTemplate> templates;  // at least one

  bool operator==(const Subtask&) const = default;
};

struct SubtaskPool {
  std::vector<Subtask> subtasks;

  std::vector<const Subtask*> byFamily(Family family, const Taxonomy& taxonomy) const;
  std::vector<const Subtask*> byPrefix(const std::string& prefix) const;
};

struct PatternSlot {
  std::int32_t taskLabel = 0;  // dense by first appearance within the pattern
  Family family = Family::Reference;

  bool operator==(const PatternSlot&) const = default;
};

/// A session shape: an ordered run of slots. A repeated task label means the
/// task resumes after an interruption.
struct CompositionPattern {
  std::int32_t id = 0;
  std::vector<PatternSlot> slots;

  std::int32_t taskCount() const;
  bool operator==(const CompositionPattern&) const = default;
};

SubtaskPool defaultPool();
std::vector<CompositionPattern> defaultPatterns();

SubtaskPool loadPool(const std::filesystem::path& path);
std::vector<CompositionPattern> loadPatterns(const std::filesystem::path& path);

void validatePool(const SubtaskPool& pool);
void validatePatterns(const std::vector<CompositionPattern>& patterns);

/// Multitask split: every session instantiates one pattern with 2-4 tasks
/// and at least two distinct application prefixes, carrying full ground
/// truth. Deterministic in (pool, patterns, count, seed).
std::vector<Session> generateMultitask(const SubtaskPool& pool,
                                       const std::vector<CompositionPattern>& patterns,
                                       std::int32_t count, std::uint64_t seed);

/// Interruption split: exactly two tasks laid out A, B, A with B a short
/// contiguous YouTube task and A split into two runs.
std::vector<Session> generateInterruption(const SubtaskPool& pool, std::int32_t count,
                                          std::uint64_t seed);

struct StatsReport {
  std::int32_t sessionCount = 0;
  double meanActions = 0.0;
  std::map<std::int32_t, std::int32_t> taskCountHistogram;
  std::map<std::string, std::int32_t> prefixTaskCounts;
  std::map<std::int32_t, std::int32_t> patternCounts;  // from the _pNN id tag
  std::map<std::string, std::int32_t> transitionCounts;  // "FamilyA>FamilyB"

  nlohmann::json toJson() const;
};

StatsReport computeStats(const std::vector<Session>& sessions);

}  // namespace focal
