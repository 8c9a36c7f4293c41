#include "focal/brain.hpp"

#include <map>
#include <optional>
#include <stdexcept>

#include "focal/backend.hpp"
#include "focal/error.hpp"
#include "focal/util.hpp"

namespace focal {

const char* toString(PlannerKind kind) {
  return kind == PlannerKind::llm ? "llm" : "heuristic";
}

const char* toString(DecisionKind kind) {
  return kind == DecisionKind::newTask ? "new" : "continue";
}

void validatePlan(const SessionPlan& plan, std::int32_t actionCount) {
  if (static_cast<std::int32_t>(plan.decisions.size()) != actionCount)
    throw Error("plan length does not match session length");
  std::int32_t nextTask = 1;
  std::map<std::int32_t, bool> sampled;
  for (const Decision& d : plan.decisions) {
    if (d.taskId < 1) throw Error("plan task id below 1");
    bool firstAppearance = !sampled.count(d.taskId);
    if (firstAppearance) {
      if (d.taskId != nextTask)
        throw Error("plan task ids not dense by first appearance (saw " +
                    std::to_string(d.taskId) + ", expected " + std::to_string(nextTask) + ")");
      ++nextTask;
      if (d.kind != DecisionKind::newTask)
        throw Error("first appearance of task " + std::to_string(d.taskId) +
                    " not marked new");
      sampled[d.taskId] = false;
    } else if (d.kind != DecisionKind::continueTask) {
      throw Error("repeated appearance of task " + std::to_string(d.taskId) +
                  " marked new");
    }
    if (d.sample) sampled[d.taskId] = true;
  }
  for (const auto& [taskId, hasSample] : sampled)
    if (!hasSample)
      throw Error("task " + std::to_string(taskId) + " samples no action");
}

std::vector<Decision> heuristicDecisions(const std::vector<Metadata>& metadata,
                                         const Taxonomy& taxonomy) {
  const std::size_t n = metadata.size();
  std::vector<Decision> decisions(n);

  std::map<std::string, std::int32_t> openTasks;  // prefix -> task id
  std::vector<std::int32_t> taskOf(n);
  std::int32_t taskCount = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::string prefix = taxonomy.prefixForApp(metadata[i].app);
    auto it = openTasks.find(prefix);
    if (it == openTasks.end()) {
      taskOf[i] = ++taskCount;
      openTasks.emplace(prefix, taskCount);
      decisions[i].kind = DecisionKind::newTask;
    } else {
      taskOf[i] = it->second;
      decisions[i].kind = DecisionKind::continueTask;
    }
    decisions[i].taskId = taskOf[i];
  }

  std::map<std::int32_t, std::size_t> firstOf, lastOf, prevOf;
  for (std::size_t i = 0; i < n; ++i) {
    if (!firstOf.count(taskOf[i])) firstOf[taskOf[i]] = i;
    lastOf[taskOf[i]] = i;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::int32_t task = taskOf[i];
    bool titleChanged = false;
    auto prev = prevOf.find(task);
    if (prev != prevOf.end())
      titleChanged = metadata[i].title != metadata[prev->second].title;
    prevOf[task] = i;
    decisions[i].sample = (i == firstOf[task]) || (i == lastOf[task]) || titleChanged;
  }
  return decisions;
}

SessionPlan planHeuristic(const std::vector<Metadata>& metadata, const Taxonomy& taxonomy) {
  if (metadata.empty()) throw Error("cannot plan an empty session");
  SessionPlan plan{heuristicDecisions(metadata, taxonomy), PlannerKind::heuristic};
  validatePlan(plan, static_cast<std::int32_t>(metadata.size()));
  return plan;
}

std::string buildPlanPrompt(const std::vector<Metadata>& metadata,
                            const PromptTemplates& templates) {
  std::vector<std::string> rows;
  rows.reserve(metadata.size());
  for (std::size_t i = 0; i < metadata.size(); ++i)
    rows.push_back(std::to_string(i + 1) + " | " + metadata[i].app + " | " +
                   metadata[i].title);
  return renderTemplate(templates.plan, {{"actions", joinStrings(rows, "\n")}});
}

namespace {

struct ParsedLine {
  std::int32_t taskId;
  std::optional<DecisionKind> kind;
  std::optional<bool> sample;
};

std::optional<bool> parseFlag(const std::string& s) {
  std::string v = toLower(s);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  return std::nullopt;
}

std::optional<int> parseInt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  try {
    return std::stoi(s);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

bool parsePlanReply(const std::string& reply, std::int32_t actionCount,
                    std::vector<Decision>& outDecisions) {
  std::map<std::int32_t, ParsedLine> byIndex;
  for (const std::string& rawLine : splitLines(reply)) {
    std::string line = trim(rawLine);
    if (line.empty()) continue;
    auto fields = splitPipes(line, 4);
    if (fields.size() != 4) continue;
    auto index = parseInt(fields[0]);
    auto task = parseInt(fields[1]);
    if (!index || !task || *index < 1 || *index > actionCount || *task < 1) continue;
    ParsedLine parsed{*task, std::nullopt, std::nullopt};
    std::string kind = toLower(fields[2]);
    if (startsWith(kind, "new"))
      parsed.kind = DecisionKind::newTask;
    else if (startsWith(kind, "cont"))
      parsed.kind = DecisionKind::continueTask;
    parsed.sample = parseFlag(fields[3]);
    byIndex[*index] = parsed;  // a later line overrides an earlier one
  }
  if (byIndex.empty()) return false;

  // Fill orphaned indices from the nearest preceding assigned task. Leading
  // orphans attach to the first assigned task.
  std::vector<ParsedLine> lines(actionCount, ParsedLine{0, std::nullopt, std::nullopt});
  for (const auto& [index, parsed] : byIndex) lines[index - 1] = parsed;
  std::int32_t firstTask = byIndex.begin()->second.taskId;
  std::int32_t carry = firstTask;
  for (std::int32_t i = 0; i < actionCount; ++i) {
    if (lines[i].taskId == 0) {
      lines[i].taskId = carry;
      lines[i].kind = std::nullopt;
      lines[i].sample = false;
    }
    carry = lines[i].taskId;
  }

  // Dense renumbering by first appearance; kinds recomputed rather than
  // trusted.
  std::map<std::int32_t, std::int32_t> renumber;
  outDecisions.assign(actionCount, Decision{});
  for (std::int32_t i = 0; i < actionCount; ++i) {
    auto it = renumber.find(lines[i].taskId);
    if (it == renumber.end()) {
      std::int32_t dense = static_cast<std::int32_t>(renumber.size()) + 1;
      renumber.emplace(lines[i].taskId, dense);
      outDecisions[i] = {dense, DecisionKind::newTask, lines[i].sample.value_or(false)};
    } else {
      outDecisions[i] = {it->second, DecisionKind::continueTask,
                         lines[i].sample.value_or(false)};
    }
  }

  // Every task must sample something; default to its first action.
  std::map<std::int32_t, std::int32_t> firstIndex;
  std::map<std::int32_t, bool> sampled;
  for (std::int32_t i = 0; i < actionCount; ++i) {
    const Decision& d = outDecisions[i];
    if (!firstIndex.count(d.taskId)) firstIndex[d.taskId] = i;
    if (d.sample) sampled[d.taskId] = true;
  }
  for (const auto& [taskId, first] : firstIndex)
    if (!sampled.count(taskId)) outDecisions[first].sample = true;
  return true;
}

SessionPlan planSession(const std::vector<Metadata>& metadata, Backend& backend,
                        TokenLedger& ledger, const PlannerOptions& options) {
  if (metadata.empty()) throw Error("cannot plan an empty session");
  const std::int32_t n = static_cast<std::int32_t>(metadata.size());
  std::string prompt = buildPlanPrompt(metadata, options.templates);

  int attempts = options.attempts < 1 ? 1 : options.attempts;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    BackendResponse response;
    try {
      response = backend.complete({AgentTag::brain, prompt, std::nullopt});
    } catch (const BackendError&) {
      continue;
    }
    ledger.record(AgentTag::brain, response.usage);
    std::vector<Decision> decisions;
    if (!parsePlanReply(response.text, n, decisions)) continue;
    SessionPlan plan{std::move(decisions), PlannerKind::llm};
    validatePlan(plan, n);
    return plan;
  }

  if (!options.fallbackEnabled)
    throw Error("planner produced no usable plan and fallback is disabled");
  return planHeuristic(metadata, options.taxonomy);
}

const Decision& resolve(const SessionPlan& plan, std::int32_t index) {
  if (index < 1 || index > static_cast<std::int32_t>(plan.decisions.size()))
    throw std::out_of_range("plan index out of range: " + std::to_string(index));
  return plan.decisions[index - 1];
}

}  // namespace focal
