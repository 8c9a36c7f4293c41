#include "focal/pipeline.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "focal/error.hpp"
#include "focal/util.hpp"

namespace focal {

using nlohmann::json;

const char* toString(SystemKind kind) {
  switch (kind) {
    case SystemKind::focal: return "focal";
    case SystemKind::focalGM: return "focal-gm";
    case SystemKind::naive: return "naive";
  }
  return "?";
}

std::optional<SystemKind> systemKindFromString(const std::string& name) {
  if (name == "focal") return SystemKind::focal;
  if (name == "focal-gm") return SystemKind::focalGM;
  if (name == "naive") return SystemKind::naive;
  return std::nullopt;
}

RunResult runFocal(const Session& session, Backend& backend, MemoryMode mode,
                   const PipelineOptions& options) {
  validateSession(session);

  std::vector<Metadata> metadata;
  metadata.reserve(session.actions.size());
  for (const Action& action : session.actions) metadata.push_back(action.metadata);

  RunResult result;
  result.sessionId = session.id;
  result.systemKind = mode == MemoryMode::isolated ? SystemKind::focal : SystemKind::focalGM;

  SessionPlan plan =
      options.useHeuristicPlanner
          ? planHeuristic(metadata, options.planner.taxonomy)
          : planSession(metadata, backend, result.ledger, options.planner);

  MemoryStoreSet memory(mode);
  for (const Action& action : session.actions) {
    const Decision& decision = resolve(plan, action.index);
    if (decision.kind == DecisionKind::newTask) memory.initTask(decision.taskId);
    if (!decision.sample) continue;
    RecordPromptContext context{action.metadata, action.screenshot,
                                memory.readTask(decision.taskId)};
    ++result.vlmCallCount;
    auto description = describe(context, backend, result.ledger, options.agents);
    if (description)
      memory.appendTask(decision.taskId, action.index, *description);
    else
      result.skippedIndices.push_back(action.index);
  }

  result.stores = memory.finalize();

  std::vector<std::pair<std::int32_t, std::string>> summaries;
  for (const auto& [taskId, record] : result.stores) {
    if (record.descriptions.empty())
      // Only reachable when every describe of a task failed; keep the task
      // visible instead of aborting the session.
      summaries.emplace_back(taskId, "(no evidence recorded)");
    else
      summaries.emplace_back(taskId,
                             summarizeTask(record, backend, result.ledger, options.agents));
  }
  result.summary = composeSession(summaries);
  result.plan = std::move(plan);
  return result;
}

SessionSummary parseSegmentedSummary(const std::string& text) {
  std::vector<std::pair<std::int32_t, std::string>> tasks;
  std::vector<std::string> current;
  bool inTask = false;
  auto flush = [&]() {
    if (!inTask) return;
    tasks.emplace_back(static_cast<std::int32_t>(tasks.size()) + 1,
                       trim(joinStrings(current, " ")));
    current.clear();
  };
  for (const std::string& line : splitLines(text)) {
    std::string t = trim(line);
    bool marker = startsWith(t, "=== TASK") && t.find("===", 8) != std::string::npos;
    if (marker) {
      flush();
      inTask = true;
      continue;
    }
    if (inTask && !t.empty()) current.push_back(t);
  }
  flush();
  return composeSession(tasks);
}

RunResult runNaive(const Session& session, Backend& backend,
                   const PipelineOptions& options) {
  validateSession(session);

  RunResult result;
  result.sessionId = session.id;
  result.systemKind = SystemKind::naive;

  for (const Action& action : session.actions) {
    RecordPromptContext context{action.metadata, action.screenshot, {}};
    ++result.vlmCallCount;
    auto description = describe(context, backend, result.ledger, options.agents);
    if (description)
      result.naiveDescriptions.push_back(*description);
    else
      result.skippedIndices.push_back(action.index);
  }

  std::vector<std::string> lines;
  lines.reserve(result.naiveDescriptions.size());
  for (const std::string& description : result.naiveDescriptions)
    lines.push_back("- " + description);
  std::string prompt = renderTemplate(options.agents.templates.naive,
                                      {{"descriptions", joinStrings(lines, "\n")}});
  BackendResponse response = backend.complete({AgentTag::summary, prompt, std::nullopt});
  result.ledger.record(AgentTag::summary, response.usage);
  result.summary = parseSegmentedSummary(response.text);
  return result;
}

RunResult runSystem(const Session& session, SystemKind kind, Backend& backend,
                    const PipelineOptions& options) {
  switch (kind) {
    case SystemKind::focal: return runFocal(session, backend, MemoryMode::isolated, options);
    case SystemKind::focalGM: return runFocal(session, backend, MemoryMode::global, options);
    case SystemKind::naive: return runNaive(session, backend, options);
  }
  throw Error("unknown system kind");
}

std::vector<RunResult> runBatch(const std::vector<Session>& sessions, SystemKind kind,
                                Backend& backend, const std::filesystem::path& outputDir,
                                const PipelineOptions& options, int jobs,
                                std::ostream* progress) {
  if (sessions.empty()) throw Error("session list is empty");
  std::filesystem::create_directories(outputDir);

  std::vector<std::optional<RunResult>> slots(sessions.size());
  std::vector<std::string> failures;
  std::mutex mutex;

  auto worker = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < sessions.size(); i += step) {
      try {
        RunResult result = runSystem(sessions[i], kind, backend, options);
        saveRunResult(result, outputDir / (result.sessionId + ".run.json"));
        std::lock_guard<std::mutex> lock(mutex);
        if (progress)
          *progress << result.sessionId << " " << toString(kind)
                    << " vcc=" << result.vlmCallCount << " tcs=" << result.ledger.tcs()
                    << "\n";
        slots[i] = std::move(result);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mutex);
        failures.push_back(sessions[i].id + ": " + e.what());
        if (progress) *progress << sessions[i].id << " FAILED: " << e.what() << "\n";
      }
    }
  };

  if (jobs <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t)
      threads.emplace_back(worker, static_cast<std::size_t>(t),
                           static_cast<std::size_t>(jobs));
    for (auto& thread : threads) thread.join();
  }

  std::vector<RunResult> results;
  for (auto& slot : slots)
    if (slot) results.push_back(std::move(*slot));
  if (results.empty())
    throw Error("all sessions failed; first failure: " +
                (failures.empty() ? std::string("?") : failures.front()));
  return results;
}

namespace {

json planToJson(const SessionPlan& plan) {
  json decisions = json::array();
  for (std::size_t i = 0; i < plan.decisions.size(); ++i) {
    const Decision& d = plan.decisions[i];
    decisions.push_back(json{{"index", i + 1},
                             {"task_id", d.taskId},
                             {"kind", toString(d.kind)},
                             {"sample", d.sample}});
  }
  return json{{"planner", toString(plan.plannerKind)}, {"decisions", decisions}};
}

SessionPlan planFromJson(const json& j) {
  SessionPlan plan;
  plan.plannerKind =
      j.at("planner").get<std::string>() == "llm" ? PlannerKind::llm : PlannerKind::heuristic;
  for (const json& dj : j.at("decisions")) {
    Decision d;
    d.taskId = dj.at("task_id").get<std::int32_t>();
    d.kind = dj.at("kind").get<std::string>() == "new" ? DecisionKind::newTask
                                                       : DecisionKind::continueTask;
    d.sample = dj.at("sample").get<bool>();
    plan.decisions.push_back(d);
  }
  return plan;
}

}  // namespace

void saveRunResult(const RunResult& result, const std::filesystem::path& path) {
  json calls = json::array();
  for (const CallUsage& call : result.ledger.calls())
    calls.push_back(json{{"agent", toString(call.agent)},
                         {"prompt_tokens", call.usage.promptTokens},
                         {"completion_tokens", call.usage.completionTokens}});

  json stores = json::object();
  for (const auto& [taskId, record] : result.stores)
    stores[std::to_string(taskId)] = json{{"task_id", record.taskId},
                                          {"sampled_indices", record.sampledIndices},
                                          {"descriptions", record.descriptions}};

  json summaries = json::array();
  for (const auto& [taskId, text] : result.summary.taskSummaries)
    summaries.push_back(json{{"task_id", taskId}, {"text", text}});

  json j{
      {"session_id", result.sessionId},
      {"system", toString(result.systemKind)},
      {"vlm_call_count", result.vlmCallCount},
      {"ledger",
       json{{"brain_tokens", result.ledger.brainTokens()},
            {"record_tokens", result.ledger.recordTokens()},
            {"summary_tokens", result.ledger.summaryTokens()},
            {"judge_tokens", result.ledger.judgeTokens()}}},
      {"calls", calls},
      {"stores", stores},
      {"summary",
       json{{"predicted_task_count", result.summary.predictedTaskCount},
            {"task_summaries", summaries}}},
  };
  if (result.plan) j["plan"] = planToJson(*result.plan);
  if (!result.naiveDescriptions.empty()) j["naive_descriptions"] = result.naiveDescriptions;
  if (!result.skippedIndices.empty()) j["skipped_indices"] = result.skippedIndices;

  writeTextFile(path, j.dump(2) + "\n");
}

RunResult loadRunResult(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(readTextFile(path));
  } catch (const json::exception&) {
    throw Error("malformed run artifact: " + path.string());
  }

  RunResult result;
  try {
    result.sessionId = j.at("session_id").get<std::string>();
    auto kind = systemKindFromString(j.at("system").get<std::string>());
    if (!kind) throw Error("unknown system in artifact: " + path.string());
    result.systemKind = *kind;
    result.vlmCallCount = j.at("vlm_call_count").get<std::int64_t>();

    for (const json& cj : j.at("calls")) {
      auto tag = agentTagFromString(cj.at("agent").get<std::string>());
      if (!tag) throw Error("unknown agent tag in artifact: " + path.string());
      result.ledger.record(*tag, {cj.at("prompt_tokens").get<std::int64_t>(),
                                  cj.at("completion_tokens").get<std::int64_t>()});
    }

    for (const auto& [key, rj] : j.at("stores").items()) {
      TaskRecord record;
      record.taskId = rj.at("task_id").get<std::int32_t>();
      record.sampledIndices = rj.at("sampled_indices").get<std::vector<std::int32_t>>();
      record.descriptions = rj.at("descriptions").get<std::vector<std::string>>();
      result.stores.emplace(record.taskId, std::move(record));
      (void)key;
    }

    const json& sj = j.at("summary");
    result.summary.predictedTaskCount = sj.at("predicted_task_count").get<std::int32_t>();
    for (const json& tj : sj.at("task_summaries"))
      result.summary.taskSummaries.emplace_back(tj.at("task_id").get<std::int32_t>(),
                                                tj.at("text").get<std::string>());

    if (j.contains("plan")) result.plan = planFromJson(j.at("plan"));
    if (j.contains("naive_descriptions"))
      result.naiveDescriptions = j.at("naive_descriptions").get<std::vector<std::string>>();
    if (j.contains("skipped_indices"))
      result.skippedIndices = j.at("skipped_indices").get<std::vector<std::int32_t>>();
  } catch (const json::exception&) {
    throw Error("malformed run artifact: " + path.string());
  }
  return result;
}

}  // namespace focal
