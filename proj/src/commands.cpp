#include "focal/commands.hpp"

#include <algorithm>
#include <ostream>

#include "focal/benchgen.hpp"
#include "focal/error.hpp"
#include "focal/http_backend.hpp"
#include "focal/metrics.hpp"
#include "focal/mock_backend.hpp"
#include "focal/report.hpp"
#include "focal/taxonomy.hpp"
#include "focal/util.hpp"

namespace focal {

PromptTemplates templatesFromConfig(const Config& config) {
  PromptTemplates templates = PromptTemplates::builtin();
  const auto override = [](std::string* slot, const std::string& path) {
    if (path.empty()) return;
    if (!std::filesystem::exists(path))
      throw ConfigError("prompt template not found: " + path);
    *slot = readTextFile(path);
  };
  override(&templates.plan, config.promptPlanPath);
  override(&templates.record, config.promptRecordPath);
  override(&templates.summary, config.promptSummaryPath);
  override(&templates.naive, config.promptNaivePath);
  override(&templates.judgeMatch, config.promptJudgeMatchPath);
  override(&templates.judgeGeval, config.promptJudgeGevalPath);
  return templates;
}

std::unique_ptr<Backend> makeBackend(const Config& config) {
  if (config.backendKind == "mock") return std::make_unique<MockBackend>();
  HttpBackendOptions options;
  options.baseUrl = config.backendBaseUrl;
  options.path = config.backendPath;
  options.model = config.modelName;
  options.timeoutMs = config.httpTimeoutMs;
  options.retries = static_cast<int>(config.httpRetries);
  return std::make_unique<HttpBackend>(options);
}

PipelineOptions pipelineOptionsFromConfig(const Config& config) {
  PipelineOptions options;
  options.planner.templates = templatesFromConfig(config);
  options.planner.attempts = static_cast<int>(config.plannerAttempts);
  options.planner.fallbackEnabled = config.plannerFallback;
  options.agents.templates = options.planner.templates;
  options.agents.memoryMaxEntries =
      static_cast<int>(config.recordMemoryMaxEntries);
  options.useHeuristicPlanner = config.planner == "heuristic";
  return options;
}

std::vector<Session> loadSplit(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw ConfigError("split directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Session> sessions;
  for (const auto& file : files) sessions.push_back(loadSession(file));
  return sessions;
}

namespace {

void writeSplit(const std::vector<Session>& sessions,
                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& session : sessions)
    saveSession(session, dir / (session.id + ".jsonl"));
}

}  // namespace

int cmdGenerate(const Config& config, const std::filesystem::path& outDir,
                CommandIo io) {
  SubtaskPool pool =
      config.poolPath.empty() ? defaultPool() : loadPool(config.poolPath);
  std::vector<CompositionPattern> patterns = config.patternsPath.empty()
                                                 ? defaultPatterns()
                                                 : loadPatterns(config.patternsPath);
  validatePool(pool);
  validatePatterns(patterns);

  const auto seed = static_cast<std::uint64_t>(config.seed);
  std::vector<Session> multitask = generateMultitask(
      pool, patterns, static_cast<std::int32_t>(config.multitaskCount), seed);
  std::vector<Session> interruption = generateInterruption(
      pool, static_cast<std::int32_t>(config.interruptionCount), seed + 1);

  writeSplit(multitask, outDir / "multitask");
  writeSplit(interruption, outDir / "interruption");

  nlohmann::json stats;
  stats["multitask"] = computeStats(multitask).toJson();
  stats["interruption"] = computeStats(interruption).toJson();
  writeTextFile(outDir / "stats.json", stats.dump(2) + "\n");

  io.out << "multitask: " << multitask.size() << " sessions, mean length "
         << formatFixed(computeStats(multitask).meanActions, 1) << "\n";
  io.out << "interruption: " << interruption.size() << " sessions, mean length "
         << formatFixed(computeStats(interruption).meanActions, 1) << "\n";
  io.out << "wrote " << (outDir / "stats.json").string() << "\n";
  return kExitOk;
}

int cmdRun(const Config& config, const std::filesystem::path& splitDir,
           const std::string& system, const std::filesystem::path& outDir,
           CommandIo io) {
  const std::optional<SystemKind> kind = systemKindFromString(system);
  if (!kind)
    throw ConfigError("unknown system '" + system +
                      "' (expected focal, focal-gm, or naive)");
  std::vector<Session> sessions = loadSplit(splitDir);
  if (sessions.empty())
    throw ConfigError("no traces in " + splitDir.string());

  std::unique_ptr<Backend> backend = makeBackend(config);
  PipelineOptions options = pipelineOptionsFromConfig(config);
  std::vector<RunResult> results =
      runBatch(sessions, *kind, *backend, outDir, options,
               static_cast<int>(config.jobs), &io.out);

  const std::size_t failed = sessions.size() - results.size();
  if (failed > 0) {
    io.err << failed << " of " << sessions.size() << " sessions failed\n";
    return kExitPartial;
  }
  io.out << results.size() << " sessions completed\n";
  return kExitOk;
}

int cmdEvaluate(const Config& config, const std::filesystem::path& runDir,
                const std::filesystem::path& splitDir,
                const std::filesystem::path& reportPath, CommandIo io) {
  if (!std::filesystem::is_directory(runDir))
    throw ConfigError("run directory not found: " + runDir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(runDir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 9 &&
        name.substr(name.size() - 9) == ".run.json")
      files.push_back(entry.path());
  }
  if (files.empty())
    throw ConfigError("no run artifacts in " + runDir.string());
  std::sort(files.begin(), files.end());

  std::vector<RunResult> results;
  for (const auto& file : files) results.push_back(loadRunResult(file));
  const std::string system = toString(results.front().systemKind);
  for (const auto& r : results) {
    if (r.systemKind != results.front().systemKind)
      throw Error("mixed systems in run directory " + runDir.string());
  }

  std::vector<Session> sessions = loadSplit(splitDir);
  std::unique_ptr<Backend> judge = makeBackend(config);
  TokenOverlapScorer scorer;
  JudgeOptions judgeOptions;
  judgeOptions.templates = templatesFromConfig(config);
  judgeOptions.retries = static_cast<int>(config.judgeRetries);

  const std::string split = splitDir.filename().string();
  MetricsReport report =
      evaluateRun(results, sessions, *judge, scorer, judgeOptions, split,
                  system, config.kirLambda);
  saveReport(report, reportPath);

  const auto& a = report.aggregates;
  io.out << "split=" << split << " system=" << system
         << " sessions=" << report.perSession.size()
         << " VCC=" << formatFixed(a.vcc, 2) << " TCS=" << formatFixed(a.tcs, 1)
         << " TaskAcc=" << formatFixed(a.taskAcc, 3)
         << " KIR=" << formatFixed(a.kir, 3)
         << " G-Eval=" << formatFixed(a.geval, 2)
         << " Sim=" << formatFixed(a.similarity, 3) << "\n";
  io.out << "wrote " << reportPath.string() << "\n";
  return kExitOk;
}

int cmdReport(const std::vector<std::filesystem::path>& reportPaths,
              const std::filesystem::path& plotPath, CommandIo io) {
  if (reportPaths.empty()) throw ConfigError("at least one report is required");
  std::vector<MetricsReport> reports;
  for (const auto& path : reportPaths) reports.push_back(loadReport(path));
  Comparison comparison = buildComparison(reports);
  io.out << renderComparison(comparison);
  if (!plotPath.empty()) {
    writeTextFile(plotPath, plotDataJson(comparison));
    io.out << "wrote " << plotPath.string() << "\n";
  }
  return kExitOk;
}

}  // namespace focal
