#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace focal {

/// Flat typed settings resolved as: command-line flag > environment variable
/// (FOCAL_<UPPER_KEY>) > config file > built-in default. Unknown keys are
/// rejected at every layer.
struct Config {
  std::string backendKind = "mock";  // mock | http
  std::string backendBaseUrl = "http://127.0.0.1:11434";
  std::string backendPath = "/v1/chat/completions";
  std::string modelName = "qwen3:8b";
  std::int64_t httpTimeoutMs = 120000;
  std::int64_t httpRetries = 2;

  std::string planner = "llm";  // llm | heuristic
  std::int64_t plannerAttempts = 2;
  bool plannerFallback = true;

  std::int64_t judgeRetries = 2;
  double kirLambda = 2.0;
  std::string similarityScorer = "token-f1";

  std::int64_t multitaskCount = 320;
  std::int64_t interruptionCount = 100;
  std::int64_t seed = 7;
  std::int64_t jobs = 1;
  std::int64_t recordMemoryMaxEntries = 0;  // 0 = unbounded

  std::string poolPath;      // empty = built-in pool
  std::string patternsPath;  // empty = built-in patterns

  std::string promptPlanPath;
  std::string promptRecordPath;
  std::string promptSummaryPath;
  std::string promptNaivePath;
  std::string promptJudgeMatchPath;
  std::string promptJudgeGevalPath;
};

/// Every assignable key, in stable order. The env variable for key k is
/// FOCAL_ + uppercase(k).
std::vector<std::string> configKeys();

/// Assigns one key; throws ConfigError on unknown keys or unparseable values.
void applyConfigValue(Config* config, const std::string& key,
                      const std::string& value);

/// Parses a flat `key = value` file. '#' starts a comment; blank lines are
/// ignored.
Config loadConfigFile(const std::filesystem::path& path);

/// Applies FOCAL_-prefixed environment variables on top of `base`.
void applyEnvironment(Config* config);

/// Full resolution: defaults <- file (optional) <- environment <- overrides
/// given as "key=value" strings.
Config resolveConfig(const std::string& configPath,
                     const std::vector<std::string>& overrides);

std::string configToString(const Config& config);

}  // namespace focal
