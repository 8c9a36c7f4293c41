#include "focal/config.hpp"

#include <cstdlib>
#include <functional>

#include "focal/error.hpp"
#include "focal/util.hpp"

namespace focal {

namespace {

std::int64_t parseInt(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::int64_t parsed = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("integer expected for " + key + ", got '" + value + "'");
  }
}

double parseDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("number expected for " + key + ", got '" + value + "'");
  }
}

bool parseBool(const std::string& key, const std::string& value) {
  const std::string v = toLower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("boolean expected for " + key + ", got '" + value + "'");
}

struct KeyBinding {
  const char* key;
  std::function<void(Config*, const std::string&)> assign;
  std::function<std::string(const Config&)> read;
};

const std::vector<KeyBinding>& bindings() {
  static const std::vector<KeyBinding> table = {
      {"backend",
       [](Config* c, const std::string& v) {
         if (v != "mock" && v != "http")
           throw ConfigError("backend must be mock or http, got '" + v + "'");
         c->backendKind = v;
       },
       [](const Config& c) { return c.backendKind; }},
      {"backend_base_url",
       [](Config* c, const std::string& v) { c->backendBaseUrl = v; },
       [](const Config& c) { return c.backendBaseUrl; }},
      {"backend_path",
       [](Config* c, const std::string& v) { c->backendPath = v; },
       [](const Config& c) { return c.backendPath; }},
      {"model_name",
       [](Config* c, const std::string& v) { c->modelName = v; },
       [](const Config& c) { return c.modelName; }},
      {"http_timeout_ms",
       [](Config* c, const std::string& v) {
         c->httpTimeoutMs = parseInt("http_timeout_ms", v);
         if (c->httpTimeoutMs <= 0)
           throw ConfigError("http_timeout_ms must be positive");
       },
       [](const Config& c) { return std::to_string(c.httpTimeoutMs); }},
      {"http_retries",
       [](Config* c, const std::string& v) {
         c->httpRetries = parseInt("http_retries", v);
         if (c->httpRetries < 1)
           throw ConfigError("http_retries must be at least 1");
       },
       [](const Config& c) { return std::to_string(c.httpRetries); }},
      {"planner",
       [](Config* c, const std::string& v) {
         if (v != "llm" && v != "heuristic")
           throw ConfigError("planner must be llm or heuristic, got '" + v + "'");
         c->planner = v;
       },
       [](const Config& c) { return c.planner; }},
      {"planner_attempts",
       [](Config* c, const std::string& v) {
         c->plannerAttempts = parseInt("planner_attempts", v);
         if (c->plannerAttempts < 1)
           throw ConfigError("planner_attempts must be at least 1");
       },
       [](const Config& c) { return std::to_string(c.plannerAttempts); }},
      {"planner_fallback",
       [](Config* c, const std::string& v) {
         c->plannerFallback = parseBool("planner_fallback", v);
       },
       [](const Config& c) {
         return std::string(c.plannerFallback ? "true" : "false");
       }},
      {"judge_retries",
       [](Config* c, const std::string& v) {
         c->judgeRetries = parseInt("judge_retries", v);
         if (c->judgeRetries < 1)
           throw ConfigError("judge_retries must be at least 1");
       },
       [](const Config& c) { return std::to_string(c.judgeRetries); }},
      {"kir_lambda",
       [](Config* c, const std::string& v) {
         c->kirLambda = parseDouble("kir_lambda", v);
         if (c->kirLambda < 0) throw ConfigError("kir_lambda must be >= 0");
       },
       [](const Config& c) { return formatFixed(c.kirLambda, 3); }},
      {"similarity_scorer",
       [](Config* c, const std::string& v) {
         if (v != "token-f1")
           throw ConfigError("unknown similarity_scorer '" + v + "'");
         c->similarityScorer = v;
       },
       [](const Config& c) { return c.similarityScorer; }},
      {"multitask_count",
       [](Config* c, const std::string& v) {
         c->multitaskCount = parseInt("multitask_count", v);
         if (c->multitaskCount < 1)
           throw ConfigError("multitask_count must be positive");
       },
       [](const Config& c) { return std::to_string(c.multitaskCount); }},
      {"interruption_count",
       [](Config* c, const std::string& v) {
         c->interruptionCount = parseInt("interruption_count", v);
         if (c->interruptionCount < 1)
           throw ConfigError("interruption_count must be positive");
       },
       [](const Config& c) { return std::to_string(c.interruptionCount); }},
      {"seed",
       [](Config* c, const std::string& v) { c->seed = parseInt("seed", v); },
       [](const Config& c) { return std::to_string(c.seed); }},
      {"jobs",
       [](Config* c, const std::string& v) {
         c->jobs = parseInt("jobs", v);
         if (c->jobs < 1) throw ConfigError("jobs must be at least 1");
       },
       [](const Config& c) { return std::to_string(c.jobs); }},
      {"record_memory_max_entries",
       [](Config* c, const std::string& v) {
         c->recordMemoryMaxEntries = parseInt("record_memory_max_entries", v);
         if (c->recordMemoryMaxEntries < 0)
           throw ConfigError("record_memory_max_entries must be >= 0");
       },
       [](const Config& c) {
         return std::to_string(c.recordMemoryMaxEntries);
       }},
      {"pool_path", [](Config* c, const std::string& v) { c->poolPath = v; },
       [](const Config& c) { return c.poolPath; }},
      {"patterns_path",
       [](Config* c, const std::string& v) { c->patternsPath = v; },
       [](const Config& c) { return c.patternsPath; }},
      {"prompt_plan_path",
       [](Config* c, const std::string& v) { c->promptPlanPath = v; },
       [](const Config& c) { return c.promptPlanPath; }},
      {"prompt_record_path",
       [](Config* c, const std::string& v) { c->promptRecordPath = v; },
       [](const Config& c) { return c.promptRecordPath; }},
      {"prompt_summary_path",
       [](Config* c, const std::string& v) { c->promptSummaryPath = v; },
       [](const Config& c) { return c.promptSummaryPath; }},
      {"prompt_naive_path",
       [](Config* c, const std::string& v) { c->promptNaivePath = v; },
       [](const Config& c) { return c.promptNaivePath; }},
      {"prompt_judge_match_path",
       [](Config* c, const std::string& v) { c->promptJudgeMatchPath = v; },
       [](const Config& c) { return c.promptJudgeMatchPath; }},
      {"prompt_judge_geval_path",
       [](Config* c, const std::string& v) { c->promptJudgeGevalPath = v; },
       [](const Config& c) { return c.promptJudgeGevalPath; }},
  };
  return table;
}

const KeyBinding* findBinding(const std::string& key) {
  for (const auto& b : bindings()) {
    if (key == b.key) return &b;
  }
  return nullptr;
}

std::string envNameFor(const std::string& key) {
  std::string name = "FOCAL_";
  for (char ch : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return name;
}

}  // namespace

std::vector<std::string> configKeys() {
  std::vector<std::string> keys;
  for (const auto& b : bindings()) keys.push_back(b.key);
  return keys;
}

void applyConfigValue(Config* config, const std::string& key,
                      const std::string& value) {
  const KeyBinding* binding = findBinding(key);
  if (binding == nullptr) throw ConfigError("unknown config key '" + key + "'");
  binding->assign(config, value);
}

Config loadConfigFile(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw ConfigError("config file not found: " + path.string());
  Config config;
  int lineNo = 0;
  for (const auto& raw : splitLines(readTextFile(path))) {
    ++lineNo;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed config line " + std::to_string(lineNo) +
                        ": '" + trim(raw) + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("malformed config line " + std::to_string(lineNo) +
                        ": missing key");
    applyConfigValue(&config, key, value);
  }
  return config;
}

void applyEnvironment(Config* config) {
  for (const auto& b : bindings()) {
    const char* value = std::getenv(envNameFor(b.key).c_str());
    if (value != nullptr) b.assign(config, value);
  }
}

Config resolveConfig(const std::string& configPath,
                     const std::vector<std::string>& overrides) {
  Config config;
  if (!configPath.empty()) config = loadConfigFile(configPath);
  applyEnvironment(&config);
  for (const auto& entry : overrides) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override must be key=value, got '" + entry + "'");
    applyConfigValue(&config, trim(entry.substr(0, eq)),
                     trim(entry.substr(eq + 1)));
  }
  return config;
}

std::string configToString(const Config& config) {
  std::string out;
  for (const auto& b : bindings()) {
    out += std::string(b.key) + " = " + b.read(config) + "\n";
  }
  return out;
}

}  // namespace focal
