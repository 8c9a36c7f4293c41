#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>

#include "focal/config.hpp"
#include "focal/error.hpp"
#include "focal/util.hpp"

using namespace focal;

namespace {

struct EnvGuard {
  std::string name;
  EnvGuard(const std::string& n, const std::string& value) : name(n) {
    setenv(name.c_str(), value.c_str(), 1);
  }
  ~EnvGuard() { unsetenv(name.c_str()); }
};

std::filesystem::path writeConfig(const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "focal_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "config.txt";
  writeTextFile(path, body);
  return path;
}

}  // namespace

TEST_CASE("defaults stand alone") {
  const Config c = resolveConfig("", {});
  CHECK(c.backendKind == "mock");
  CHECK(c.backendBaseUrl == "http://127.0.0.1:11434");
  CHECK(c.backendPath == "/v1/chat/completions");
  CHECK(c.modelName == "qwen3:8b");
  CHECK(c.httpTimeoutMs == 120000);
  CHECK(c.httpRetries == 2);
  CHECK(c.planner == "llm");
  CHECK(c.plannerAttempts == 2);
  CHECK(c.plannerFallback);
  CHECK(c.judgeRetries == 2);
  CHECK(c.kirLambda == doctest::Approx(2.0));
  CHECK(c.similarityScorer == "token-f1");
  CHECK(c.multitaskCount == 320);
  CHECK(c.interruptionCount == 100);
  CHECK(c.seed == 7);
  CHECK(c.jobs == 1);
  CHECK(c.recordMemoryMaxEntries == 0);
  CHECK(c.poolPath.empty());
}

TEST_CASE("config files use flat key-value lines with comments") {
  const auto path = writeConfig(
      "# benchmark shape\n"
      "multitask_count = 12\n"
      "seed=3   # inline comment\n"
      "\n"
      "planner = heuristic\n"
      "planner_fallback = false\n"
      "kir_lambda = 1.5\n");
  const Config c = loadConfigFile(path);
  CHECK(c.multitaskCount == 12);
  CHECK(c.seed == 3);
  CHECK(c.planner == "heuristic");
  CHECK_FALSE(c.plannerFallback);
  CHECK(c.kirLambda == doctest::Approx(1.5));
  // untouched keys keep their defaults
  CHECK(c.interruptionCount == 100);
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_WITH((void)loadConfigFile(writeConfig("not_a_key = 1\n")),
                    doctest::Contains("unknown config key 'not_a_key'"));
  CHECK_THROWS_WITH((void)loadConfigFile(writeConfig("seed = banana\n")),
                    doctest::Contains("integer expected for seed"));
  CHECK_THROWS_WITH((void)loadConfigFile(writeConfig("planner_fallback = maybe\n")),
                    doctest::Contains("boolean expected"));
  CHECK_THROWS_WITH((void)loadConfigFile(writeConfig("planner = oracle\n")),
                    doctest::Contains("planner must be llm or heuristic"));
  CHECK_THROWS_WITH((void)loadConfigFile(writeConfig("jobs = 0\n")),
                    doctest::Contains("jobs must be at least 1"));
  CHECK_THROWS_WITH((void)loadConfigFile(writeConfig("kir_lambda = -1\n")),
                    doctest::Contains("kir_lambda must be >= 0"));
  CHECK_THROWS_WITH((void)loadConfigFile(writeConfig("just a line\n")),
                    doctest::Contains("malformed config line 1"));
  CHECK_THROWS_WITH((void)loadConfigFile("/nonexistent/config.txt"),
                    doctest::Contains("config file not found"));
}

TEST_CASE("overrides must be key=value") {
  CHECK_THROWS_WITH((void)resolveConfig("", {"seed"}),
                    doctest::Contains("override must be key=value"));
  CHECK_THROWS_WITH((void)resolveConfig("", {"nope=1"}),
                    doctest::Contains("unknown config key"));
}

TEST_CASE("precedence: flag beats environment beats file beats default") {
  const auto path = writeConfig("seed = 100\nmodel_name = file-model\n");

  SUBCASE("file over default") {
    const Config c = resolveConfig(path.string(), {});
    CHECK(c.seed == 100);
    CHECK(c.modelName == "file-model");
    CHECK(c.jobs == 1);  // untouched default
  }
  SUBCASE("environment over file") {
    EnvGuard env("FOCAL_SEED", "200");
    const Config c = resolveConfig(path.string(), {});
    CHECK(c.seed == 200);
    CHECK(c.modelName == "file-model");
  }
  SUBCASE("flag over environment and file") {
    EnvGuard env("FOCAL_SEED", "200");
    EnvGuard env2("FOCAL_MODEL_NAME", "env-model");
    const Config c = resolveConfig(path.string(), {"seed=300"});
    CHECK(c.seed == 300);
    CHECK(c.modelName == "env-model");
  }
  SUBCASE("environment over default without a file") {
    EnvGuard env("FOCAL_JOBS", "4");
    const Config c = resolveConfig("", {});
    CHECK(c.jobs == 4);
  }
  SUBCASE("environment values are validated too") {
    EnvGuard env("FOCAL_SEED", "soup");
    CHECK_THROWS_WITH((void)resolveConfig(path.string(), {}),
                      doctest::Contains("integer expected for seed"));
  }
}

TEST_CASE("the key catalog covers the whole struct and round trips") {
  const std::vector<std::string> keys = configKeys();
  CHECK(keys.size() == 25);

  // every listed key can be rendered and re-applied
  Config c = resolveConfig("", {});
  const std::string rendered = configToString(c);
  for (const auto& key : keys) {
    CHECK(rendered.find(key + " = ") != std::string::npos);
  }

  // the rendered form parses back to the same settings
  const auto path = writeConfig(rendered);
  const Config reparsed = loadConfigFile(path);
  CHECK(configToString(reparsed) == rendered);
}
