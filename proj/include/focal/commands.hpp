#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "focal/backend.hpp"
#include "focal/config.hpp"
#include "focal/pipeline.hpp"
#include "focal/prompts.hpp"

namespace focal {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitUsage = 2;

struct CommandIo {
  std::ostream& out;
  std::ostream& err;
};

/// Builtin templates with any configured path overrides applied.
PromptTemplates templatesFromConfig(const Config& config);

/// mock | http per config.
std::unique_ptr<Backend> makeBackend(const Config& config);

PipelineOptions pipelineOptionsFromConfig(const Config& config);

/// Loads every *.jsonl trace under dir, sorted by filename.
std::vector<Session> loadSplit(const std::filesystem::path& dir);

int cmdGenerate(const Config& config, const std::filesystem::path& outDir,
                CommandIo io);

int cmdRun(const Config& config, const std::filesystem::path& splitDir,
           const std::string& system, const std::filesystem::path& outDir,
           CommandIo io);

int cmdEvaluate(const Config& config, const std::filesystem::path& runDir,
                const std::filesystem::path& splitDir,
                const std::filesystem::path& reportPath, CommandIo io);

int cmdReport(const std::vector<std::filesystem::path>& reportPaths,
              const std::filesystem::path& plotPath, CommandIo io);

}  // namespace focal
