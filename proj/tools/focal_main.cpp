#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "focal/commands.hpp"
#include "focal/config.hpp"
#include "focal/error.hpp"

namespace {

focal::Config resolveOrDie(const std::string& configPath,
                           const std::vector<std::string>& overrides) {
  return focal::resolveConfig(configPath, overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task-organized desktop activity summarization"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --config/--set appear after the subcommand

  std::string configPath;
  std::vector<std::string> overrides;
  app.add_option("--config", configPath, "Flat key=value config file");
  app.add_option("--set", overrides,
                 "Override one config key (key=value), repeatable");

  auto* generate = app.add_subcommand("generate", "Write benchmark splits");
  std::string generateOut = "bench";
  generate->add_option("--out", generateOut, "Output directory");

  auto* run = app.add_subcommand("run", "Replay a split through a system");
  std::string runSplit;
  std::string runSystem = "focal";
  std::string runOut = "runs";
  run->add_option("--split", runSplit, "Split directory of .jsonl traces")
      ->required();
  run->add_option("--system", runSystem, "focal | focal-gm | naive");
  run->add_option("--out", runOut, "Run artifact directory");

  auto* evaluate = app.add_subcommand("evaluate", "Score run artifacts");
  std::string evalRunDir;
  std::string evalSplit;
  std::string evalReport = "metrics.json";
  evaluate->add_option("--run-dir", evalRunDir, "Directory of .run.json files")
      ->required();
  evaluate->add_option("--split", evalSplit, "Split directory with ground truth")
      ->required();
  evaluate->add_option("--report", evalReport, "Metrics report output path");

  auto* report = app.add_subcommand("report", "Compare metrics reports");
  std::vector<std::string> reportPaths;
  std::string plotPath;
  report->add_option("reports", reportPaths, "Metrics report files")->required();
  report->add_option("--plot-data", plotPath, "Plot-data JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : focal::kExitUsage;
  }

  focal::CommandIo io{std::cout, std::cerr};
  try {
    if (*generate) {
      return focal::cmdGenerate(resolveOrDie(configPath, overrides),
                                generateOut, io);
    }
    if (*run) {
      return focal::cmdRun(resolveOrDie(configPath, overrides), runSplit,
                           runSystem, runOut, io);
    }
    if (*evaluate) {
      return focal::cmdEvaluate(resolveOrDie(configPath, overrides), evalRunDir,
                                evalSplit, evalReport, io);
    }
    if (*report) {
      std::vector<std::filesystem::path> paths(reportPaths.begin(),
                                               reportPaths.end());
      return focal::cmdReport(paths, plotPath, io);
    }
  } catch (const focal::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return focal::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return focal::kExitPartial;
  }
  return focal::kExitUsage;
}
