#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nlohmann/json.hpp"

#include "focal/error.hpp"
#include "focal/report.hpp"

using namespace focal;

namespace {

MetricsReport report(const std::string& split, const std::string& system,
                     double vccValue, double tcsValue) {
  MetricsReport r;
  r.split = split;
  r.system = system;
  r.scorer = "token-f1";
  SessionMetrics row;
  row.sessionId = split + "-" + system;
  row.vlmCallCount = static_cast<std::int64_t>(vccValue);
  row.tcs = static_cast<std::int64_t>(tcsValue);
  row.kirValue = 0.5;
  row.gevalMean = 3.0;
  row.similarity = 0.5;
  r.perSession = {row};
  r.aggregates = aggregate(r.perSession);
  // aggregates built from a single row mirror it exactly; widen them so the
  // fixtures below can use fractional means
  r.aggregates.vcc = vccValue;
  r.aggregates.tcs = tcsValue;
  return r;
}

}  // namespace

TEST_CASE("percentage reduction") {
  CHECK(reductionPercent(100.0, 25.0) == doctest::Approx(75.0));
  CHECK_THROWS((void)reductionPercent(0.0, 1.0));
}

TEST_CASE("published token and call reductions emerge from the fixture means") {
  // session cost means: full-coverage 45,240 vs planned 17,913
  const double tcsCut = reductionPercent(45240.0, 17913.0);
  CHECK(std::abs(tcsCut - 60.4) < 0.1);
  // mean calls per session: 17.3 vs 4.8
  const double vccCut = reductionPercent(17.3, 4.8);
  CHECK(std::abs(vccCut - 72.3) < 0.1);

  const Comparison comparison = buildComparison(
      {report("multitask", "naive", 17.3, 45240.0),
       report("multitask", "focal", 4.8, 17913.0)});
  REQUIRE(comparison.splits.size() == 1);
  REQUIRE(comparison.splits[0].tcsReductionPct.has_value());
  CHECK(*comparison.splits[0].tcsReductionPct == doctest::Approx(tcsCut));
  CHECK(*comparison.splits[0].vccReductionPct == doctest::Approx(vccCut));
}

TEST_CASE("comparison fixes row and split order") {
  const Comparison c = buildComparison({
      report("interruption", "focal", 4, 100),
      report("multitask", "focal", 4, 100),
      report("multitask", "naive", 17, 300),
      report("interruption", "naive", 16, 280),
      report("multitask", "focal-gm", 4, 120),
  });
  REQUIRE(c.splits.size() == 2);
  CHECK(c.splits[0].split == "multitask");
  CHECK(c.splits[1].split == "interruption");
  REQUIRE(c.splits[0].rows.size() == 3);
  CHECK(c.splits[0].rows[0].system == "naive");
  CHECK(c.splits[0].rows[1].system == "focal-gm");
  CHECK(c.splits[0].rows[2].system == "focal");
}

TEST_CASE("duplicate system rows are rejected") {
  CHECK_THROWS_WITH((void)buildComparison({report("multitask", "focal", 4, 100),
                                           report("multitask", "focal", 5, 101)}),
                    doctest::Contains("duplicate report"));
  CHECK_THROWS((void)buildComparison({}));
}

TEST_CASE("a single report renders as a single row without reductions") {
  const Comparison c = buildComparison({report("multitask", "focal", 4, 100)});
  CHECK_FALSE(c.splits[0].tcsReductionPct.has_value());
  const std::string table = renderComparison(c);
  CHECK(table.find("== split: multitask ==") != std::string::npos);
  CHECK(table.find("focal") != std::string::npos);
  CHECK(table.find("focal vs naive") == std::string::npos);
}

TEST_CASE("three-system table carries the reduction footer") {
  const std::string table = renderComparison(buildComparison(
      {report("multitask", "naive", 17.3, 45240.0),
       report("multitask", "focal-gm", 4.9, 19000.0),
       report("multitask", "focal", 4.8, 17913.0)}));
  CHECK(table.find("naive") != std::string::npos);
  CHECK(table.find("focal-gm") != std::string::npos);
  CHECK(table.find("TCS -60.4% | VCC -72.3%") != std::string::npos);
}

TEST_CASE("plot data serializes every system series") {
  const std::string json = plotDataJson(buildComparison(
      {report("multitask", "naive", 17.3, 45240.0),
       report("multitask", "focal", 4.8, 17913.0)}));
  const auto j = nlohmann::json::parse(json);
  REQUIRE(j.at("splits").size() == 1);
  const auto& split = j.at("splits")[0];
  CHECK(split.at("systems").size() == 2);
  CHECK(split.at("systems")[0].at("system") == "naive");
  CHECK(split.at("systems")[0].at("token_breakdown").contains("record"));
  CHECK(split.at("tcs_reduction_pct").get<double>() == doctest::Approx(60.4045).epsilon(0.001));
}
