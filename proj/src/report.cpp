#include "focal/report.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "nlohmann/json.hpp"

#include "focal/error.hpp"
#include "focal/util.hpp"

namespace focal {

double reductionPercent(double baseline, double candidate) {
  if (baseline == 0.0) throw Error("reduction against a zero baseline");
  return 100.0 * (baseline - candidate) / baseline;
}

namespace {

int splitRank(const std::string& split) {
  if (split == "multitask") return 0;
  if (split == "interruption") return 1;
  return 2;
}

int systemRank(const std::string& system) {
  if (system == "naive") return 0;
  if (system == "focal-gm") return 1;
  if (system == "focal") return 2;
  return 3;
}

}  // namespace

Comparison buildComparison(const std::vector<MetricsReport>& reports) {
  if (reports.empty()) throw Error("no reports to compare");

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : reports) {
    if (!seen.insert({r.split, r.system}).second)
      throw Error("duplicate report for system '" + r.system + "' on split '" +
                  r.split + "'");
  }

  std::vector<const MetricsReport*> ordered;
  for (const auto& r : reports) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const MetricsReport* a, const MetricsReport* b) {
                     if (splitRank(a->split) != splitRank(b->split))
                       return splitRank(a->split) < splitRank(b->split);
                     if (a->split != b->split) return a->split < b->split;
                     if (systemRank(a->system) != systemRank(b->system))
                       return systemRank(a->system) < systemRank(b->system);
                     return a->system < b->system;
                   });

  Comparison comparison;
  for (const MetricsReport* r : ordered) {
    if (comparison.splits.empty() || comparison.splits.back().split != r->split) {
      SplitComparison sc;
      sc.split = r->split;
      comparison.splits.push_back(sc);
    }
    ReportRow row;
    row.system = r->system;
    row.sessionCount = r->perSession.size();
    row.aggregates = r->aggregates;
    comparison.splits.back().rows.push_back(row);
  }

  for (auto& sc : comparison.splits) {
    const ReportRow* naive = nullptr;
    const ReportRow* focal = nullptr;
    for (const auto& row : sc.rows) {
      if (row.system == "naive") naive = &row;
      if (row.system == "focal") focal = &row;
    }
    if (naive != nullptr && focal != nullptr) {
      sc.tcsReductionPct =
          reductionPercent(naive->aggregates.tcs, focal->aggregates.tcs);
      sc.vccReductionPct =
          reductionPercent(naive->aggregates.vcc, focal->aggregates.vcc);
    }
  }
  return comparison;
}

namespace {

std::string pad(const std::string& text, std::size_t width) {
  if (text.size() >= width) return text;
  return std::string(width - text.size(), ' ') + text;
}

std::string padLeft(const std::string& text, std::size_t width) {
  if (text.size() >= width) return text;
  return text + std::string(width - text.size(), ' ');
}

}  // namespace

std::string renderComparison(const Comparison& comparison) {
  const std::vector<std::string> headers = {"system",   "sessions", "VCC",
                                            "BrainTok", "VLMTok",   "SumTok",
                                            "TCS",      "TaskAcc",  "KIR",
                                            "G-Eval",   "Sim"};
  std::string out;
  for (const auto& sc : comparison.splits) {
    out += "== split: " + sc.split + " ==\n";
    std::vector<std::vector<std::string>> cells;
    cells.push_back(headers);
    for (const auto& row : sc.rows) {
      const auto& a = row.aggregates;
      cells.push_back({row.system, std::to_string(row.sessionCount),
                       formatFixed(a.vcc, 1), formatFixed(a.brainTokens, 1),
                       formatFixed(a.recordTokens, 1),
                       formatFixed(a.summaryTokens, 1), formatFixed(a.tcs, 1),
                       formatFixed(a.taskAcc, 2), formatFixed(a.kir, 2),
                       formatFixed(a.geval, 2), formatFixed(a.similarity, 2)});
    }
    std::vector<std::size_t> widths(headers.size(), 0);
    for (const auto& row : cells)
      for (std::size_t i = 0; i < row.size(); ++i)
        widths[i] = std::max(widths[i], row[i].size());
    for (const auto& row : cells) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out += "  ";
        out += i == 0 ? padLeft(row[i], widths[i]) : pad(row[i], widths[i]);
      }
      out += "\n";
    }
    if (sc.tcsReductionPct) {
      out += "focal vs naive: TCS -" + formatFixed(*sc.tcsReductionPct, 1) +
             "% | VCC -" + formatFixed(*sc.vccReductionPct, 1) + "%\n";
    }
    out += "\n";
  }
  return out;
}

std::string plotDataJson(const Comparison& comparison) {
  nlohmann::json j;
  nlohmann::json splits = nlohmann::json::array();
  for (const auto& sc : comparison.splits) {
    nlohmann::json split;
    split["split"] = sc.split;
    nlohmann::json systems = nlohmann::json::array();
    for (const auto& row : sc.rows) {
      const auto& a = row.aggregates;
      nlohmann::json sys;
      sys["system"] = row.system;
      sys["sessions"] = row.sessionCount;
      sys["vcc"] = a.vcc;
      sys["token_breakdown"] = {{"brain", a.brainTokens},
                                {"record", a.recordTokens},
                                {"summary", a.summaryTokens}};
      sys["tcs"] = a.tcs;
      sys["task_acc"] = a.taskAcc;
      sys["kir"] = a.kir;
      sys["geval"] = a.geval;
      sys["similarity"] = a.similarity;
      systems.push_back(sys);
    }
    split["systems"] = systems;
    if (sc.tcsReductionPct) {
      split["tcs_reduction_pct"] = *sc.tcsReductionPct;
      split["vcc_reduction_pct"] = *sc.vccReductionPct;
    }
    splits.push_back(split);
  }
  j["splits"] = splits;
  return j.dump(2) + "\n";
}

}  // namespace focal
