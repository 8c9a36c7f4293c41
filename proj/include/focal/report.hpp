#pragma once

#include <optional>
#include <string>
#include <vector>

#include "focal/metrics.hpp"

namespace focal {

struct ReportRow {
  std::string system;
  std::size_t sessionCount = 0;
  MetricsAggregates aggregates;
};

struct SplitComparison {
  std::string split;
  std::vector<ReportRow> rows;  // naive first, then focal-gm, then focal
  // Present when both naive and focal rows exist in this split.
  std::optional<double> tcsReductionPct;
  std::optional<double> vccReductionPct;
};

struct Comparison {
  std::vector<SplitComparison> splits;
};

/// 100 * (baseline - candidate) / baseline. Errors when baseline is zero.
double reductionPercent(double baseline, double candidate);

/// Groups reports into the side-by-side two-split layout. Duplicate
/// (split, system) pairs are rejected.
Comparison buildComparison(const std::vector<MetricsReport>& reports);

/// Fixed-width text table, one block per split, reduction footer when
/// available.
std::string renderComparison(const Comparison& comparison);

/// Per-split, per-system series for external plotting: token breakdown by
/// channel plus the quality metrics.
std::string plotDataJson(const Comparison& comparison);

}  // namespace focal
