#pragma once

#include "focal/backend.hpp"
#include "focal/taxonomy.hpp"

namespace focal {

/// Deterministic offline stand-in for the model server. The reply is a pure
/// function of the request, and usage counts are whitespace token counts of
/// prompt and reply, so every run is exactly reproducible.
///
/// Behavior per channel (keyed on the builtin prompt section markers):
///  - record: "STATE[<app>|<screenshot stem>]", plus " ctx=<n>" when the
///    prompt carries n > 0 context entries.
///  - brain: a well-formed plan computed with the same prefix grouping the
///    heuristic planner uses.
///  - summary: per-task prompts give "TASK SUMMARY: <joined evidence>";
///    session-segmentation prompts split the descriptions on application
///    changes and emit one "=== TASK k ===" block per run.
///  - judge: match prompts pick candidates containing the anchor substring;
///    rating prompts score all five dimensions from vocabulary overlap
///    between summary and reference.
class MockBackend : public Backend {
 public:
  MockBackend() : taxonomy_(Taxonomy::standard()) {}

  BackendResponse complete(const BackendRequest& request) override;

 private:
  Taxonomy taxonomy_;
};

}  // namespace focal
