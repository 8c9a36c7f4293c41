#include "focal/mock_backend.hpp"

#include <cmath>

#include "focal/brain.hpp"
#include "focal/error.hpp"
#include "focal/prompts.hpp"
#include "focal/util.hpp"

namespace focal {

namespace {

std::string stateApp(const std::string& descriptionLine) {
  // Extracts the app from a "STATE[app|shot]" description; otherwise the
  // whole line stands in for the app so unknown formats still segment.
  std::size_t open = descriptionLine.find("STATE[");
  if (open == std::string::npos) return descriptionLine;
  std::size_t bar = descriptionLine.find('|', open);
  if (bar == std::string::npos) return descriptionLine;
  return descriptionLine.substr(open + 6, bar - open - 6);
}

std::string mockRecordReply(const BackendRequest& request) {
  std::string app = labeledValue(request.promptText, "APP: ");
  if (app.empty()) app = "unknown";

  std::string shot;
  if (request.imageRef)
    shot = stemOf(*request.imageRef);
  else
    shot = labeledValue(request.promptText, "SCREENSHOT: ");
  if (shot.empty() || shot == "(none)") shot = "none";

  auto contextLines = sectionLines(request.promptText, "TASK CONTEXT:", "- ");
  std::string reply = "STATE[" + app + "|" + shot + "]";
  if (!contextLines.empty()) reply += " ctx=" + std::to_string(contextLines.size());
  return reply;
}

std::string mockPlanReply(const BackendRequest& request, const Taxonomy& taxonomy) {
  std::vector<Metadata> metadata;
  for (const std::string& line : sectionLines(request.promptText, "ACTIONS:", "")) {
    if (trim(line).empty()) continue;
    auto fields = splitPipes(line, 3);
    if (fields.size() != 3) continue;
    metadata.push_back({fields[1], fields[2]});
  }
  if (metadata.empty()) return "no actions found";
  std::vector<Decision> decisions = heuristicDecisions(metadata, taxonomy);
  std::vector<std::string> lines;
  lines.reserve(decisions.size());
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const Decision& d = decisions[i];
    lines.push_back(std::to_string(i + 1) + " | " + std::to_string(d.taskId) + " | " +
                    toString(d.kind) + " | " + (d.sample ? "1" : "0"));
  }
  return joinStrings(lines, "\n");
}

std::string mockTaskSummaryReply(const BackendRequest& request) {
  auto evidence = sectionLines(request.promptText, "EVIDENCE:", "- ");
  std::vector<std::string> texts;
  texts.reserve(evidence.size());
  for (const std::string& line : evidence) texts.push_back(trim(line.substr(2)));
  return "TASK SUMMARY: " + joinStrings(texts, " ");
}

std::string mockSegmentationReply(const BackendRequest& request) {
  auto lines = sectionLines(request.promptText, "DESCRIPTIONS:", "- ");
  std::vector<std::string> blocks;
  std::vector<std::string> current;
  std::string currentApp;
  auto flush = [&]() {
    if (current.empty()) return;
    blocks.push_back("=== TASK " + std::to_string(blocks.size() + 1) + " ===\n" +
                     joinStrings(current, " "));
    current.clear();
  };
  for (const std::string& line : lines) {
    std::string text = trim(line.substr(2));
    std::string app = stateApp(text);
    if (!current.empty() && app != currentApp) flush();
    currentApp = app;
    current.push_back(text);
  }
  flush();
  return joinStrings(blocks, "\n");
}

std::string mockJudgeReply(const BackendRequest& request) {
  const std::string& prompt = request.promptText;
  if (prompt.find("MATCH TASK") != std::string::npos) {
    std::string anchor = labeledValue(prompt, "ANCHOR: ");
    std::vector<std::string> matches;
    for (const std::string& line : sectionLines(prompt, "CANDIDATES:", "")) {
      std::size_t colon = line.find(": ");
      if (colon == std::string::npos) continue;
      std::string number = trim(line.substr(0, colon));
      if (number.empty() ||
          number.find_first_not_of("0123456789") != std::string::npos)
        continue;
      if (!anchor.empty() && line.find(anchor, colon + 2) != std::string::npos)
        matches.push_back(number);
    }
    return matches.empty() ? "NONE" : joinStrings(matches, ",");
  }
  if (prompt.find("RATE SUMMARY") != std::string::npos) {
    std::string reference = labeledValue(prompt, "REFERENCE: ");
    std::string summary = labeledValue(prompt, "SUMMARY: ");
    double overlap = tokenSetF1(summary, reference);
    int score = 1 + static_cast<int>(std::lround(overlap * 4.0));
    if (score < 1) score = 1;
    if (score > 5) score = 5;
    std::string s = std::to_string(score);
    return "ACCURACY: " + s + "\nCOVERAGE: " + s + "\nCONCISENESS: " + s +
           "\nCONSISTENCY: " + s + "\nCLARITY: " + s;
  }
  return "NONE";
}

}  // namespace

BackendResponse MockBackend::complete(const BackendRequest& request) {
  if (request.imageRef && request.agentTag != AgentTag::record)
    throw Error("image reference on a non-vision call");

  std::string text;
  switch (request.agentTag) {
    case AgentTag::record:
      text = mockRecordReply(request);
      break;
    case AgentTag::brain:
      text = mockPlanReply(request, taxonomy_);
      break;
    case AgentTag::summary:
      if (request.promptText.find("SEGMENT SESSION") != std::string::npos)
        text = mockSegmentationReply(request);
      else
        text = mockTaskSummaryReply(request);
      break;
    case AgentTag::judge:
      text = mockJudgeReply(request);
      break;
  }

  // Whitespace tokenization keeps costs deterministic; image bytes are not
  // counted.
  return {text, {whitespaceTokenCount(request.promptText), whitespaceTokenCount(text)}};
}

}  // namespace focal
