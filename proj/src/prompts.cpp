#include "focal/prompts.hpp"

#include "focal/util.hpp"

namespace focal {

PromptTemplates PromptTemplates::builtin() {
  PromptTemplates t;

  t.plan =
      "You plan desktop activity sessions from window metadata only.\n"
      "Group the ordered actions below into user tasks and decide which actions need "
      "visual sampling.\n"
      "Assign every action a task id; ids start at 1 in order of first appearance.\n"
      "Mark new on the first action of a task and continue on every later one.\n"
      "Sample an action when the visible state likely changed: the first or last action "
      "of a task, or a window title change within the task.\n"
      "Reply with one line per action, exactly: index | task_id | new_or_continue | sample\n"
      "No other text.\n"
      "ACTIONS:\n"
      "{{actions}}";

  t.record =
      "You are a desktop activity recorder. Study the screenshot together with the window "
      "metadata below and write one intent-centric paragraph that names the application, "
      "the visible artifact, and the user goal you infer from it. Stay strictly within this "
      "task. Use the prior task context to keep continuity, but describe only what the "
      "current screenshot shows. Mention concrete file names, panel names, and interface "
      "states that are visible. Avoid speculation about unrelated activity and do not "
      "repeat earlier context entries verbatim. Return only the paragraph, under eighty "
      "words, with no preamble and no list markers.\n"
      "APP: {{app}}\n"
      "TITLE: {{title}}\n"
      "SCREENSHOT: {{screenshot}}\n"
      "TASK CONTEXT:\n"
      "{{memory}}";

  t.summary =
      "SUMMARIZE TASK {{task_id}}\n"
      "Write a concise task summary from the evidence log below: the goal, the main "
      "steps, and the final state.\n"
      "EVIDENCE:\n"
      "{{evidence}}";

  t.naive =
      "SEGMENT SESSION\n"
      "Split the chronological activity descriptions below into user tasks and write one "
      "summary per task.\n"
      "Begin every task with a marker line exactly of the form: === TASK k ===\n"
      "DESCRIPTIONS:\n"
      "{{descriptions}}";

  t.judgeMatch =
      "MATCH TASK\n"
      "Decide which candidate summaries describe the same task as the reference below.\n"
      "ANCHOR: {{anchor}}\n"
      "REFERENCE: {{reference}}\n"
      "CANDIDATES:\n"
      "{{candidates}}\n"
      "Reply with the matching candidate numbers, comma-separated, or NONE.";

  t.judgeGeval =
      "RATE SUMMARY\n"
      "Rate the candidate summary against the reference on five dimensions, each an "
      "integer from 1 to 5.\n"
      "REFERENCE: {{reference}}\n"
      "SUMMARY: {{summary}}\n"
      "Reply with exactly five lines:\n"
      "ACCURACY: <1-5>\n"
      "COVERAGE: <1-5>\n"
      "CONCISENESS: <1-5>\n"
      "CONSISTENCY: <1-5>\n"
      "CLARITY: <1-5>";

  return t;
}

std::string renderTemplate(const std::string& tpl,
                           const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tpl.size());
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    std::size_t open = tpl.find("{{", pos);
    if (open == std::string::npos) {
      out += tpl.substr(pos);
      break;
    }
    std::size_t close = tpl.find("}}", open + 2);
    if (close == std::string::npos) {
      out += tpl.substr(pos);
      break;
    }
    out += tpl.substr(pos, open - pos);
    std::string name = tpl.substr(open + 2, close - open - 2);
    auto it = vars.find(name);
    if (it != vars.end())
      out += it->second;
    else
      out += tpl.substr(open, close - open + 2);
    pos = close + 2;
  }
  return out;
}

std::vector<std::string> sectionLines(const std::string& text, const std::string& marker,
                                      const std::string& linePrefix) {
  std::vector<std::string> out;
  bool inSection = false;
  for (const std::string& line : splitLines(text)) {
    if (!inSection) {
      if (trim(line) == marker) inSection = true;
      continue;
    }
    if (linePrefix.empty()) {
      out.push_back(line);
    } else if (startsWith(line, linePrefix)) {
      out.push_back(line);
    } else if (!trim(line).empty()) {
      break;  // section ended at the first non-matching content line
    }
  }
  return out;
}

std::string labeledValue(const std::string& text, const std::string& label) {
  for (const std::string& line : splitLines(text))
    if (startsWith(line, label)) return trim(line.substr(label.size()));
  return "";
}

}  // namespace focal
