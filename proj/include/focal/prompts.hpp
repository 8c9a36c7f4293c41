#pragma once

#include <map>
#include <string>
#include <vector>

namespace focal {

/// Prompt text for every agent role. The builtin set is the contract the
/// mock backend parses; custom templates must keep the section markers
/// (APP:, TASK CONTEXT:, EVIDENCE:, ...) for mock runs to stay meaningful.
struct PromptTemplates {
  std::string plan;
  std::string record;
  std::string summary;
  std::string naive;
  std::string judgeMatch;
  std::string judgeGeval;

  static PromptTemplates builtin();
};

/// Replaces {{name}} placeholders. Unknown placeholders are left intact.
std::string renderTemplate(const std::string& tpl,
                           const std::map<std::string, std::string>& vars);

/// Lines following the first line equal to `marker`, up to the first
/// subsequent line that does not start with `linePrefix` (empty prefix
/// means: to the end of the text).
std::vector<std::string> sectionLines(const std::string& text, const std::string& marker,
                                      const std::string& linePrefix);

/// Value of the first line starting with `label` (e.g. "APP: "), trimmed.
std::string labeledValue(const std::string& text, const std::string& label);

}  // namespace focal
