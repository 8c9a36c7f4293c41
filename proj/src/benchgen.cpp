#include "focal/benchgen.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "focal/error.hpp"

namespace focal {

using nlohmann::json;

std::vector<const Subtask*> SubtaskPool::byFamily(Family family,
                                                  const Taxonomy& taxonomy) const {
  std::vector<const Subtask*> out;
  for (const Subtask& subtask : subtasks) {
    auto f = taxonomy.familyForPrefix(subtask.prefix);
    if (f && *f == family) out.push_back(&subtask);
  }
  return out;
}

std::vector<const Subtask*> SubtaskPool::byPrefix(const std::string& prefix) const {
  std::vector<const Subtask*> out;
  for (const Subtask& subtask : subtasks)
    if (subtask.prefix == prefix) out.push_back(&subtask);
  return out;
}

std::int32_t CompositionPattern::taskCount() const {
  std::set<std::int32_t> labels;
  for (const PatternSlot& slot : slots) labels.insert(slot.taskLabel);
  return static_cast<std::int32_t>(labels.size());
}

SubtaskPool defaultPool() {
  SubtaskPool pool;
  auto add = [&](const std::string& prefix, const std::string& slug,
                 const std::string& description, const std::string& title,
                 const std::string& base) {
    pool.subtasks.push_back({prefix, slug, description, {{title, base}}});
  };

  // Video editing
  add("PR", "rough_cut", "Assemble a rough cut of the travel vlog timeline",
      "travel_vlog.prproj - Adobe Premiere Pro", "pr_cut");
  add("PR", "export", "Configure export settings and render the final sequence",
      "Export Settings - travel_vlog.prproj", "pr_export");
  add("AE", "motion_title", "Animate the opening title composition",
      "opener_title.aep - Adobe After Effects", "ae_title");
  add("AE", "keying", "Key out the green screen in the interview composition",
      "greenscreen_comp.aep - Adobe After Effects", "ae_key");
  add("DV", "color_grade", "Grade the wedding reel in the color page",
      "wedding_reel - Color - DaVinci Resolve", "dv_grade");
  add("CC", "captions", "Add auto captions to the podcast clip",
      "podcast_clip - CapCut", "cc_caption");

  // Image editing
  add("PS", "retouch", "Retouch skin and remove blemishes on the portrait",
      "portrait_042.psd @ 66.7% (Layer 3, RGB/8) - Adobe Photoshop", "ps_retouch");
  add("PS", "banner", "Compose the web banner layout from product shots",
      "site_banner.psd @ 50% (Header, RGB/8) - Adobe Photoshop", "ps_banner");
  add("PS", "cutout", "Mask the product from its background",
      "product_shot.psd @ 100% (Mask, RGB/8) - Adobe Photoshop", "ps_cutout");

  // Generation
  add("RW", "gen_broll", "Generate b-roll clips from text prompts",
      "Runway - Gen-3 Text to Video", "rw_gen");
  add("SD", "txt2img", "Generate concept art variations with tuned prompts",
      "Stable Diffusion WebUI - txt2img", "sd_txt2img");
  add("SD", "upscale", "Upscale the selected renders for print",
      "Stable Diffusion WebUI - Extras", "sd_upscale");
  add("DALLE", "logo_draft", "Draft logo candidates from brand keywords",
      "DALL-E - Image Generation", "dalle_logo");
  add("AI", "storyboard", "Run the storyboard node graph for scene thumbnails",
      "ComfyUI - storyboard_flow", "ai_story");

  // Slides
  add("PPT", "pitch_deck", "Lay out the investor pitch deck sections",
      "investor_pitch.pptx - PowerPoint", "ppt_pitch");
  add("PPT", "lecture", "Prepare the week three lecture slides",
      "lecture_week3.pptx - PowerPoint", "ppt_lecture");

  // Reference
  add("WEB", "asset_hunt", "Browse stock sites for footage and textures",
      "Free stock footage - Google Chrome", "web_assets");
  add("WEB", "docs", "Read documentation for export presets",
      "Export settings guide - Google Chrome", "web_docs");
  add("YT", "tutorial", "Watch a masking tutorial video",
      "Masking tutorial - YouTube", "yt_tutorial");
  add("YT", "browse", "Browse short videos during a break",
      "Coffee break shorts - YouTube", "yt_shorts");
  add("VLC", "review", "Review the draft render for glitches",
      "draft_v2.mp4 - VLC media player", "vlc_review");

  return pool;
}

std::vector<CompositionPattern> defaultPatterns() {
  const Family V = Family::VideoEditing;
  const Family I = Family::ImageEditing;
  const Family G = Family::Generation;
  const Family S = Family::Slides;
  const Family R = Family::Reference;

  std::vector<CompositionPattern> patterns = {
      {1, {{1, V}, {2, R}, {1, V}}},           // video -> ref -> video
      {2, {{1, G}, {2, I}, {3, S}}},           // generation -> image -> slide
      {3, {{1, I}, {2, R}, {1, I}}},
      {4, {{1, V}, {2, I}}},
      {5, {{1, G}, {2, S}}},
      {6, {{1, R}, {2, V}, {1, R}}},
      {7, {{1, V}, {2, R}, {3, S}}},
      {8, {{1, I}, {2, G}, {3, S}}},
      {9, {{1, V}, {2, V}, {3, R}}},
      {10, {{1, G}, {2, R}, {1, G}, {3, I}}},
      {11, {{1, S}, {2, I}, {1, S}}},
      {12, {{1, V}, {2, R}, {1, V}, {3, S}}},
      {13, {{1, I}, {2, S}}},
      {14, {{1, G}, {2, V}}},
      {15, {{1, V}, {2, I}, {3, G}, {4, S}}},
      {16, {{1, S}, {2, R}, {1, S}}},
      {17, {{1, V}, {2, R}, {3, I}, {4, S}}},
      {18, {{1, G}, {2, R}, {1, G}}},
      {19, {{1, I}, {2, V}, {3, R}, {4, G}}},
      {20, {{1, V}, {2, G}, {3, S}, {4, R}}},
  };
  return patterns;
}

void validatePool(const SubtaskPool& pool) {
  Taxonomy taxonomy = Taxonomy::standard();
  if (pool.subtasks.empty()) throw Error("subtask pool is empty");
  for (const Subtask& subtask : pool.subtasks) {
    if (!taxonomy.familyForPrefix(subtask.prefix))
      throw Error("unknown prefix in pool: " + subtask.prefix);
    if (subtask.templates.empty())
      throw Error("subtask without action templates: " + subtask.slug);
  }
}

void validatePatterns(const std::vector<CompositionPattern>& patterns) {
  if (patterns.empty()) throw Error("pattern list is empty");
  std::set<std::int32_t> ids;
  for (const CompositionPattern& pattern : patterns) {
    if (!ids.insert(pattern.id).second)
      throw Error("duplicate pattern id " + std::to_string(pattern.id));
    if (pattern.slots.empty())
      throw Error("pattern " + std::to_string(pattern.id) + " has no slots");
    std::int32_t next = 1;
    std::set<std::int32_t> seen;
    std::set<Family> families;
    for (const PatternSlot& slot : pattern.slots) {
      families.insert(slot.family);
      if (!seen.count(slot.taskLabel)) {
        if (slot.taskLabel != next)
          throw Error("pattern " + std::to_string(pattern.id) +
                      " labels not dense by first appearance");
        seen.insert(slot.taskLabel);
        ++next;
      }
    }
    std::int32_t tasks = pattern.taskCount();
    if (tasks < 2 || tasks > 4)
      throw Error("pattern " + std::to_string(pattern.id) + " task count " +
                  std::to_string(tasks) + " outside [2, 4]");
    if (families.size() < 2)
      throw Error("pattern " + std::to_string(pattern.id) +
                  " needs at least two families");
  }
}

namespace {

std::string indexTag(std::int32_t value, int width) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%0*d", width, value);
  return buf;
}

struct SlotPlan {
  std::int32_t taskLabel;
  const Subtask* subtask;
  std::int32_t length;
};

/// Assembles a session from planned slot runs; one ground-truth task per
/// distinct label, anchored by tagged screenshot ids.
Session instantiate(const std::string& id, const std::vector<SlotPlan>& slots,
                    const Taxonomy& taxonomy, Rng& rng) {
  Session session;
  session.id = id;

  std::map<std::int32_t, std::int32_t> taskTotal;  // label -> total actions
  for (const SlotPlan& slot : slots) taskTotal[slot.taskLabel] += slot.length;

  GroundTruth truth;
  truth.taskCount = static_cast<std::int32_t>(taskTotal.size());

  std::map<std::int32_t, std::int32_t> taskPosition;  // label -> actions emitted
  std::int32_t index = 0;
  std::int64_t timestamp = rng.nextInt(1, 3);
  std::map<std::int32_t, const Subtask*> taskSubtask;

  for (const SlotPlan& slot : slots) {
    taskSubtask[slot.taskLabel] = slot.subtask;
    const auto& templates = slot.subtask->templates;
    const std::string app = taxonomy.applicationForPrefix(slot.subtask->prefix);
    const std::string anchor =
        templates.front().screenshotBase + "_t" + std::to_string(slot.taskLabel);
    std::int32_t total = taskTotal[slot.taskLabel];

    for (std::int32_t j = 0; j < slot.length; ++j) {
      std::int32_t position = taskPosition[slot.taskLabel]++;  // 0-based within task
      // Phase = template slice of the task's whole span, so a resumed task
      // keeps its title unless it moved to the next template.
      std::size_t phase = templates.size() > 1
                              ? static_cast<std::size_t>(position) * templates.size() /
                                    static_cast<std::size_t>(total)
                              : 0;
      Action action;
      action.index = ++index;
      action.metadata.app = app;
      action.metadata.title = templates[phase].title;
      action.screenshot = anchor + "_" + indexTag(position + 1, 3);
      action.timestamp = timestamp;
      timestamp += rng.nextInt(1, 4);
      session.actions.push_back(std::move(action));
      truth.assignments.emplace_back(index, slot.taskLabel);
    }
  }

  std::sort(truth.assignments.begin(), truth.assignments.end());
  for (std::int32_t k = 1; k <= truth.taskCount; ++k) {
    const Subtask* subtask = taskSubtask[k];
    const std::string app = taxonomy.applicationForPrefix(subtask->prefix);
    const std::string anchor =
        subtask->templates.front().screenshotBase + "_t" + std::to_string(k);
    std::vector<std::string> points{anchor, app};
    for (const ActionTemplate& t : subtask->templates) {
      if (points.size() >= 5) break;
      points.push_back(t.title);
    }
    points.push_back(subtask->description);
    truth.taskKeyPoints.push_back(std::move(points));
    truth.referenceSummaries.push_back(subtask->description + " using " + app + " in '" +
                                       subtask->templates.front().title + "' (evidence " +
                                       anchor + ").");
  }

  session.groundTruth = std::move(truth);
  validateSession(session);
  return session;
}

std::vector<std::int32_t> splitLength(std::int32_t total, std::int32_t parts) {
  std::vector<std::int32_t> out(parts, total / parts);
  for (std::int32_t i = 0; i < total % parts; ++i) ++out[i];
  return out;
}

}  // namespace

std::vector<Session> generateMultitask(const SubtaskPool& pool,
                                       const std::vector<CompositionPattern>& patterns,
                                       std::int32_t count, std::uint64_t seed) {
  validatePool(pool);
  validatePatterns(patterns);
  Taxonomy taxonomy = Taxonomy::standard();
  Rng rng(seed);

  std::vector<Session> sessions;
  sessions.reserve(count);
  for (std::int32_t s = 0; s < count; ++s) {
    const CompositionPattern& pattern =
        patterns[rng.nextInt(0, static_cast<int>(patterns.size()) - 1)];

    // Session length targets the corpus mean; slots share it near-evenly.
    std::int32_t target = rng.nextInt(14, 21);
    if (target < static_cast<std::int32_t>(pattern.slots.size()))
      target = static_cast<std::int32_t>(pattern.slots.size());
    auto lengths = splitLength(target, static_cast<std::int32_t>(pattern.slots.size()));

    std::map<std::int32_t, const Subtask*> chosen;
    std::vector<SlotPlan> slots;
    for (std::size_t i = 0; i < pattern.slots.size(); ++i) {
      const PatternSlot& slot = pattern.slots[i];
      if (!chosen.count(slot.taskLabel)) {
        auto candidates = pool.byFamily(slot.family, taxonomy);
        if (candidates.empty())
          throw Error("pool cannot satisfy a pattern slot: no subtasks for family " +
                      std::string(toString(slot.family)));
        chosen[slot.taskLabel] =
            candidates[rng.nextInt(0, static_cast<int>(candidates.size()) - 1)];
      }
      slots.push_back({slot.taskLabel, chosen[slot.taskLabel], lengths[i]});
    }

    std::string id = "mt" + indexTag(s + 1, 4) + "_p" + indexTag(pattern.id, 2);
    sessions.push_back(instantiate(id, slots, taxonomy, rng));
  }
  return sessions;
}

std::vector<Session> generateInterruption(const SubtaskPool& pool, std::int32_t count,
                                          std::uint64_t seed) {
  validatePool(pool);
  Taxonomy taxonomy = Taxonomy::standard();
  Rng rng(seed);

  std::vector<const Subtask*> creative;
  for (const Subtask& subtask : pool.subtasks) {
    auto family = taxonomy.familyForPrefix(subtask.prefix);
    if (family && *family != Family::Reference) creative.push_back(&subtask);
  }
  auto interrupters = pool.byPrefix("YT");
  if (creative.empty()) throw Error("pool has no creative subtasks");
  if (interrupters.empty()) throw Error("pool has no YT subtasks");

  std::vector<Session> sessions;
  sessions.reserve(count);
  for (std::int32_t s = 0; s < count; ++s) {
    const Subtask* taskA = creative[rng.nextInt(0, static_cast<int>(creative.size()) - 1)];
    const Subtask* taskB =
        interrupters[rng.nextInt(0, static_cast<int>(interrupters.size()) - 1)];

    std::int32_t target = rng.nextInt(13, 20);
    std::int32_t interruptLength = rng.nextInt(2, 4);
    std::int32_t mainLength = target - interruptLength;
    std::int32_t firstRun = (mainLength + 1) / 2;
    std::int32_t secondRun = mainLength - firstRun;

    std::vector<SlotPlan> slots = {
        {1, taskA, firstRun},
        {2, taskB, interruptLength},
        {1, taskA, secondRun},
    };
    std::string id = "int" + indexTag(s + 1, 4);
    sessions.push_back(instantiate(id, slots, taxonomy, rng));
  }
  return sessions;
}

StatsReport computeStats(const std::vector<Session>& sessions) {
  Taxonomy taxonomy = Taxonomy::standard();
  StatsReport report;
  report.sessionCount = static_cast<std::int32_t>(sessions.size());

  std::int64_t totalActions = 0;
  for (const Session& session : sessions) {
    totalActions += static_cast<std::int64_t>(session.actions.size());

    std::size_t tag = session.id.rfind("_p");
    if (tag != std::string::npos) {
      std::string digits = session.id.substr(tag + 2);
      if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos)
        ++report.patternCounts[std::stoi(digits)];
    }

    if (!session.groundTruth) continue;
    const GroundTruth& truth = *session.groundTruth;
    ++report.taskCountHistogram[truth.taskCount];

    // Tasks in first-appearance order, typed by their first action's app.
    std::map<std::int32_t, std::int32_t> firstIndex;
    for (const auto& [index, taskId] : truth.assignments)
      if (!firstIndex.count(taskId)) firstIndex[taskId] = index;
    std::vector<std::pair<std::int32_t, std::int32_t>> order;  // (first index, task)
    for (const auto& [taskId, index] : firstIndex) order.emplace_back(index, taskId);
    std::sort(order.begin(), order.end());

    std::vector<Family> families;
    for (const auto& [index, taskId] : order) {
      const std::string& app = session.actions[index - 1].metadata.app;
      std::string prefix = taxonomy.prefixForApp(app);
      ++report.prefixTaskCounts[prefix];
      auto family = taxonomy.familyForPrefix(prefix);
      families.push_back(family.value_or(Family::Reference));
    }
    for (std::size_t i = 1; i < families.size(); ++i)
      ++report.transitionCounts[std::string(toString(families[i - 1])) + ">" +
                                toString(families[i])];
  }

  report.meanActions = sessions.empty()
                           ? 0.0
                           : static_cast<double>(totalActions) /
                                 static_cast<double>(sessions.size());
  return report;
}

nlohmann::json StatsReport::toJson() const {
  json taskHist = json::object();
  for (const auto& [k, v] : taskCountHistogram) taskHist[std::to_string(k)] = v;
  json patterns = json::object();
  for (const auto& [k, v] : patternCounts) patterns[std::to_string(k)] = v;
  json prefixes = json::object();
  for (const auto& [k, v] : prefixTaskCounts) prefixes[k] = v;
  json transitions = json::object();
  for (const auto& [k, v] : transitionCounts) transitions[k] = v;
  return json{
      {"session_count", sessionCount},
      {"mean_actions", meanActions},
      {"task_count_histogram", taskHist},
      {"prefix_task_counts", prefixes},
      {"pattern_counts", patterns},
      {"transition_counts", transitions},
  };
}

SubtaskPool loadPool(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("pool file not found: " + path.string());
  json j;
  try {
    j = json::parse(readTextFile(path));
  } catch (const json::exception&) {
    throw ConfigError("malformed pool file: " + path.string());
  }
  SubtaskPool pool;
  try {
    for (const json& sj : j.at("subtasks")) {
      Subtask subtask;
      subtask.prefix = sj.at("prefix").get<std::string>();
      subtask.slug = sj.at("slug").get<std::string>();
      subtask.description = sj.at("description").get<std::string>();
      for (const json& tj : sj.at("templates"))
        subtask.templates.push_back({tj.at("title").get<std::string>(),
                                     tj.at("screenshot_base").get<std::string>()});
      pool.subtasks.push_back(std::move(subtask));
    }
  } catch (const json::exception&) {
    throw ConfigError("malformed pool file: " + path.string());
  }
  validatePool(pool);
  return pool;
}

std::vector<CompositionPattern> loadPatterns(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw ConfigError("patterns file not found: " + path.string());
  json j;
  try {
    j = json::parse(readTextFile(path));
  } catch (const json::exception&) {
    throw ConfigError("malformed patterns file: " + path.string());
  }
  std::vector<CompositionPattern> patterns;
  try {
    for (const json& pj : j.at("patterns")) {
      CompositionPattern pattern;
      pattern.id = pj.at("id").get<std::int32_t>();
      for (const json& sj : pj.at("slots")) {
        auto family = familyFromString(sj.at("family").get<std::string>());
        if (!family)
          throw ConfigError("unknown family in patterns file: " +
                            sj.at("family").get<std::string>());
        pattern.slots.push_back({sj.at("task").get<std::int32_t>(), *family});
      }
      patterns.push_back(std::move(pattern));
    }
  } catch (const json::exception&) {
    throw ConfigError("malformed patterns file: " + path.string());
  }
  validatePatterns(patterns);
  return patterns;
}

}  // namespace focal
