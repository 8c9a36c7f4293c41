#include "focal/taxonomy.hpp"

#include "focal/error.hpp"

namespace focal {

const char* toString(Family family) {
  switch (family) {
    case Family::VideoEditing: return "VideoEditing";
    case Family::ImageEditing: return "ImageEditing";
    case Family::Generation: return "Generation";
    case Family::Slides: return "Slides";
    case Family::Reference: return "Reference";
  }
  return "?";
}

std::optional<Family> familyFromString(const std::string& name) {
  if (name == "VideoEditing") return Family::VideoEditing;
  if (name == "ImageEditing") return Family::ImageEditing;
  if (name == "Generation") return Family::Generation;
  if (name == "Slides") return Family::Slides;
  if (name == "Reference") return Family::Reference;
  return std::nullopt;
}

Taxonomy Taxonomy::standard() {
  Taxonomy t;
  t.entries_ = {
      {"AE", Family::VideoEditing, "Adobe After Effects", {}},
      {"PR", Family::VideoEditing, "Adobe Premiere Pro", {}},
      {"DV", Family::VideoEditing, "DaVinci Resolve", {}},
      {"CC", Family::VideoEditing, "CapCut", {}},
      {"PS", Family::ImageEditing, "Adobe Photoshop", {}},
      {"RW", Family::Generation, "Runway", {}},
      {"SD", Family::Generation, "Stable Diffusion WebUI", {}},
      {"DALLE", Family::Generation, "DALL-E", {}},
      {"AI", Family::Generation, "ComfyUI", {"Other AI tools"}},
      {"PPT", Family::Slides, "Microsoft PowerPoint", {}},
      {"WEB", Family::Reference, "Google Chrome",
       {"Web browser", "Mozilla Firefox", "Microsoft Edge"}},
      {"YT", Family::Reference, "YouTube", {}},
      {"VLC", Family::Reference, "VLC Media Player", {}},
  };
  return t;
}

std::string Taxonomy::prefixForApp(const std::string& app) const {
  for (const auto& entry : entries_) {
    if (entry.application == app) return entry.prefix;
    for (const auto& alias : entry.aliases)
      if (alias == app) return entry.prefix;
  }
  return "WEB";  // unlisted apps count as reference browsing
}

std::optional<Family> Taxonomy::familyForPrefix(const std::string& prefix) const {
  for (const auto& entry : entries_)
    if (entry.prefix == prefix) return entry.family;
  return std::nullopt;
}

std::string Taxonomy::applicationForPrefix(const std::string& prefix) const {
  for (const auto& entry : entries_)
    if (entry.prefix == prefix) return entry.application;
  throw Error("unknown application prefix: " + prefix);
}

}  // namespace focal
