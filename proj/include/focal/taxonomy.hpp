#pragma once

#include <optional>
#include <string>
#include <vector>

namespace focal {

enum class Family { VideoEditing, ImageEditing, Generation, Slides, Reference };

const char* toString(Family family);
std::optional<Family> familyFromString(const std::string& name);

struct TaxonomyEntry {
  std::string prefix;
  Family family;
  std::string application;           // canonical application name
  std::vector<std::string> aliases;  // other app names mapped to this prefix
};

/// Application prefix table. Groups desktop applications into task families
/// and assigns each a short prefix code used for task grouping.
class Taxonomy {
 public:
  static Taxonomy standard();

  /// Prefix for an application name. Unknown apps land in the Reference
  /// catch-all ("WEB").
  std::string prefixForApp(const std::string& app) const;

  std::optional<Family> familyForPrefix(const std::string& prefix) const;
  std::string applicationForPrefix(const std::string& prefix) const;

  const std::vector<TaxonomyEntry>& entries() const { return entries_; }

 private:
  std::vector<TaxonomyEntry> entries_;
};

}  // namespace focal
