#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace focal {

std::vector<std::string> splitWhitespace(std::string_view text);
std::int64_t whitespaceTokenCount(std::string_view text);

std::string trim(std::string_view text);
std::string toLower(std::string_view text);
bool startsWith(std::string_view text, std::string_view prefix);

/// Splits a line on '|' into at most maxParts fields; the last field keeps
/// any remaining pipes. Fields are trimmed.
std::vector<std::string> splitPipes(std::string_view line, std::size_t maxParts);

std::vector<std::string> splitLines(std::string_view text);

std::string joinStrings(const std::vector<std::string>& parts, std::string_view sep);

/// Basename without directory or final extension: "shots/ps_003.png" -> "ps_003".
std::string stemOf(std::string_view ref);

/// Lowercased alphanumeric runs, used for vocabulary-overlap scoring.
std::set<std::string> overlapTokens(std::string_view text);

/// Harmonic mean of set precision/recall over overlapTokens. Identical texts
/// give 1.0, disjoint vocabularies 0.0.
double tokenSetF1(std::string_view candidate, std::string_view reference);

std::string base64Encode(const std::string& bytes);

std::string readTextFile(const std::filesystem::path& path);
void writeTextFile(const std::filesystem::path& path, std::string_view content);

std::string formatThousands(std::int64_t value);
std::string formatFixed(double value, int decimals);

/// Deterministic RNG wrapper. All draws go through nextInt so generated
/// corpora are reproducible for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  /// Uniform-ish integer in [lo, hi]. Modulo bias is irrelevant here.
  int nextInt(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

}  // namespace focal
