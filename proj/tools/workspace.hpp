#pragma once

// Plain-text workspace files and the on-disk decomposition cache.
//
//   group degree=N            module p=P dim=D          map p=P rows=R cols=C
//   gen i0 i1 ... i(N-1)      mat e11 e12 ... eDD       row e1 ... eC
//
// One "gen" line per generator (images of 0..N-1), one "mat" line per group
// generator (row-major, entries in 0..P-1), one "row" line per map row.
// A corpus file lists module file paths, relative to the corpus file.
// Blank lines and lines starting with '#' are ignored.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relstab/decomposition.hpp"

namespace relstab::cli {

// Syntax or validation error; line is 0 when it concerns the whole file.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

GroupPtr parse_group_file(const std::string& text);
std::string print_group_file(const FiniteGroup& g);

GModule parse_module_file(const std::string& text, const GroupPtr& group);
std::string print_module_file(const GModule& m);

Matrix parse_map_file(const std::string& text);
std::string print_map_file(const Matrix& m);

std::vector<std::string> parse_corpus_file(const std::string& text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// Decompositions keyed by (group hash, p, module hash). Entries are checked
// against the module on every hit; unreadable files and entries that fail
// the check are ignored with a warning.
class DecompCache {
 public:
  explicit DecompCache(std::optional<std::filesystem::path> path);

  Decomposition decompose(const GModule& m, const DecomposeOptions& opts);
  // Persists new entries; a no-op without a path.
  void save();

  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  std::optional<Decomposition> lookup(const std::string& key, const GModule& m);

  std::optional<std::filesystem::path> path_;
  nlohmann::json root_;
  bool dirty_ = false;
  std::size_t hits_ = 0, misses_ = 0;
  std::vector<std::string> warnings_;
};

std::string cache_key(const GModule& m);

// A failed check with the data needed to reproduce it.
struct Counterexample {
  std::string check;
  std::vector<std::pair<std::string, GModule>> modules;
  std::optional<Matrix> map;
  std::string detail;
};

// Writes group.grp, <name>.mod per module, map.map and README.txt into dir.
void write_counterexample(const std::filesystem::path& dir, const FiniteGroup* group,
                          const Counterexample& ce);

}  // namespace relstab::cli
