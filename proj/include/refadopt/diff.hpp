#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace refadopt {

enum class LineMarker { Context, Deletion, Addition };

struct HunkLine {
  LineMarker marker = LineMarker::Context;
  std::string text;
};

struct Hunk {
  std::size_t old_start = 0;
  std::size_t old_count = 0;
  std::size_t new_start = 0;
  std::size_t new_count = 0;
  std::vector<HunkLine> lines;
};

struct FilePatch {
  std::string old_path;
  std::string new_path;
  std::vector<Hunk> hunks;
  bool old_missing_final_newline = false;
  bool new_missing_final_newline = false;
};

// The hunk-visible view of a changed file. before_changes holds the context
// and deletion lines, after_changes the context and addition lines, in order;
// added_lines are the addition lines alone.
struct ReconstructedFile {
  std::string path;
  std::string before_changes;
  std::string after_changes;
  std::vector<std::string> added_lines;
};

// Parses unified-diff text into per-file patches. Accepts full git-style
// diffs ("diff --git", "--- a/...", "+++ b/...") and the bare hunk streams the
// GitHub commits API returns (paths left empty for the caller to fill).
// Validates hunk line counts against the @@ header; CRLF pairs are normalized
// to LF before parsing.
std::vector<FilePatch> parse_unified_diff(std::string_view diff_text);

// Convenience for one GitHub patch field: parses, expects exactly one file,
// and fills in `path` when the text carries no ---/+++ headers.
FilePatch parse_file_patch(std::string_view path, std::string_view patch_text);

ReconstructedFile reconstruct(const FilePatch& patch);

struct ExclusionRules {
  std::set<std::string> dirs;
  std::set<std::string> extensions;  // matched as filename suffixes, "." included

  static ExclusionRules defaults();
  // JSON file: {"dirs": [...], "extensions": [...]}
  static ExclusionRules load(const std::string& path);
};

// True iff any path segment equals an excluded directory or the filename ends
// with an excluded extension (case-insensitive on the extension).
bool is_excluded(std::string_view path, const ExclusionRules& rules);

}  // namespace refadopt
