#include "refadopt/diff.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "refadopt/errors.hpp"
#include "refadopt/text.hpp"

namespace refadopt {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// "a/src/x.c" -> "src/x.c"; "/dev/null" -> ""; quoted paths unquoted.
std::string clean_diff_path(std::string_view raw) {
  // Drop a trailing timestamp ("\t2024-01-01 ...") if present.
  if (auto tab = raw.find('\t'); tab != std::string_view::npos)
    raw = raw.substr(0, tab);
  std::string path(raw);
  if (path.size() >= 2 && path.front() == '"' && path.back() == '"') {
    std::string unescaped;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      if (path[i] == '\\' && i + 2 < path.size()) ++i;
      unescaped.push_back(path[i]);
    }
    path = unescaped;
  }
  if (path == "/dev/null") return "";
  if (starts_with(path, "a/") || starts_with(path, "b/")) return path.substr(2);
  return path;
}

bool parse_size(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// "@@ -a[,b] +c[,d] @@[ section]" -> hunk header fields. Omitted counts are 1.
bool parse_hunk_header(std::string_view line, Hunk& hunk) {
  if (!starts_with(line, "@@ -")) return false;
  std::size_t pos = 4;
  auto take_range = [&](char sentinel, std::size_t& start, std::size_t& count) {
    std::size_t begin = pos;
    while (pos < line.size() && line[pos] != ',' && line[pos] != sentinel) ++pos;
    if (pos >= line.size() || !parse_size(line.substr(begin, pos - begin), start))
      return false;
    count = 1;
    if (line[pos] == ',') {
      begin = ++pos;
      while (pos < line.size() && line[pos] != sentinel) ++pos;
      if (pos >= line.size() || !parse_size(line.substr(begin, pos - begin), count))
        return false;
    }
    ++pos;  // consume sentinel
    return true;
  };
  if (!take_range(' ', hunk.old_start, hunk.old_count)) return false;
  if (pos >= line.size() || line[pos] != '+') return false;
  ++pos;
  if (!take_range(' ', hunk.new_start, hunk.new_count)) return false;
  return starts_with(line.substr(pos), "@@");
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw parse_error("unified diff, line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::vector<FilePatch> parse_unified_diff(std::string_view diff_text) {
  const std::string normalized = normalize_newlines(diff_text);
  const std::vector<std::string> lines = split_lines(normalized);

  std::vector<FilePatch> patches;
  FilePatch* current = nullptr;
  std::string pending_old_path;
  bool have_old_path = false;

  std::size_t i = 0;
  const std::size_t total = lines.size();
  while (i < total) {
    const std::string& line = lines[i];
    const std::size_t line_no = i + 1;

    if (starts_with(line, "diff --git") || starts_with(line, "index ") ||
        starts_with(line, "new file mode") || starts_with(line, "deleted file mode") ||
        starts_with(line, "old mode") || starts_with(line, "new mode") ||
        starts_with(line, "similarity index") || starts_with(line, "dissimilarity index") ||
        starts_with(line, "rename from") || starts_with(line, "rename to") ||
        starts_with(line, "copy from") || starts_with(line, "copy to") ||
        starts_with(line, "Binary files")) {
      if (starts_with(line, "diff --git")) {
        current = nullptr;  // next ---/+++/@@ opens a fresh file
        have_old_path = false;
      }
      ++i;
      continue;
    }

    if (starts_with(line, "--- ")) {
      pending_old_path = clean_diff_path(std::string_view(line).substr(4));
      have_old_path = true;
      ++i;
      continue;
    }

    if (starts_with(line, "+++ ")) {
      patches.emplace_back();
      current = &patches.back();
      current->new_path = clean_diff_path(std::string_view(line).substr(4));
      if (have_old_path) current->old_path = pending_old_path;
      have_old_path = false;
      ++i;
      continue;
    }

    if (starts_with(line, "@@")) {
      Hunk hunk;
      if (!parse_hunk_header(line, hunk)) fail(line_no, "malformed hunk header '" + line + "'");
      if (!current) {
        // bare GitHub patch stream: no ---/+++ headers, paths filled by caller
        patches.emplace_back();
        current = &patches.back();
      }

      std::size_t old_left = hunk.old_count;
      std::size_t new_left = hunk.new_count;
      ++i;
      while (i < total && (old_left > 0 || new_left > 0)) {
        const std::string& body = lines[i];
        const std::size_t body_no = i + 1;
        if (starts_with(body, "\\")) {
          // "\ No newline at end of file" inside a hunk refers to the side of
          // the preceding line; recorded, never content.
          if (!hunk.lines.empty() && hunk.lines.back().marker == LineMarker::Deletion)
            current->old_missing_final_newline = true;
          else if (!hunk.lines.empty() && hunk.lines.back().marker == LineMarker::Addition)
            current->new_missing_final_newline = true;
          else {
            current->old_missing_final_newline = true;
            current->new_missing_final_newline = true;
          }
          ++i;
          continue;
        }
        const char marker = body.empty() ? ' ' : body[0];
        const std::string text = body.empty() ? std::string() : body.substr(1);
        if (marker == ' ') {
          if (old_left == 0 || new_left == 0)
            fail(body_no, "hunk line count mismatch: extra context line");
          hunk.lines.push_back({LineMarker::Context, text});
          --old_left;
          --new_left;
        } else if (marker == '-') {
          if (old_left == 0) fail(body_no, "hunk line count mismatch: extra deletion line");
          hunk.lines.push_back({LineMarker::Deletion, text});
          --old_left;
        } else if (marker == '+') {
          if (new_left == 0) fail(body_no, "hunk line count mismatch: extra addition line");
          hunk.lines.push_back({LineMarker::Addition, text});
          --new_left;
        } else {
          fail(body_no, std::string("unexpected line marker '") + marker + "' inside hunk");
        }
        ++i;
      }
      if (old_left > 0 || new_left > 0)
        fail(total, "truncated hunk: " + std::to_string(old_left) + " old and " +
                        std::to_string(new_left) + " new line(s) missing");
      // Trailing no-newline marker for the hunk's last line.
      if (i < total && starts_with(lines[i], "\\")) {
        if (!hunk.lines.empty() && hunk.lines.back().marker == LineMarker::Deletion)
          current->old_missing_final_newline = true;
        else if (!hunk.lines.empty() && hunk.lines.back().marker == LineMarker::Addition)
          current->new_missing_final_newline = true;
        else {
          current->old_missing_final_newline = true;
          current->new_missing_final_newline = true;
        }
        ++i;
      }
      current->hunks.push_back(std::move(hunk));
      continue;
    }

    if (line.empty()) {
      ++i;
      continue;
    }
    fail(line_no, "unrecognized line '" + line + "'");
  }

  // Validate hunk ordering per file.
  for (const FilePatch& patch : patches) {
    for (std::size_t h = 1; h < patch.hunks.size(); ++h) {
      const Hunk& prev = patch.hunks[h - 1];
      const Hunk& cur = patch.hunks[h];
      if (cur.old_start < prev.old_start + prev.old_count ||
          cur.new_start < prev.new_start + prev.new_count)
        throw parse_error("unified diff: overlapping or unordered hunks in '" +
                          (patch.new_path.empty() ? patch.old_path : patch.new_path) + "'");
    }
  }
  return patches;
}

FilePatch parse_file_patch(std::string_view path, std::string_view patch_text) {
  std::vector<FilePatch> patches = parse_unified_diff(patch_text);
  if (patches.empty()) {
    FilePatch empty;  // binary or patch-less file
    empty.old_path = empty.new_path = std::string(path);
    return empty;
  }
  if (patches.size() > 1)
    throw parse_error("patch for '" + std::string(path) + "' contains " +
                      std::to_string(patches.size()) + " files, expected one");
  FilePatch patch = std::move(patches.front());
  if (patch.new_path.empty() && patch.old_path.empty()) {
    patch.old_path = patch.new_path = std::string(path);
  }
  return patch;
}

ReconstructedFile reconstruct(const FilePatch& patch) {
  ReconstructedFile file;
  file.path = patch.new_path.empty() ? patch.old_path : patch.new_path;
  std::string before;
  std::string after;
  bool any_before = false;
  bool any_after = false;
  for (const Hunk& hunk : patch.hunks) {
    for (const HunkLine& line : hunk.lines) {
      if (line.marker != LineMarker::Addition) {
        if (any_before) before.push_back('\n');
        before += line.text;
        any_before = true;
      }
      if (line.marker != LineMarker::Deletion) {
        if (any_after) after.push_back('\n');
        after += line.text;
        any_after = true;
      }
      if (line.marker == LineMarker::Addition) file.added_lines.push_back(line.text);
    }
  }
  file.before_changes = std::move(before);
  file.after_changes = std::move(after);
  return file;
}

ExclusionRules ExclusionRules::defaults() {
  ExclusionRules rules;
  rules.dirs = {"node_modules", "site-packages", "dist",
                "build",        "vendor",        ".venv",
                "__pycache__"};
  rules.extensions = {".gitignore", ".yaml", ".yml", ".lock",
                      ".md",        ".json", ".svg", ".png"};
  return rules;
}

ExclusionRules ExclusionRules::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open exclusion rules file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error("exclusion rules '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw schema_error("exclusion rules '" + path + "': expected an object");
  ExclusionRules rules;
  for (const auto& d : doc.value("dirs", nlohmann::json::array()))
    rules.dirs.insert(d.get<std::string>());
  for (const auto& e : doc.value("extensions", nlohmann::json::array()))
    rules.extensions.insert(e.get<std::string>());
  return rules;
}

bool is_excluded(std::string_view path, const ExclusionRules& rules) {
  std::size_t start = 0;
  std::string last_segment;
  while (start <= path.size()) {
    std::size_t slash = path.find('/', start);
    std::string_view segment = slash == std::string_view::npos
                                   ? path.substr(start)
                                   : path.substr(start, slash - start);
    if (!segment.empty()) {
      if (rules.dirs.count(std::string(segment))) return true;
      last_segment = std::string(segment);
    }
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  const std::string basename = to_lower_ascii(last_segment);
  for (const std::string& ext : rules.extensions) {
    const std::string wanted = to_lower_ascii(ext);
    if (basename.size() >= wanted.size() &&
        basename.compare(basename.size() - wanted.size(), wanted.size(), wanted) == 0)
      return true;
  }
  return false;
}

}  // namespace refadopt
