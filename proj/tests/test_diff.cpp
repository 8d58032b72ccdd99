#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "diff_support.hpp"
#include "refadopt/corpus.hpp"
#include "refadopt/diff.hpp"
#include "refadopt/errors.hpp"
#include "refadopt/text.hpp"
#include "temp_dir.hpp"

using namespace refadopt;

TEST_CASE("a minimal hunk reconstructs definitionally") {
  FilePatch patch = parse_file_patch("f.txt", "@@ -1,2 +1,2 @@\n a\n-b\n+c\n");
  ReconstructedFile file = reconstruct(patch);
  CHECK(file.before_changes == "a\nb");
  CHECK(file.after_changes == "a\nc");
  CHECK(file.added_lines == std::vector<std::string>{"c"});
}

TEST_CASE("a context-only diff reconstructs to identical sides") {
  FilePatch patch = parse_file_patch("f.txt", "@@ -4,3 +4,3 @@\n x\n y\n z\n");
  ReconstructedFile file = reconstruct(patch);
  CHECK(file.before_changes == file.after_changes);
  CHECK(file.added_lines.empty());
}

TEST_CASE("the requirements-editor diff parses with its recorded hunk header") {
  std::string text =
      read_text_file(std::string(TEST_FIXTURE_DIR) + "/requirements_editor.diff");
  std::vector<FilePatch> patches = parse_unified_diff(text);
  REQUIRE(patches.size() == 1);
  CHECK(patches[0].new_path == "src/frontend/components/RequirementsEditor.jsx");
  REQUIRE(patches[0].hunks.size() == 1);
  const Hunk& hunk = patches[0].hunks[0];
  CHECK(hunk.old_start == 1);
  CHECK(hunk.old_count == 32);
  CHECK(hunk.new_start == 1);
  CHECK(hunk.new_count == 26);

  ReconstructedFile file = reconstruct(patches[0]);
  bool found = false;
  for (const std::string& line : file.added_lines)
    if (line ==
        "import { promptDescriptor, setPromptDescriptor } from "
        "'../model/promptDescriptor'; // Added setPromptDescriptor")
      found = true;
  CHECK(found);
  CHECK(split_lines(file.before_changes).size() == 32);
  CHECK(split_lines(file.after_changes).size() == 26);
}

TEST_CASE("count mismatches are rejected with a line number") {
  // Header claims 3 old-side lines but the hunk carries 2.
  try {
    parse_unified_diff("@@ -1,3 +1,1 @@\n a\n-b\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_unified_diff("@@ -1,1 +1,2 @@\n a\n+b\n+c\n+d\n"),
                  Error);
  CHECK_THROWS_AS(parse_unified_diff("@@ -1,bogus +1,1 @@\n a\n"), Error);
}

TEST_CASE("git headers, index lines and CRLF are tolerated") {
  std::string text =
      "diff --git a/src/a.c b/src/a.c\r\n"
      "index 123abc..456def 100644\r\n"
      "--- a/src/a.c\r\n"
      "+++ b/src/a.c\r\n"
      "@@ -1,1 +1,1 @@\r\n"
      "-old\r\n"
      "+new\r\n";
  std::vector<FilePatch> patches = parse_unified_diff(text);
  REQUIRE(patches.size() == 1);
  CHECK(patches[0].old_path == "src/a.c");
  CHECK(patches[0].new_path == "src/a.c");
  ReconstructedFile file = reconstruct(patches[0]);
  CHECK(file.before_changes == "old");
  CHECK(file.after_changes == "new");
}

TEST_CASE("multi-file diffs split on their headers") {
  std::string text =
      "--- a/one.py\n+++ b/one.py\n@@ -1,1 +1,1 @@\n-x\n+y\n"
      "--- a/two.py\n+++ b/two.py\n@@ -1,1 +1,1 @@\n-p\n+q\n";
  std::vector<FilePatch> patches = parse_unified_diff(text);
  REQUIRE(patches.size() == 2);
  CHECK(patches[0].new_path == "one.py");
  CHECK(patches[1].new_path == "two.py");
}

TEST_CASE("no-newline markers are consumed, not content") {
  FilePatch patch = parse_file_patch(
      "f", "@@ -1,1 +1,1 @@\n-old\n\\ No newline at end of file\n+new\n\\ No newline at end of file\n");
  CHECK(patch.old_missing_final_newline);
  CHECK(patch.new_missing_final_newline);
  ReconstructedFile file = reconstruct(patch);
  CHECK(file.before_changes == "old");
  CHECK(file.after_changes == "new");
}

TEST_CASE("unordered hunks are rejected") {
  CHECK_THROWS_AS(
      parse_unified_diff("@@ -10,1 +10,1 @@\n-a\n+b\n@@ -2,1 +2,1 @@\n-c\n+d\n"),
      Error);
}

TEST_CASE("generated edit scripts round-trip byte-exactly") {
  std::mt19937 rng(101);
  int non_trivial = 0;
  for (int i = 0; i < 200; ++i) {
    diffsup::EditScript script = diffsup::random_script(rng);

    // Whole-file hunk: the engine's hunk-visible reconstruction must equal
    // the full before/after texts.
    FilePatch full = parse_file_patch("gen.txt", diffsup::render_full(script));
    ReconstructedFile file = reconstruct(full);
    CHECK(file.before_changes == diffsup::join_lines(script.before));
    CHECK(file.after_changes == diffsup::join_lines(script.after));

    // Context-limited hunks: the independent applier must rebuild the full
    // after-file from the parsed patch.
    std::string ctx_diff = diffsup::render_context(script, 3);
    if (ctx_diff.empty()) continue;  // no changes rolled
    ++non_trivial;
    FilePatch patch = parse_file_patch("gen.txt", ctx_diff);
    std::vector<std::string> applied = diffsup::apply_patch(script.before, patch);
    CHECK(applied == script.after);

    // Every hunk line count agrees with its header.
    for (const Hunk& h : patch.hunks) {
      std::size_t old_lines = 0;
      std::size_t new_lines = 0;
      for (const HunkLine& l : h.lines) {
        if (l.marker != LineMarker::Addition) ++old_lines;
        if (l.marker != LineMarker::Deletion) ++new_lines;
      }
      CHECK(old_lines == h.old_count);
      CHECK(new_lines == h.new_count);
    }
  }
  CHECK(non_trivial > 150);
}

TEST_CASE("narrow context still applies cleanly") {
  std::mt19937 rng(202);
  for (int i = 0; i < 100; ++i) {
    diffsup::EditScript script = diffsup::random_script(rng);
    for (std::size_t ctx : {0, 1}) {
      std::string text = diffsup::render_context(script, ctx);
      if (text.empty()) continue;
      FilePatch patch = parse_file_patch("gen.txt", text);
      CHECK(diffsup::apply_patch(script.before, patch) == script.after);
    }
  }
}

TEST_CASE("default exclusion rules match the documented examples") {
  ExclusionRules rules = ExclusionRules::defaults();
  CHECK(is_excluded("web/node_modules/x.js", rules));
  CHECK(is_excluded("config/app.yaml", rules));
  CHECK(is_excluded(".gitignore", rules));
  CHECK(is_excluded("env/site-packages/pkg/mod.py", rules));
  CHECK_FALSE(is_excluded("src/main.rs", rules));
  CHECK_FALSE(is_excluded("lib/yaml_parser.py", rules));
}

TEST_CASE("exclusion rules load from JSON overrides") {
  testsup::TempDir dir;
  write_text_file(dir.str("rules.json"),
                  "{\"dirs\": [\"generated\"], \"extensions\": [\".tmp\"]}\n");
  ExclusionRules rules = ExclusionRules::load(dir.str("rules.json"));
  CHECK(is_excluded("a/generated/b.c", rules));
  CHECK(is_excluded("x/y.tmp", rules));
  CHECK_FALSE(is_excluded("web/node_modules/x.js", rules));
}
