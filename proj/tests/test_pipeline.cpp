#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "refadopt/corpus.hpp"
#include "refadopt/errors.hpp"
#include "refadopt/pipeline.hpp"
#include "temp_dir.hpp"

using namespace refadopt;
using nlohmann::json;

namespace {

const std::string kShaA = "1111111111111111111111111111111111111111";
const std::string kShaB = "2222222222222222222222222222222222222222";
const std::string kShaC = "3333333333333333333333333333333333333333";

json refactor_commit() {
  return json{
      {"owner", "acme"},
      {"repo", "webapp"},
      {"sha", kShaA},
      {"message", "Refactor the parser module"},
      {"conversation",
       {{"url", "https://chat.example/share/p1"},
        {"model", "gpt-4"},
        {"turns",
         json::array(
             {{{"index", 1},
               {"prompt", "make the helper nicer"},
               {"response",
                "Sure:\n```python\ndef helper():\n    return 1\n```\n"}},
              {{"index", 2},
               {"prompt", "now the parser"},
               {"response",
                "Like this:\n```python\ndef parse(x):\n    return x\n```\n"}}})}}},
      {"patches",
       json::array(
           {{{"path", "src/parser.py"},
             {"diff_text",
              "@@ -1,1 +1,2 @@\n-def parse_old(x):\n+def parse(x):\n+    return x\n"}},
            {{"path", "src/util.py"},
             {"diff_text",
              "@@ -1,2 +1,2 @@\n def helper():\n-    return 0\n+    return 1\n"}},
            {{"path", "notes/README.md"},
             {"diff_text", "@@ -1,1 +1,1 @@\n-a\n+b\n"}}})},
      {"valid_url", true},
  };
}

json feature_commit() {
  json c = refactor_commit();
  c["sha"] = kShaB;
  c["message"] = "Add avatar upload";
  return c;
}

RunConfig config_for(const testsup::TempDir& dir, const std::string& out) {
  RunConfig config;
  config.corpus_path = dir.str("corpus.json");
  config.cache_dir = dir.str("cache");
  config.out_dir = dir.str(out);
  config.offline = true;
  return config;
}

void write_corpus(const testsup::TempDir& dir, const json& commits) {
  write_text_file(dir.str("corpus.json"), commits.dump(2) + "\n");
}

std::vector<std::string> read_out_files(const std::string& out_dir) {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(out_dir))
    names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

TEST_CASE("the composed run equals the staged runs byte for byte") {
  testsup::TempDir dir;
  write_corpus(dir, json::array({refactor_commit(), feature_commit()}));

  RunConfig staged = config_for(dir, "staged");
  for (const char* stage :
       {"filter", "fetch", "extract", "map", "score", "classify", "report"})
    run_stage(staged, stage);

  RunConfig composed = config_for(dir, "composed");
  run_stage(composed, "run");

  std::vector<std::string> staged_files = read_out_files(staged.out_dir);
  std::vector<std::string> composed_files = read_out_files(composed.out_dir);
  REQUIRE(staged_files == composed_files);
  CHECK(staged_files.size() >= 16);
  for (const std::string& name : staged_files) {
    CAPTURE(name);
    CHECK(read_text_file(staged.out_dir + "/" + name) ==
          read_text_file(composed.out_dir + "/" + name));
  }
}

TEST_CASE("a full offline run produces the documented artifacts") {
  testsup::TempDir dir;
  write_corpus(dir, json::array({refactor_commit(), feature_commit()}));
  RunConfig config = config_for(dir, "out");
  run_stage(config, "run");

  for (const char* name :
       {"filtered.json", "fetched.json", "extracted.json", "mapped.json",
        "scored.json", "classified.json", "datapoints.csv", "datapoints.json",
        "aggregates.csv", "prompt_positions.csv", "classification_counts.csv",
        "review_subset.csv", "summary.json", "hist_levenshtein.svg",
        "hist_jaccard.svg", "hist_token_match.svg", "hist_crystal_bleu.svg"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(config.out_dir + "/" + name));
  }

  // The feature commit is filtered, the README patch excluded; both files of
  // the refactoring commit match their suggestions verbatim.
  json summary = json::parse(read_text_file(config.out_dir + "/summary.json"));
  CHECK(summary["commits"] == 1);
  CHECK(summary["datapoints"] == 2);
  CHECK(summary["repos"] == 1);
  CHECK(summary["classification"]["FULL"] == 2);
  CHECK(summary["classification"]["MAJOR_MODIFICATION"] == 0);

  std::string csv = read_text_file(config.out_dir + "/datapoints.csv");
  CHECK(csv.find("src/parser.py") != std::string::npos);
  CHECK(csv.find("src/util.py") != std::string::npos);
  CHECK(csv.find("README.md") == std::string::npos);

  // Both datapoints map to the prompt whose block they were built from.
  json datapoints = json::parse(read_text_file(config.out_dir + "/datapoints.json"));
  for (const json& row : datapoints["datapoints"]) {
    if (row["file_path"] == "src/parser.py") CHECK(row["prompt_index"] == 2);
    if (row["file_path"] == "src/util.py") CHECK(row["prompt_index"] == 1);
    CHECK(row["total_prompts"] == 2);
  }
}

TEST_CASE("parallel scoring and mapping match the serial run") {
  testsup::TempDir dir;
  write_corpus(dir, json::array({refactor_commit()}));

  RunConfig serial = config_for(dir, "serial");
  serial.jobs = 1;
  run_stage(serial, "run");

  RunConfig parallel = config_for(dir, "parallel");
  parallel.jobs = 4;
  run_stage(parallel, "run");

  for (const char* name : {"datapoints.csv", "datapoints.json", "summary.json"}) {
    CAPTURE(name);
    CHECK(read_text_file(serial.out_dir + "/" + name) ==
          read_text_file(parallel.out_dir + "/" + name));
  }
}

TEST_CASE("fetch fills pending patches from the commit cache") {
  testsup::TempDir dir;
  json commit = refactor_commit();
  commit["sha"] = kShaC;
  commit["message"] = "Improve the cache layer";
  commit["patches"] = json::array();
  commit["conversation"]["turns"] = json::array(
      {{{"index", 1},
        {"prompt", "bump the constant"},
        {"response", "Do this:\n```python\na = 2\n```\n"}}});
  write_corpus(dir, json::array({commit}));

  json cached = {
      {"sha", kShaC},
      {"commit", {{"message", "Improve the cache layer"}}},
      {"files", json::array({{{"filename", "src/cachey.py"},
                              {"status", "modified"},
                              {"patch", "@@ -1,1 +1,1 @@\n-a = 1\n+a = 2"}}})}};
  std::filesystem::create_directories(dir.str("cache") + "/acme/webapp");
  write_text_file(dir.str("cache") + "/acme/webapp/" + kShaC + ".json",
                  cached.dump());

  RunConfig config = config_for(dir, "out");
  run_stage(config, "run");

  json summary = json::parse(read_text_file(config.out_dir + "/summary.json"));
  CHECK(summary["datapoints"] == 1);
  CHECK(summary["classification"]["FULL"] == 1);
}

TEST_CASE("an offline run without cache or patches is a network error") {
  testsup::TempDir dir;
  json commit = refactor_commit();
  commit["patches"] = json::array();
  write_corpus(dir, json::array({commit}));
  RunConfig config = config_for(dir, "out");
  try {
    run_stage(config, "run");
    FAIL("expected a network error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Network);
    CHECK(std::string(e.what()).find("fetch") != std::string::npos);
  }
}

TEST_CASE("a corpus with no refactoring commits still reports, with warnings") {
  testsup::TempDir dir;
  write_corpus(dir, json::array({feature_commit()}));
  RunConfig config = config_for(dir, "out");
  std::vector<std::string> warnings = run_stage(config, "run");

  bool warned = false;
  for (const std::string& w : warnings)
    if (w.find("no refactoring commits") != std::string::npos) warned = true;
  CHECK(warned);

  json summary = json::parse(read_text_file(config.out_dir + "/summary.json"));
  CHECK(summary["datapoints"] == 0);
  CHECK(summary["commits"] == 0);
}

TEST_CASE("stage errors carry the stage name") {
  testsup::TempDir dir;
  RunConfig config = config_for(dir, "out");
  config.corpus_path = dir.str("missing.json");
  try {
    run_stage(config, "filter");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("filter") != std::string::npos);
  }
}

TEST_CASE("classify refuses unscored input") {
  testsup::TempDir dir;
  write_corpus(dir, json::array({refactor_commit()}));
  RunConfig config = config_for(dir, "out");
  run_stage(config, "filter");
  run_stage(config, "fetch");
  run_stage(config, "extract");
  run_stage(config, "map");

  SUBCASE("missing stage file") {
    try {
      run_stage(config, "classify");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Io);
      CHECK(std::string(e.what()).find("classify") != std::string::npos);
    }
  }
  SUBCASE("stage file without scores") {
    std::filesystem::copy_file(config.out_dir + "/mapped.json",
                               config.out_dir + "/scored.json");
    try {
      run_stage(config, "classify");
      FAIL("expected a schema error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Schema);
      CHECK(std::string(e.what()).find("run the score stage first") !=
            std::string::npos);
    }
  }
}

TEST_CASE("configuration problems are usage errors") {
  testsup::TempDir dir;
  RunConfig config = config_for(dir, "out");

  SUBCASE("missing corpus") {
    config.corpus_path = "";
    CHECK_THROWS_AS(run_stage(config, "filter"), Error);
  }
  SUBCASE("bad jaccard n") {
    config.jaccard_n = 0;
    CHECK_THROWS_AS(config.validate(), Error);
  }
  SUBCASE("bad crystal k") {
    config.crystal_k = 0;
    CHECK_THROWS_AS(config.validate(), Error);
  }
  SUBCASE("bad thresholds") {
    config.thresholds.low = 0.95;
    CHECK_THROWS_AS(config.validate(), Error);
  }
  SUBCASE("bad min similarity") {
    config.min_similarity = 1.5;
    CHECK_THROWS_AS(config.validate(), Error);
  }
  SUBCASE("bad jobs") {
    config.jobs = 0;
    CHECK_THROWS_AS(config.validate(), Error);
  }
  SUBCASE("unknown stage") {
    write_corpus(dir, json::array({refactor_commit()}));
    CHECK_THROWS_AS(run_stage(config, "bogus"), Error);
  }
}

TEST_CASE("custom keywords change what survives the filter") {
  testsup::TempDir dir;
  json commit = refactor_commit();
  commit["message"] = "Shiny new modernized parser";
  write_corpus(dir, json::array({commit}));
  write_text_file(dir.str("keywords.txt"),
                  "# project-specific verbs\nshiny\nmodernize\n");

  RunConfig config = config_for(dir, "out");
  config.keywords_path = dir.str("keywords.txt");
  run_stage(config, "run");

  json summary = json::parse(read_text_file(config.out_dir + "/summary.json"));
  CHECK(summary["commits"] == 1);
  CHECK(summary["datapoints"] == 2);
}
