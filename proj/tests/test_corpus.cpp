#include <doctest.h>

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "refadopt/corpus.hpp"
#include "refadopt/errors.hpp"
#include "temp_dir.hpp"

using namespace refadopt;
using nlohmann::json;

namespace {

json minimal_commit(const std::string& sha) {
  return json{
      {"owner", "acme"},
      {"repo", "webapp"},
      {"sha", sha},
      {"message", "Refactor things"},
      {"conversation",
       {{"url", "https://chat.example/share/" + sha.substr(0, 6)},
        {"model", "gpt-4"},
        {"turns",
         json::array({{{"index", 1},
                       {"prompt", "please refactor"},
                       {"response", "```\ncode\n```"}}})}}},
      {"patches", json::array({{{"path", "a.py"},
                                {"diff_text", "@@ -1,1 +1,1 @@\n-x\n+y\n"}}})},
      {"valid_url", true},
  };
}

const std::string kShaA = "aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa";
const std::string kShaB = "bbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb";
const std::string kShaC = "cccccccccccccccccccccccccccccccccccccccc";

}  // namespace

TEST_CASE("a wrapper document and a bare array load the same") {
  json bare = json::array({minimal_commit(kShaA), minimal_commit(kShaB)});
  json wrapped = {{"schema_version", 1}, {"commits", bare}};
  CHECK(corpus_from_json(bare).commits.size() == 2);
  CHECK(corpus_from_json(wrapped).commits.size() == 2);
}

TEST_CASE("schema violations name the record and field") {
  json bad = minimal_commit(kShaA);
  bad["sha"] = kShaA.substr(1);  // 39 chars
  try {
    corpus_from_json(json::array({minimal_commit(kShaB), bad}));
    FAIL("expected a schema error");
  } catch (const Error& e) {
    std::string what = e.what();
    CHECK(what.find("commits[1]") != std::string::npos);
    CHECK(what.find("sha") != std::string::npos);
  }
}

TEST_CASE("uppercase shas, empty messages and missing conversations are rejected") {
  json upper = minimal_commit(kShaA);
  upper["sha"] = "AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA";
  CHECK_THROWS_AS(corpus_from_json(json::array({upper})), Error);

  json empty_message = minimal_commit(kShaA);
  empty_message["message"] = "";
  CHECK_THROWS_AS(corpus_from_json(json::array({empty_message})), Error);

  json no_conversation = minimal_commit(kShaA);
  no_conversation.erase("conversation");
  CHECK_THROWS_AS(corpus_from_json(json::array({no_conversation})), Error);
}

TEST_CASE("turn indices must be positive and strictly increasing") {
  json commit = minimal_commit(kShaA);
  commit["conversation"]["turns"] = json::array(
      {{{"index", 2}, {"prompt", "p"}, {"response", "r"}},
       {{"index", 2}, {"prompt", "p"}, {"response", "r"}}});
  CHECK_THROWS_AS(corpus_from_json(json::array({commit})), Error);

  commit["conversation"]["turns"] =
      json::array({{{"index", 0}, {"prompt", "p"}, {"response", "r"}}});
  CHECK_THROWS_AS(corpus_from_json(json::array({commit})), Error);
}

TEST_CASE("unknown schema versions are rejected") {
  json doc = {{"schema_version", 2}, {"commits", json::array()}};
  CHECK_THROWS_AS(corpus_from_json(doc), Error);
}

TEST_CASE("load, save and reload is the identity") {
  testsup::TempDir dir;
  json doc = json::array({minimal_commit(kShaA), minimal_commit(kShaB)});
  write_text_file(dir.str("corpus.json"), doc.dump(2) + "\n");

  Corpus first = load_corpus(dir.str("corpus.json"));
  save_corpus(first, dir.str("again.json"));
  Corpus second = load_corpus(dir.str("again.json"));

  REQUIRE(first.commits.size() == second.commits.size());
  CHECK(corpus_to_json(first) == corpus_to_json(second));

  // And the serialized form is stable from then on.
  save_corpus(second, dir.str("third.json"));
  CHECK(read_text_file(dir.str("again.json")) ==
        read_text_file(dir.str("third.json")));
}

TEST_CASE("loading a missing file is an I/O error with the path") {
  try {
    load_corpus("/nonexistent/corpus.json");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("corpus.json") != std::string::npos);
  }
}

TEST_CASE("malformed JSON reports a parse error naming the file") {
  testsup::TempDir dir;
  write_text_file(dir.str("broken.json"), "{not json");
  CHECK_THROWS_AS(load_corpus(dir.str("broken.json")), Error);
}

TEST_CASE("dedupe keeps the first of identical shas and drops invalid urls") {
  Corpus corpus;
  CommitRecord a;
  a.owner = "acme";
  a.repo = "webapp";
  a.sha = kShaA;
  a.message = "first";
  CommitRecord a_again = a;
  a_again.message = "second";
  CommitRecord invalid;
  invalid.owner = "acme";
  invalid.repo = "webapp";
  invalid.sha = kShaB;
  invalid.message = "broken link";
  invalid.valid_url = false;
  CommitRecord c;
  c.owner = "acme";
  c.repo = "dataviz";
  c.sha = kShaC;
  c.message = "kept";
  corpus.commits = {a, a_again, invalid, c};

  Corpus deduped = dedupe_commits(corpus);
  REQUIRE(deduped.commits.size() == 2);
  CHECK(deduped.commits[0].message == "first");
  CHECK(deduped.commits[1].message == "kept");

  // Idempotence and shrink-only.
  Corpus twice = dedupe_commits(deduped);
  CHECK(twice.commits.size() == deduped.commits.size());
  CHECK(deduped.commits.size() <= corpus.commits.size());

  // A corpus of distinct valid commits passes through unchanged.
  Corpus distinct;
  distinct.commits = {a, c};
  CHECK(dedupe_commits(distinct).commits.size() == 2);
}

TEST_CASE("refactoring ids are short and distinct per file") {
  std::string id = make_refactoring_id("acme", "webapp", kShaA, 1);
  CHECK(id == "acme/webapp@aaaaaaa#1");
  CHECK(make_refactoring_id("acme", "webapp", kShaA, 2) != id);
}
