#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "refadopt/adoption.hpp"
#include "refadopt/conversation.hpp"
#include "refadopt/diff.hpp"
#include "refadopt/similarity.hpp"

namespace refadopt {

struct PatchEntry {
  std::string path;
  std::string diff_text;  // unified diff body; empty for binary/oversize files
};

struct CommitRecord {
  std::string owner;
  std::string repo;
  std::string sha;  // 40 lowercase hex chars
  std::string message;
  Conversation conversation;
  std::vector<PatchEntry> patches;
  bool valid_url = true;
};

struct Corpus {
  std::vector<CommitRecord> commits;
};

// One (changed file, mapped suggestion) pair with its scores.
struct Datapoint {
  std::string refactoring_id;  // "{owner}/{repo}@{sha7}#{ordinal}"
  std::string owner;
  std::string repo;
  std::string sha;
  ReconstructedFile file;
  CodeBlock suggestion;
  double mapping_similarity = 0.0;
  bool low_confidence = false;
  MetricScores scores;
  AdoptionLevel adoption_class = AdoptionLevel::MajorModification;
  int prompt_index = 0;
  int total_prompts = 0;
};

std::string make_refactoring_id(const std::string& owner, const std::string& repo,
                                const std::string& sha, int ordinal);

// Corpus files are UTF-8 JSON: either a bare top-level array of commit
// objects or the versioned wrapper {"schema_version": 1, "commits": [...]}.
// Validation errors name the record index and field, e.g. "commits[3].sha".
Corpus corpus_from_json(const nlohmann::json& doc);
Corpus load_corpus(const std::string& path);

// Serialization always emits the versioned wrapper.
nlohmann::ordered_json corpus_to_json(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::string& path);

// Keeps the first record per (owner, repo, sha), drops records whose
// valid_url flag is false, preserves order otherwise.
Corpus dedupe_commits(const Corpus& corpus);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace refadopt
