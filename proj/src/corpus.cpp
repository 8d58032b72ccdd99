#include "refadopt/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "refadopt/errors.hpp"

namespace refadopt {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

bool is_sha40(const std::string& s) {
  if (s.size() != 40) return false;
  for (char c : s) {
    bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!hex) return false;
  }
  return true;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw schema_error(where + ": " + what);
}

const json& member(const json& obj, const std::string& ctx, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ctx + "." + key, "missing field");
  return *it;
}

std::string get_string(const json& obj, const std::string& ctx, const char* key,
                       bool allow_empty) {
  const json& value = member(obj, ctx, key);
  if (!value.is_string()) fail(ctx + "." + key, "expected a string");
  auto text = value.get<std::string>();
  if (!allow_empty && text.empty()) fail(ctx + "." + key, "must be non-empty");
  return text;
}

Turn parse_turn(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  Turn turn;
  const json& index = member(j, ctx, "index");
  if (!index.is_number_integer() || index.get<long long>() < 1) {
    fail(ctx + ".index", "expected a positive integer");
  }
  turn.index = index.get<int>();
  turn.prompt = get_string(j, ctx, "prompt", true);
  turn.response = get_string(j, ctx, "response", true);
  return turn;
}

Conversation parse_conversation(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  Conversation conv;
  conv.url = get_string(j, ctx, "url", false);
  if (j.contains("model")) conv.model = get_string(j, ctx, "model", true);

  const json& turns = member(j, ctx, "turns");
  if (!turns.is_array()) fail(ctx + ".turns", "expected an array");
  int prev_index = 0;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    std::string turn_ctx = ctx + ".turns[" + std::to_string(i) + "]";
    Turn turn = parse_turn(turns[i], turn_ctx);
    if (turn.index <= prev_index) {
      fail(turn_ctx + ".index", "prompt indices must be strictly increasing");
    }
    prev_index = turn.index;
    conv.turns.push_back(std::move(turn));
  }
  return conv;
}

CommitRecord parse_commit(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  CommitRecord commit;
  commit.owner = get_string(j, ctx, "owner", false);
  commit.repo = get_string(j, ctx, "repo", false);
  commit.sha = get_string(j, ctx, "sha", false);
  if (!is_sha40(commit.sha)) {
    fail(ctx + ".sha", "expected 40 lowercase hexadecimal characters");
  }
  commit.message = get_string(j, ctx, "message", false);
  commit.conversation = parse_conversation(member(j, ctx, "conversation"),
                                           ctx + ".conversation");

  if (j.contains("patches")) {
    const json& patches = j.at("patches");
    if (!patches.is_array()) fail(ctx + ".patches", "expected an array");
    for (std::size_t i = 0; i < patches.size(); ++i) {
      std::string patch_ctx = ctx + ".patches[" + std::to_string(i) + "]";
      const json& p = patches[i];
      if (!p.is_object()) fail(patch_ctx, "expected an object");
      PatchEntry entry;
      entry.path = get_string(p, patch_ctx, "path", false);
      entry.diff_text = get_string(p, patch_ctx, "diff_text", true);
      commit.patches.push_back(std::move(entry));
    }
  }

  if (j.contains("valid_url")) {
    const json& flag = j.at("valid_url");
    if (!flag.is_boolean()) fail(ctx + ".valid_url", "expected a boolean");
    commit.valid_url = flag.get<bool>();
  }
  return commit;
}

}  // namespace

std::string make_refactoring_id(const std::string& owner, const std::string& repo,
                                const std::string& sha, int ordinal) {
  return owner + "/" + repo + "@" + sha.substr(0, 7) + "#" + std::to_string(ordinal);
}

Corpus corpus_from_json(const json& doc) {
  const json* commits = nullptr;
  if (doc.is_array()) {
    commits = &doc;
  } else if (doc.is_object()) {
    if (doc.contains("schema_version")) {
      const json& version = doc.at("schema_version");
      if (!version.is_number_integer() || version.get<long long>() != 1) {
        fail("schema_version", "unsupported corpus schema version");
      }
    }
    auto it = doc.find("commits");
    if (it == doc.end()) fail("commits", "missing field");
    if (!it->is_array()) fail("commits", "expected an array");
    commits = &*it;
  } else {
    fail("corpus", "expected a JSON array or wrapper object");
  }

  Corpus corpus;
  corpus.commits.reserve(commits->size());
  for (std::size_t i = 0; i < commits->size(); ++i) {
    corpus.commits.push_back(
        parse_commit((*commits)[i], "commits[" + std::to_string(i) + "]"));
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
  try {
    return corpus_from_json(doc);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

ordered_json corpus_to_json(const Corpus& corpus) {
  ordered_json doc;
  doc["schema_version"] = 1;
  ordered_json commits = ordered_json::array();
  for (const CommitRecord& commit : corpus.commits) {
    ordered_json turns = ordered_json::array();
    for (const Turn& turn : commit.conversation.turns) {
      turns.push_back({{"index", turn.index},
                       {"prompt", turn.prompt},
                       {"response", turn.response}});
    }
    ordered_json patches = ordered_json::array();
    for (const PatchEntry& patch : commit.patches) {
      patches.push_back({{"path", patch.path}, {"diff_text", patch.diff_text}});
    }
    commits.push_back({{"owner", commit.owner},
                       {"repo", commit.repo},
                       {"sha", commit.sha},
                       {"message", commit.message},
                       {"conversation",
                        {{"url", commit.conversation.url},
                         {"model", commit.conversation.model},
                         {"turns", std::move(turns)}}},
                       {"patches", std::move(patches)},
                       {"valid_url", commit.valid_url}});
  }
  doc["commits"] = std::move(commits);
  return doc;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  write_text_file(path, corpus_to_json(corpus).dump(2) + "\n");
}

Corpus dedupe_commits(const Corpus& corpus) {
  Corpus out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const CommitRecord& commit : corpus.commits) {
    if (!commit.valid_url) continue;
    if (!seen.emplace(commit.owner, commit.repo, commit.sha).second) continue;
    out.commits.push_back(commit);
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw io_error("read failed: " + path);
  return std::move(buffer).str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace refadopt
