#include "refadopt/github.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "refadopt/corpus.hpp"
#include "refadopt/errors.hpp"

namespace refadopt {
namespace {

using nlohmann::json;

constexpr const char* kApiHost = "api.github.com";

// GitHub truncates commit listings at 300 files; at that size patches can be
// missing wholesale, so the commit is flagged rather than trusted.
constexpr std::size_t kFileTruncationFloor = 300;

std::string fetch_label(const std::string& owner, const std::string& repo,
                        const std::string& sha) {
  return owner + "/" + repo + "@" + sha;
}

}  // namespace

std::string commit_cache_path(const std::string& cache_dir,
                              const std::string& owner, const std::string& repo,
                              const std::string& sha) {
  std::filesystem::path path(cache_dir);
  path /= owner;
  path /= repo;
  path /= sha + ".json";
  return path.string();
}

FetchOutcome parse_commit_response(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("commit response is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw parse_error("commit response is not a JSON object");

  if (!doc.contains("sha")) {
    // The API's not-found body carries only "message"/"documentation_url".
    if (doc.contains("message")) return {.valid = false, .commit = {}};
    throw parse_error("commit response lacks both sha and message");
  }

  FetchOutcome outcome;
  outcome.commit.sha = doc.at("sha").get<std::string>();
  if (doc.contains("commit") && doc["commit"].is_object() &&
      doc["commit"].contains("message")) {
    outcome.commit.message = doc["commit"]["message"].get<std::string>();
  }

  if (doc.contains("files")) {
    const json& files = doc.at("files");
    if (!files.is_array()) throw parse_error("commit response: files is not an array");
    for (const json& f : files) {
      FetchedFile file;
      file.path = f.value("filename", std::string());
      if (file.path.empty()) throw parse_error("commit response: file without filename");
      file.status = f.value("status", std::string());
      if (f.contains("patch") && f["patch"].is_string()) {
        file.has_patch = true;
        file.patch = f["patch"].get<std::string>();
      }
      outcome.commit.files.push_back(std::move(file));
    }
  }

  if (doc.value("truncated", false) ||
      outcome.commit.files.size() >= kFileTruncationFloor) {
    outcome.commit.truncated = true;
  }
  return outcome;
}

struct GithubClient::Impl {
  GithubOptions options;
  std::unique_ptr<Transport> transport;

  Transport::Response request(const std::string& owner, const std::string& repo,
                              const std::string& sha) {
    std::vector<std::pair<std::string, std::string>> headers = {
        {"Accept", "application/vnd.github+json"},
        {"User-Agent", "refadopt"},
        {"X-GitHub-Api-Version", "2022-11-28"},
    };
    if (!options.token.empty()) {
      headers.emplace_back("Authorization", "Bearer " + options.token);
    }
    std::string path = "/repos/" + owner + "/" + repo + "/commits/" + sha;
    return transport->get(kApiHost, path, headers);
  }

  // True when the status/headers signal an exhausted or secondary rate limit.
  static bool rate_limited(const Transport::Response& r) {
    if (r.status != 403 && r.status != 429) return false;
    auto remaining = r.headers.find("x-ratelimit-remaining");
    if (remaining != r.headers.end() && remaining->second == "0") return true;
    return r.headers.count("retry-after") > 0 || r.status == 429;
  }

  FetchOutcome fetch(const std::string& owner, const std::string& repo,
                     const std::string& sha) {
    const std::string label = fetch_label(owner, repo, sha);
    const std::string cache_file =
        commit_cache_path(options.cache_dir, owner, repo, sha);

    if (!options.cache_dir.empty() && std::filesystem::exists(cache_file)) {
      return parse_commit_response(read_text_file(cache_file));
    }
    if (options.offline) {
      throw network_error("offline and no cached response for " + label);
    }
    if (!transport) throw network_error("no transport configured for " + label);

    Transport::Response response;
    for (int attempt = 0;; ++attempt) {
      try {
        response = this->request(owner, repo, sha);
      } catch (const Error&) {
        throw;
      } catch (const std::exception& e) {
        throw network_error("GET " + label + " failed: " + e.what());
      }

      if (!rate_limited(response)) break;
      if (attempt >= options.max_retries) {
        throw rate_limit_error("rate limit exhausted fetching " + label);
      }
      long delay_ms = options.retry_base_delay_ms * (1L << attempt);
      auto retry_after = response.headers.find("retry-after");
      if (retry_after != response.headers.end()) {
        delay_ms = std::max(delay_ms, std::strtol(retry_after->second.c_str(),
                                                  nullptr, 10) *
                                          1000L);
      }
      if (delay_ms > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      }
    }

    if (response.status != 200 && response.status != 404) {
      throw network_error("GET " + label + " returned status " +
                          std::to_string(response.status));
    }

    if (!options.cache_dir.empty()) {
      std::filesystem::create_directories(
          std::filesystem::path(cache_file).parent_path());
      write_text_file(cache_file, response.body);
    }
    return parse_commit_response(response.body);
  }
};

GithubClient::GithubClient(GithubOptions options,
                           std::unique_ptr<Transport> transport)
    : impl_(std::make_unique<Impl>()) {
  if (options.token.empty()) {
    if (const char* env = std::getenv("GITHUB_TOKEN")) options.token = env;
  }
  if (options.concurrency < 1) options.concurrency = 1;
  impl_->options = std::move(options);
  impl_->transport = std::move(transport);
}

GithubClient::~GithubClient() = default;

FetchOutcome GithubClient::fetch(const std::string& owner,
                                 const std::string& repo,
                                 const std::string& sha) {
  return impl_->fetch(owner, repo, sha);
}

std::vector<FetchOutcome> GithubClient::fetch_many(const std::vector<Key>& keys) {
  std::vector<FetchOutcome> outcomes(keys.size());
  if (keys.empty()) return outcomes;

  auto workers = static_cast<std::size_t>(impl_->options.concurrency);
  workers = std::min(workers, keys.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      outcomes[i] = impl_->fetch(keys[i].owner, keys[i].repo, keys[i].sha);
    }
    return outcomes;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      if (failed.load()) break;
      std::size_t i = next.fetch_add(1);
      if (i >= keys.size()) break;
      try {
        outcomes[i] = impl_->fetch(keys[i].owner, keys[i].repo, keys[i].sha);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        break;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();

  if (first_error) std::rethrow_exception(first_error);
  return outcomes;
}

}  // namespace refadopt
