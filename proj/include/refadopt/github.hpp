#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace refadopt {

struct FetchedFile {
  std::string path;
  std::string status;  // added / modified / removed / renamed ...
  bool has_patch = false;
  std::string patch;  // absent for binary or oversize files
};

struct FetchedCommit {
  std::string sha;
  std::string message;
  std::vector<FetchedFile> files;
  bool truncated = false;  // the API omitted file patches
};

// A fetch either yields a commit or establishes that the URL is invalid.
struct FetchOutcome {
  bool valid = true;  // false: the API answered 404 for this sha
  FetchedCommit commit;
};

// Minimal HTTP seam so tests can script responses. Implementations must be
// safe for concurrent get() calls.
class Transport {
 public:
  struct Response {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers;  // lowercase keys
  };

  virtual ~Transport() = default;
  virtual Response get(const std::string& host, const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>&
                           headers) = 0;
};

// TLS transport against api.github.com (one connection per request).
std::unique_ptr<Transport> make_https_transport();

struct GithubOptions {
  std::string cache_dir;
  bool offline = false;
  std::string token;  // empty: read GITHUB_TOKEN from the environment
  int concurrency = 4;
  int max_retries = 3;
  int retry_base_delay_ms = 1000;  // doubled per attempt; rate-limit resets win
};

// Response bodies are cached bit-exact under {cache_dir}/{owner}/{repo}/
// {sha}.json (404 bodies included, so invalid URLs replay offline).
std::string commit_cache_path(const std::string& cache_dir,
                              const std::string& owner, const std::string& repo,
                              const std::string& sha);

// Parses a REST v3 commit body. A body without a "sha" field is the API's
// not-found answer and yields valid = false.
FetchOutcome parse_commit_response(const std::string& body);

class GithubClient {
 public:
  explicit GithubClient(GithubOptions options,
                        std::unique_ptr<Transport> transport = nullptr);
  ~GithubClient();

  GithubClient(const GithubClient&) = delete;
  GithubClient& operator=(const GithubClient&) = delete;

  // GET /repos/{owner}/{repo}/commits/{sha}, cache first. Throws a network
  // error on transport failure or offline cache miss, a rate-limit error
  // once retries are exhausted.
  FetchOutcome fetch(const std::string& owner, const std::string& repo,
                     const std::string& sha);

  struct Key {
    std::string owner;
    std::string repo;
    std::string sha;
  };

  // Fetches with at most `concurrency` requests in flight; results are
  // positionally aligned with `keys`. The first error wins and is rethrown
  // after all workers stop.
  std::vector<FetchOutcome> fetch_many(const std::vector<Key>& keys);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace refadopt
