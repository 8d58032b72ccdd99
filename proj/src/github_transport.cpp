#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "refadopt/errors.hpp"
#include "refadopt/github.hpp"
#include "refadopt/text.hpp"

namespace refadopt {
namespace {

class HttpsTransport : public Transport {
 public:
  // A fresh client per call keeps this safe under concurrent fetches.
  Response get(const std::string& host, const std::string& path,
               const std::vector<std::pair<std::string, std::string>>& headers)
      override {
    httplib::SSLClient client(host);
    client.set_follow_location(true);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(30, 0);

    httplib::Headers request_headers;
    for (const auto& [key, value] : headers) request_headers.emplace(key, value);

    httplib::Result result = client.Get(path, request_headers);
    if (!result) {
      throw network_error("HTTPS GET " + host + path + " failed: " +
                          httplib::to_string(result.error()));
    }

    Response response;
    response.status = result->status;
    response.body = result->body;
    for (const auto& [key, value] : result->headers) {
      response.headers[to_lower_ascii(key)] = value;
    }
    return response;
  }
};

}  // namespace

std::unique_ptr<Transport> make_https_transport() {
  return std::make_unique<HttpsTransport>();
}

}  // namespace refadopt
