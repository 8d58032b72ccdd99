#pragma once

#include <stdexcept>
#include <string>

namespace refadopt {

// Error categories; the C API and the CLI exit codes are derived from these.
enum class ErrorKind {
  Usage,      // bad configuration or arguments
  Io,         // filesystem failure
  Schema,     // input violates a documented schema or invariant
  Parse,      // malformed diff / transcript / JSON text
  Network,    // transport failure
  RateLimit,  // API rate limit exhausted
  Data,       // well-formed input that cannot be processed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error usage_error(std::string msg) { return Error(ErrorKind::Usage, std::move(msg)); }
inline Error io_error(std::string msg) { return Error(ErrorKind::Io, std::move(msg)); }
inline Error schema_error(std::string msg) { return Error(ErrorKind::Schema, std::move(msg)); }
inline Error parse_error(std::string msg) { return Error(ErrorKind::Parse, std::move(msg)); }
inline Error network_error(std::string msg) { return Error(ErrorKind::Network, std::move(msg)); }
inline Error rate_limit_error(std::string msg) { return Error(ErrorKind::RateLimit, std::move(msg)); }
inline Error data_error(std::string msg) { return Error(ErrorKind::Data, std::move(msg)); }

}  // namespace refadopt
