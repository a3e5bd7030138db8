#pragma once

#include <stdexcept>
#include <string>

namespace spdf {

enum class ErrorKind {
  InvalidArgument,  // precondition violated by caller input
  NotFound,         // unknown id
  Conflict,         // stale revision
  Unavailable,      // external provider down; retryable
  Parse,            // malformed input file
  Io,
  Numerical,        // singular / rank-deficient systems
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  bool retryable() const noexcept { return kind_ == ErrorKind::Unavailable; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace spdf
