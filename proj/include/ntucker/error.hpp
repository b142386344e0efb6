#pragma once

#include <stdexcept>
#include <string>

namespace ntucker {

// Failure categories. The C API maps these one-to-one onto status codes.
enum class ErrorCode {
  invalid_argument = 1,
  shape_mismatch = 2,
  contract_violation = 3,
  io = 4,
  format = 5,
  resource = 6,
  numerical = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace ntucker
