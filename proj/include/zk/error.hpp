#pragma once

#include <stdexcept>
#include <string>

namespace zk {

enum class ErrorCode {
  InvalidArgument = 1,
  NotConverged = 2,
  Numeric = 3,
  Io = 4,
  Domain = 5,
};

// Every failure raised by the library carries one of the codes above; the C
// API maps them one-to-one onto zk_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace zk
