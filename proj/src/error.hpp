#pragma once

#include <stdexcept>
#include <string>

namespace tsagg {

// Failure classes; the CLI maps these onto exit codes.
enum class ErrorCode {
  usage = 2,
  data = 3,
  infeasible = 4,
  no_incumbent = 5,
  io = 6,
  internal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tsagg
