#pragma once

#include <stdexcept>
#include <string>

namespace xifm {

enum class ErrorCode {
  InvalidArgument,
  Domain,
  Dimension,
  Routing,
  Physicality,
  Singularity,
  NonInvertible,
  Resolution,
  NoSolution,
  DegenerateInterval,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the core carries one of the codes above so the C
// layer can map it onto a status value without string matching.
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

}  // namespace xifm
