#pragma once

#include <stdexcept>
#include <string>

namespace bcp {

enum class ErrorCode {
  InvalidArgument,      // malformed inputs (sizes, ranges, NaN)
  Config,               // scenario file rejected; message carries a JSON pointer
  DegenerateGeometry,   // agents/beacon closer than the geometric threshold
  AssumptionViolation,  // operation requires the symmetric gain assumptions
  DegenerateFamily,     // equilibria form a continuum, discrete query refused
  NoSuchEquilibrium,    // requested branch/type does not exist for the params
  InconsistentShape,    // shape state violates the closure constraints
  IllConditioned,       // eigensolve residual above tolerance
  Numeric,              // other numerical failure (non-finite values)
  Io,                   // file read/write failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace bcp
