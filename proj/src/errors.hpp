#ifndef HAWKES_ERRORS_HPP
#define HAWKES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hawkes {

// Error classes, one per failure mode surfaced through the C API and the
// CLI exit codes. Values are part of the library ABI.
enum class ErrorCode : int {
  invalid_argument = 1,
  degenerate = 2,       // non-positive rates, bad kernel parameters
  stability = 3,        // spectral radius at or above the criticality margin
  convergence = 4,      // renewal iteration exceeded its bound
  size = 5,             // order beyond the enabled limit
  malformed_tree = 6,   // out-degree-1 internal node or label violation
  grid = 7,             // requested lags exceed the renewal horizon
  window = 8,           // too few interior bins / margin too large
  lineage = 9,          // estimator needs lineage the stream lacks
  bound = 10,           // no finite thinning intensity bound
  explosion = 11,       // cluster exceeded the event cap
  parse = 12,           // malformed config / CSV
  io = 13,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace hawkes

#endif
