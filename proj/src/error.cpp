#include "heavytail/error.hpp"

namespace heavytail {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::schema: return "schema";
    case ErrorCode::empty_input: return "empty-input";
    case ErrorCode::zero_variance: return "zero-variance";
    case ErrorCode::domain: return "domain";
    case ErrorCode::insufficient_tail: return "insufficient-tail";
    case ErrorCode::divergent_estimate: return "divergent-estimate";
    case ErrorCode::range: return "range";
    case ErrorCode::config: return "config";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::solver_failure: return "solver-failure";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace heavytail
