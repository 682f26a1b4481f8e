#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heavytail {

enum class ErrorCode {
  schema,
  empty_input,
  zero_variance,
  domain,
  insufficient_tail,
  divergent_estimate,
  range,
  config,
  infeasible,
  solver_failure,
  io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace heavytail
