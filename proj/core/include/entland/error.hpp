#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entland {

enum class ErrorCode {
  invalid_argument,
  invalid_distribution,
  range_too_narrow,
  degenerate_sample,
  non_smooth_kernel,
  underflow,
  duplicate_locations,
  not_unit_norm,
  degenerate_marginal,
  neighborhood_contains_other_candidate,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `code()` identifies the condition;
/// the message carries the offending values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace entland
