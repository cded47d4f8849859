#pragma once

#include <stdexcept>
#include <string>

namespace fibext {

enum class Errc {
  domain_mismatch,
  unsupported_domain,
  zero_input,
  invalid_argument,
  rho_too_small,
  division_by_possible_zero,
  precision_cap_exceeded,
  certification_failed,
  identity_violated,
  palindrome_violated,
  recurrence_mismatch,
  rounding_ambiguous,
  search_space_too_large,
  criterion_precondition_unmet,
  determinant_nonzero,
  not_degenerate,
  not_primitive,
  out_of_range,
  parse_error,
  io_error,
};

const char* to_string(Errc code) noexcept;

/// Every failure in the library surfaces as this exception; code() is the
/// machine-readable reason, what() carries the failing index/quantity.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fibext
