#include "fibext/error.hpp"

namespace fibext {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::domain_mismatch: return "domain-mismatch";
    case Errc::unsupported_domain: return "unsupported-domain";
    case Errc::zero_input: return "zero-input";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::rho_too_small: return "rho-too-small";
    case Errc::division_by_possible_zero: return "division-by-possible-zero";
    case Errc::precision_cap_exceeded: return "precision-cap-exceeded";
    case Errc::certification_failed: return "certification-failed";
    case Errc::identity_violated: return "identity-violated";
    case Errc::palindrome_violated: return "palindrome-violated";
    case Errc::recurrence_mismatch: return "recurrence-mismatch";
    case Errc::rounding_ambiguous: return "rounding-ambiguous";
    case Errc::search_space_too_large: return "search-space-too-large";
    case Errc::criterion_precondition_unmet: return "criterion-precondition-unmet";
    case Errc::determinant_nonzero: return "determinant-nonzero";
    case Errc::not_degenerate: return "not-degenerate";
    case Errc::not_primitive: return "not-primitive";
    case Errc::out_of_range: return "out-of-range";
    case Errc::parse_error: return "parse-error";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace fibext
