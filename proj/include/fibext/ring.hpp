#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fibext/fp_poly.hpp"
#include "fibext/interval.hpp"

namespace fibext {

enum class DomainKind : std::uint8_t {
  rational_integers,
  gaussian_integers,
  z_sqrt_minus5,
  poly_over_prime_field,
};

/// One of the four supported coefficient rings A. Absolute values:
/// the usual complex modulus for the three archimedean rings, |f| = e^{deg f}
/// on F_p[u].
class Domain {
 public:
  static Domain integers() { return Domain(DomainKind::rational_integers, 0); }
  static Domain gaussian() { return Domain(DomainKind::gaussian_integers, 0); }
  static Domain sqrt_minus5() { return Domain(DomainKind::z_sqrt_minus5, 0); }
  /// p must be a prime below 2^31.
  static Domain polynomials(std::uint32_t p);
  static Domain from_name(std::string_view name, std::uint32_t p = 0);

  Domain() = default;

  DomainKind kind() const noexcept { return kind_; }
  std::uint32_t p() const noexcept { return p_; }
  bool ufd() const noexcept { return kind_ != DomainKind::z_sqrt_minus5; }
  bool euclidean() const noexcept { return ufd(); }
  bool archimedean() const noexcept { return kind_ != DomainKind::poly_over_prime_field; }
  bool is_poly() const noexcept { return kind_ == DomainKind::poly_over_prime_field; }
  bool is_quadratic() const noexcept {
    return kind_ == DomainKind::gaussian_integers || kind_ == DomainKind::z_sqrt_minus5;
  }
  /// Config/CSV name, e.g. "gaussian-integers".
  const char* name() const noexcept;
  /// Short mathematical name, e.g. "Z[i]" or "F_3[u]".
  std::string label() const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Domain(DomainKind k, std::uint32_t p) : kind_(k), p_(p) {}

  DomainKind kind_ = DomainKind::rational_integers;
  std::uint32_t p_ = 0;
};

/// Exact element of A in canonical form. For the quadratic rings the pair
/// (x, y) means x + y*i or x + y*sqrt(-5).
class RingElement {
 public:
  RingElement() = default;

  static RingElement zero(const Domain& d);
  static RingElement one(const Domain& d) { return from_int(d, 1); }
  static RingElement from_int(const Domain& d, long v);
  static RingElement integer(mpz_class v);
  static RingElement quadratic(const Domain& d, mpz_class x, mpz_class y);
  static RingElement polynomial(FpPoly f);
  /// The indeterminate u of F_p[u].
  static RingElement variable(std::uint32_t p);

  const Domain& domain() const noexcept { return dom_; }
  const mpz_class& x() const noexcept { return x_; }
  const mpz_class& y() const noexcept { return y_; }
  const FpPoly& poly() const noexcept { return f_; }

  bool is_zero() const;
  bool is_unit() const;
  /// x * conj(x) for the archimedean rings (x^2 on Z).
  mpz_class norm() const;
  /// Degree on F_p[u]; -1 for zero.
  long degree() const;
  RingElement conj() const;

  RingElement operator-() const;
  RingElement& operator+=(const RingElement& o);
  RingElement& operator-=(const RingElement& o);
  RingElement& operator*=(const RingElement& o);
  friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
  friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
  friend RingElement operator*(RingElement a, const RingElement& b) { return a *= b; }
  friend bool operator==(const RingElement& a, const RingElement& b);

  std::string to_string() const;

 private:
  void check_same(const RingElement& o) const;

  Domain dom_;
  mpz_class x_{0};
  mpz_class y_{0};
  FpPoly f_;
};

/// log|x|: the exact degree on F_p[u]; an enclosure of (1/2) ln N(x) of
/// width <= eps otherwise. Zero maps to -inf.
LogMag abs_log(const RingElement& x, const mpq_class& eps);
LogMag abs_log(const RingElement& x);

/// Euclidean division a = q*b + r with |r| < |b| (Z, Z[i], F_p[u]).
std::pair<RingElement, RingElement> divmod(const RingElement& a, const RingElement& b);
/// a / b when b divides a exactly (all four rings).
std::optional<RingElement> divide_exact(const RingElement& a, const RingElement& b);
bool divides(const RingElement& d, const RingElement& a);

/// Unit-normalized greatest common divisor. Not available on Z[sqrt(-5)].
RingElement gcd(const RingElement& a, const RingElement& b);
/// gcd of the coordinates is a unit. Coordinates must not all vanish.
bool is_primitive(std::span<const RingElement> coords);

struct UnitNormalized {
  RingElement canonical;
  RingElement unit;  ///< input = unit * canonical
};

/// Canonical associates: positive (Z), monic (F_p[u]), rotated into
/// Re > 0, Im >= 0 (Z[i]), x > 0 or x = 0 < y (Z[sqrt(-5)]).
UnitNormalized unit_normalize(const RingElement& x);

std::vector<RingElement> units(const Domain& d);

/// Total order used for deterministic tie-breaking: height first
/// (|x|, norm, or degree), then coordinates.
std::strong_ordering canonical_compare(const RingElement& a, const RingElement& b);

}  // namespace fibext
