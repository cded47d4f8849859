#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fibext {

bool is_prime(std::uint64_t n) noexcept;
std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

/// Dense polynomial over F_p, little-endian coefficients, no trailing zeros.
/// The modulus travels with the value; mixing moduli throws.
class FpPoly {
 public:
  using Coeff = std::uint32_t;

  FpPoly() = default;
  explicit FpPoly(std::uint32_t p) : p_(p) {}
  FpPoly(std::uint32_t p, std::vector<Coeff> coeffs);

  static FpPoly constant(std::uint32_t p, long long c);
  static FpPoly monomial(std::uint32_t p, std::size_t degree, Coeff c = 1);

  std::uint32_t modulus() const noexcept { return p_; }
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  Coeff coeff(std::size_t k) const noexcept { return k < c_.size() ? c_[k] : 0; }
  Coeff leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
  const std::vector<Coeff>& coeffs() const noexcept { return c_; }

  FpPoly scaled(Coeff c) const;
  /// Multiplication by u^k.
  FpPoly shifted_up(std::size_t k) const;
  /// Remainder mod u^k.
  FpPoly low_part(std::size_t k) const;
  /// Quotient by u^k (drops the k lowest coefficients).
  FpPoly high_part(std::size_t k) const;
  FpPoly monic() const;
  /// Coefficients in reverse order over a window of length n (coefficient
  /// n-1-k of the result is coeff(k)); used to turn Laurent tails into power series.
  FpPoly reversed(std::size_t n) const;

  FpPoly& operator+=(const FpPoly& o);
  FpPoly& operator-=(const FpPoly& o);
  friend FpPoly operator+(FpPoly a, const FpPoly& b) { return a += b; }
  friend FpPoly operator-(FpPoly a, const FpPoly& b) { return a -= b; }
  friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
  FpPoly operator-() const;

  friend bool operator==(const FpPoly&, const FpPoly&) = default;

 private:
  void trim();
  void check_same(const FpPoly& o) const;

  std::uint32_t p_ = 2;
  std::vector<Coeff> c_;
};

/// Euclidean division; b must be nonzero.
std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b);

/// g with f*g = 1 mod u^n. Requires f(0) != 0.
FpPoly inverse_series(const FpPoly& f, std::size_t n);

namespace detail {
/// Product of raw coefficient arrays. Switches to Kronecker substitution
/// through GMP for long operands.
std::vector<FpPoly::Coeff> multiply(std::span<const FpPoly::Coeff> a,
                                    std::span<const FpPoly::Coeff> b, std::uint32_t p);
}  // namespace detail

}  // namespace fibext
