#pragma once

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <variant>

#include "fibext/error.hpp"
#include "fibext/fp_poly.hpp"
#include "fibext/interval.hpp"
#include "fibext/ring.hpp"

namespace fibext {

/// m * 2^e.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(mpz_class man, long exp);
  explicit Dyadic(const mpz_class& v) : Dyadic(v, 0) {}

  /// Nearest-below (down=true) or nearest-above value with `bits` significant bits.
  static Dyadic from_rational(const mpq_class& q, long bits, bool down);

  const mpz_class& mantissa() const noexcept { return man_; }
  long exponent() const noexcept { return exp_; }
  bool is_zero() const { return man_ == 0; }
  int sign() const { return sgn(man_); }
  /// Smallest k with |v| < 2^k (LONG_MIN for zero).
  long magnitude() const;
  mpq_class to_mpq() const;

  /// Truncated toward -inf to a multiple of 2^cut; exact when already coarser.
  Dyadic floor_to(long cut) const;
  /// Nonnegative upper bound with at most `bits` significant bits.
  Dyadic upper_abs(long bits = 30) const;
  /// Nonnegative lower bound with at most `bits` significant bits.
  Dyadic lower_abs(long bits = 30) const;
  Dyadic mul_2exp(long k) const { return {man_, exp_ + k}; }

  Dyadic operator-() const { return {-man_, exp_}; }
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  friend int cmp(const Dyadic& a, const Dyadic& b);

 private:
  void normalize();
  mpz_class man_{0};
  long exp_ = 0;
};

/// Quotient a/b of positive dyadics to `bits` bits, rounded down or up.
Dyadic divide(const Dyadic& a, const Dyadic& b, long bits, bool down);

struct Precision {
  long bits = 128;   ///< ball working precision
  long window = 64;  ///< jet window for inverting exact non-monomials
};

/// Start, double until decided, stop at the cap.
struct PrecisionPolicy {
  long start_bits = 128;
  long cap_bits = 1L << 16;
  long start_window = 64;
  long cap_window = 1L << 14;

  Precision start() const { return {start_bits, start_window}; }
  std::optional<Precision> next(const Precision& p) const;
};

/// Midpoint-radius disk in C (or interval in R when `real`).
class Ball {
 public:
  Ball() = default;
  Ball(Dyadic re, Dyadic im, Dyadic rad, bool real);
  static Ball exact(const mpz_class& re, const mpz_class& im, bool real);
  static Ball from_rational(const mpq_class& re, const mpq_class& im, const mpq_class& rad,
                            bool real, long bits);

  const Dyadic& re() const noexcept { return re_; }
  const Dyadic& im() const noexcept { return im_; }
  const Dyadic& rad() const noexcept { return rad_; }
  bool is_real() const noexcept { return real_; }

  /// Real balls only.
  Interval real_interval() const;
  /// Enclosure of |value|.
  Interval abs_interval(long bits = 128) const;
  bool contains(const mpq_class& re, const mpq_class& im) const;

 private:
  Dyadic re_, im_, rad_;
  bool real_ = true;
};

/// Truncated Laurent series in 1/u over F_p: sum of window coefficients
/// c_k u^{low+k}, plus an unknown remainder of absolute value <= e^{tail}
/// when `tail` is set. All coefficients at exponents <= tail are dropped.
class Jet {
 public:
  Jet() = default;
  static Jet exact(const FpPoly& f);
  static Jet make(FpPoly window, long low, std::optional<long> tail);

  std::uint32_t modulus() const noexcept { return window_.modulus(); }
  const FpPoly& window() const noexcept { return window_; }
  long low() const noexcept { return low_; }
  const std::optional<long>& tail() const noexcept { return tail_; }
  bool is_exact() const noexcept { return !tail_; }
  bool has_leading() const noexcept { return !window_.is_zero(); }
  long leading_exponent() const;
  FpPoly::Coeff coeff_at(long e) const;
  Jet with_tail(long t) const;
  /// Terms with exponent >= 0. Requires tail < 0.
  FpPoly polynomial_part() const;
  /// Terms with exponent < 0, same tail.
  Jet fractional_part() const;

 private:
  FpPoly window_;
  long low_ = 0;
  std::optional<long> tail_;
};

/// Error-bounded element of the completion of K.
class Scalar {
 public:
  Scalar() = default;
  Scalar(Ball b) : v_(std::move(b)) {}
  Scalar(Jet j) : v_(std::move(j)) {}

  bool is_ball() const noexcept { return std::holds_alternative<Ball>(v_); }
  bool is_jet() const noexcept { return std::holds_alternative<Jet>(v_); }
  const Ball& ball() const { return std::get<Ball>(v_); }
  const Jet& jet() const { return std::get<Jet>(v_); }
  /// Upper bound of log(error); nullopt for exact values.
  std::optional<mpq_class> error_log() const;

 private:
  std::variant<Ball, Jet> v_;
};

/// Exact image, except on Z[sqrt(-5)] where sqrt(5) is enclosed to `bits`
/// bits relative to the element.
Scalar embed(const RingElement& x, long bits = 128);

Scalar sc_neg(const Scalar& x);
Scalar sc_add(const Scalar& x, const Scalar& y, const Precision& prec);
Scalar sc_sub(const Scalar& x, const Scalar& y, const Precision& prec);
Scalar sc_mul(const Scalar& x, const Scalar& y, const Precision& prec);
/// Throws division_by_possible_zero unless y's region excludes 0.
Scalar sc_div(const Scalar& x, const Scalar& y, const Precision& prec);

/// Certified bracket of log|x|; exact for jets with a known leading term.
LogMag sc_abs_bounds(const Scalar& x, long bits = 128);

/// Real balls are compared in the order of R. Complex balls and jets are
/// compared by absolute value (neither C nor F_p((1/u)) is ordered).
Certainty cmp_certified(const Scalar& x, const Scalar& y);
Certainty cmp_abs_certified(const Scalar& x, const Scalar& y);

using Recipe = std::function<Scalar(const Precision&)>;

/// Evaluate `recipe` at increasing precision until its error is <= e^{target_log}.
/// Throws precision_cap_exceeded carrying the last achieved bound.
Scalar refine(const Recipe& recipe, const mpq_class& target_log, const PrecisionPolicy& policy);

/// Runs `step` at increasing precision until it returns a value.
template <class F>
auto decide(const PrecisionPolicy& policy, F&& step, const char* what)
    -> typename std::invoke_result_t<F&, const Precision&>::value_type {
  Precision p = policy.start();
  for (;;) {
    if (auto r = step(p)) return *std::move(r);
    auto n = policy.next(p);
    if (!n)
      throw Error(Errc::precision_cap_exceeded,
                  std::string(what) + " undecided at " + std::to_string(p.bits) + " bits / window " +
                      std::to_string(p.window));
    p = *n;
  }
}

}  // namespace fibext
