#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace fibext {

/// Outcome of a certified comparison. `equal` is only produced when both
/// sides are exact and coincide; overlapping enclosures give `unknown`.
enum class Certainty { less, equal, greater, unknown };

const char* to_string(Certainty c) noexcept;

/// Closed interval with rational endpoints.
class Interval {
 public:
  Interval() = default;
  explicit Interval(const mpq_class& point) : lo_(point), hi_(point) {}
  Interval(mpq_class lo, mpq_class hi);

  static Interval of_int(long v) { return Interval(mpq_class(v)); }

  const mpq_class& lo() const noexcept { return lo_; }
  const mpq_class& hi() const noexcept { return hi_; }
  mpq_class width() const { return hi_ - lo_; }
  mpq_class mid() const { return (lo_ + hi_) / 2; }
  bool is_point() const { return lo_ == hi_; }
  bool contains(const mpq_class& v) const { return lo_ <= v && v <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool overlaps(const Interval& o) const { return !(hi_ < o.lo_ || o.hi_ < lo_); }
  Interval hull(const Interval& o) const;
  Interval abs() const;

  Interval operator-() const { return {-hi_, -lo_}; }
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  /// b must exclude zero.
  friend Interval operator/(const Interval& a, const Interval& b);

  /// Endpoints rounded outward to doubles.
  double lo_double() const;
  double hi_double() const;

 private:
  mpq_class lo_{0};
  mpq_class hi_{0};
};

Certainty compare(const Interval& a, const Interval& b);

/// Directed-rounding transcendental enclosures (MPFR at `bits` precision).
namespace certified {
Interval log(const mpq_class& x, long bits);
Interval log(const mpz_class& x, long bits);
Interval exp(const mpq_class& x, long bits);
Interval sqrt(const mpq_class& x, long bits);
double round_down(const mpq_class& x);
double round_up(const mpq_class& x);
/// Shortest deterministic rendering with 17 significant digits.
std::string format17(double v);
}  // namespace certified

/// log|x| in e-units (natural log). Carries the exact source when one
/// exists (an ultrametric degree, an archimedean norm, or a rational point)
/// so comparisons between ring-element magnitudes stay exact.
class LogMag {
 public:
  /// log|0|.
  static LogMag neg_infinity();
  static LogMag degree(long d);
  /// (1/2) ln(norm), norm > 0, enclosed at `bits` precision.
  static LogMag of_norm(const mpz_class& norm, long bits = 128);
  static LogMag point(const mpq_class& v);
  static LogMag enclosure(const Interval& iv);
  /// (-inf, hi]: magnitude bounded above, zero not excluded.
  static LogMag upper_only(const mpq_class& hi);

  bool is_neg_inf() const noexcept { return !hi_; }
  bool lo_is_neg_inf() const noexcept { return !lo_; }
  bool is_exact() const noexcept { return is_neg_inf() || exact_; }
  const std::optional<long>& exact_degree() const noexcept { return degree_; }
  const std::optional<mpz_class>& norm() const noexcept { return norm_; }

  /// Finite endpoints; throw when the endpoint is -inf.
  const mpq_class& lo() const;
  const mpq_class& hi() const;
  Interval interval() const;
  /// Re-enclose from the exact source at higher precision (no-op otherwise).
  LogMag refined(long bits) const;

  /// log|xy| = log|x| + log|y|.
  friend LogMag operator+(const LogMag& a, const LogMag& b);

  std::string to_string() const;

 private:
  std::optional<mpq_class> lo_;
  std::optional<mpq_class> hi_;
  std::optional<mpz_class> norm_;
  std::optional<long> degree_;
  bool exact_ = false;
};

/// Certified comparison of magnitudes; refines norm-backed enclosures on
/// demand before answering `unknown`.
Certainty compare(const LogMag& a, const LogMag& b);

}  // namespace fibext
