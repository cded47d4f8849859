#include "fibext/interval.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cstdio>

#include "fibext/error.hpp"

namespace fibext {

const char* to_string(Certainty c) noexcept {
  switch (c) {
    case Certainty::less: return "less";
    case Certainty::equal: return "equal";
    case Certainty::greater: return "greater";
    case Certainty::unknown: return "unknown";
  }
  return "unknown";
}

Interval::Interval(mpq_class lo, mpq_class hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw Error(Errc::invalid_argument, "interval with lo > hi");
}

Interval Interval::hull(const Interval& o) const {
  return {std::min(lo_, o.lo_), std::max(hi_, o.hi_)};
}

Interval Interval::abs() const {
  if (lo_ >= 0) return *this;
  if (hi_ <= 0) return -*this;
  return {mpq_class(0), std::max(mpq_class(-lo_), hi_)};
}

Interval operator+(const Interval& a, const Interval& b) { return {a.lo_ + b.lo_, a.hi_ + b.hi_}; }
Interval operator-(const Interval& a, const Interval& b) { return {a.lo_ - b.hi_, a.hi_ - b.lo_}; }

Interval operator*(const Interval& a, const Interval& b) {
  if (a.lo_ >= 0 && b.lo_ >= 0) return {a.lo_ * b.lo_, a.hi_ * b.hi_};
  const mpq_class p[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo_ <= 0 && b.hi_ >= 0) throw Error(Errc::division_by_possible_zero, "interval divisor contains 0");
  const Interval inv(1 / b.hi_, 1 / b.lo_);
  return a * inv;
}

double Interval::lo_double() const { return certified::round_down(lo_); }
double Interval::hi_double() const { return certified::round_up(hi_); }

Certainty compare(const Interval& a, const Interval& b) {
  if (a.is_point() && b.is_point() && a.lo() == b.lo()) return Certainty::equal;
  if (a.hi() < b.lo()) return Certainty::less;
  if (a.lo() > b.hi()) return Certainty::greater;
  return Certainty::unknown;
}

namespace certified {

namespace {

class Mpfr {
 public:
  explicit Mpfr(long bits) { mpfr_init2(v_, std::max<long>(bits, MPFR_PREC_MIN)); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

mpq_class to_mpq(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return 0;
  mpz_class m;
  const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
  mpq_class q(m);
  if (e >= 0)
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return q;
}

template <class F>
Interval directed(const mpq_class& x, long bits, F&& f) {
  Mpfr lo(bits), hi(bits);
  mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDD);
  f(lo.get(), MPFR_RNDD);
  mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDU);
  f(hi.get(), MPFR_RNDU);
  return {to_mpq(lo.get()), to_mpq(hi.get())};
}

}  // namespace

Interval log(const mpq_class& x, long bits) {
  if (x <= 0) throw Error(Errc::invalid_argument, "log of non-positive value");
  return directed(x, bits, [](mpfr_ptr v, mpfr_rnd_t r) { mpfr_log(v, v, r); });
}

Interval log(const mpz_class& x, long bits) { return log(mpq_class(x), bits); }

Interval exp(const mpq_class& x, long bits) {
  return directed(x, bits, [](mpfr_ptr v, mpfr_rnd_t r) { mpfr_exp(v, v, r); });
}

Interval sqrt(const mpq_class& x, long bits) {
  if (x < 0) throw Error(Errc::invalid_argument, "sqrt of negative value");
  return directed(x, bits, [](mpfr_ptr v, mpfr_rnd_t r) { mpfr_sqrt(v, v, r); });
}

double round_down(const mpq_class& x) {
  Mpfr v(53);
  mpfr_set_q(v.get(), x.get_mpq_t(), MPFR_RNDD);
  return mpfr_get_d(v.get(), MPFR_RNDD);
}

double round_up(const mpq_class& x) {
  Mpfr v(53);
  mpfr_set_q(v.get(), x.get_mpq_t(), MPFR_RNDU);
  return mpfr_get_d(v.get(), MPFR_RNDU);
}

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace certified

LogMag LogMag::neg_infinity() { return LogMag{}; }

LogMag LogMag::degree(long d) {
  LogMag m;
  m.lo_ = mpq_class(d);
  m.hi_ = mpq_class(d);
  m.degree_ = d;
  m.exact_ = true;
  return m;
}

LogMag LogMag::of_norm(const mpz_class& norm, long bits) {
  if (norm <= 0) throw Error(Errc::invalid_argument, "norm must be positive");
  LogMag m;
  if (norm == 1) {
    m.lo_ = mpq_class(0);
    m.hi_ = mpq_class(0);
    m.exact_ = true;
  } else {
    const Interval l = certified::log(norm, bits);
    m.lo_ = l.lo() / 2;
    m.hi_ = l.hi() / 2;
  }
  m.norm_ = norm;
  return m;
}

LogMag LogMag::point(const mpq_class& v) {
  LogMag m;
  m.lo_ = v;
  m.hi_ = v;
  m.exact_ = true;
  return m;
}

LogMag LogMag::enclosure(const Interval& iv) {
  LogMag m;
  m.lo_ = iv.lo();
  m.hi_ = iv.hi();
  m.exact_ = iv.is_point();
  return m;
}

LogMag LogMag::upper_only(const mpq_class& hi) {
  LogMag m;
  m.hi_ = hi;
  return m;
}

const mpq_class& LogMag::lo() const {
  if (!lo_) throw Error(Errc::out_of_range, "lower log-magnitude is -inf");
  return *lo_;
}

const mpq_class& LogMag::hi() const {
  if (!hi_) throw Error(Errc::out_of_range, "upper log-magnitude is -inf");
  return *hi_;
}

Interval LogMag::interval() const { return {lo(), hi()}; }

LogMag LogMag::refined(long bits) const {
  if (norm_ && !exact_) return of_norm(*norm_, bits);
  return *this;
}

LogMag operator+(const LogMag& a, const LogMag& b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return LogMag::neg_infinity();
  if (a.norm_ && b.norm_) return LogMag::of_norm(*a.norm_ * *b.norm_, 128);
  LogMag m;
  m.hi_ = *a.hi_ + *b.hi_;
  if (a.lo_ && b.lo_) m.lo_ = *a.lo_ + *b.lo_;
  if (a.degree_ && b.degree_) m.degree_ = *a.degree_ + *b.degree_;
  m.exact_ = a.exact_ && b.exact_;
  return m;
}

std::string LogMag::to_string() const {
  if (is_neg_inf()) return "-inf";
  if (degree_) return std::to_string(*degree_);
  const std::string lo = lo_ ? certified::format17(certified::round_down(*lo_)) : "-inf";
  if (exact_) return lo;
  return "[" + lo + ", " + certified::format17(certified::round_up(*hi_)) + "]";
}

Certainty compare(const LogMag& a, const LogMag& b) {
  if (a.is_neg_inf() && b.is_neg_inf()) return Certainty::equal;
  if (a.is_neg_inf()) return Certainty::less;
  if (b.is_neg_inf()) return Certainty::greater;
  if (a.norm() && b.norm()) {
    const int c = cmp(*a.norm(), *b.norm());
    return c < 0 ? Certainty::less : c > 0 ? Certainty::greater : Certainty::equal;
  }
  LogMag x = a, y = b;
  for (long bits = 128;; bits *= 2) {
    if (x.is_exact() && y.is_exact() && !x.lo_is_neg_inf() && !y.lo_is_neg_inf() &&
        x.lo() == y.lo())
      return Certainty::equal;
    if (!x.lo_is_neg_inf() && x.lo() > y.hi()) return Certainty::greater;
    if (!y.lo_is_neg_inf() && x.hi() < y.lo()) return Certainty::less;
    const bool refinable = (x.norm() && !x.is_exact()) || (y.norm() && !y.is_exact());
    if (!refinable || bits > (1L << 14)) return Certainty::unknown;
    x = x.refined(bits * 2);
    y = y.refined(bits * 2);
  }
}

}  // namespace fibext
