#include "fibext/completion.hpp"

#include <algorithm>
#include <climits>

namespace fibext {

namespace {

long bitlen(const mpz_class& v) {
  return v == 0 ? 0 : static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

mpz_class shl(const mpz_class& v, long k) {
  mpz_class r;
  if (k >= 0)
    mpz_mul_2exp(r.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  else
    mpz_fdiv_q_2exp(r.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
  return r;
}

Dyadic max_abs(const Dyadic& a, const Dyadic& b) {
  const Dyadic x = a.sign() < 0 ? -a : a;
  const Dyadic y = b.sign() < 0 ? -b : b;
  return cmp(x, y) >= 0 ? x : y;
}

Dyadic pow2(long e) { return {mpz_class(1), e}; }

// Rounds the midpoint to `bits` significant bits relative to its larger
// coordinate and moves the rounding error into the radius.
Ball rounded(Dyadic re, Dyadic im, Dyadic rad, bool real, long bits) {
  const long top = std::max(re.magnitude(), im.magnitude());
  if (top != LONG_MIN) {
    const long cut = top - bits;
    if (!re.is_zero() && re.exponent() < cut) {
      re = re.floor_to(cut);
      rad = rad + pow2(cut);
    }
    if (!im.is_zero() && im.exponent() < cut) {
      im = im.floor_to(cut);
      rad = rad + pow2(cut);
    }
  }
  return Ball(std::move(re), std::move(im), rad.upper_abs(), real);
}

Ball ball_add(const Ball& x, const Ball& y, long bits) {
  return rounded(x.re() + y.re(), x.im() + y.im(), x.rad() + y.rad(), x.is_real() && y.is_real(), bits);
}

Dyadic mid_abs_upper(const Ball& b) { return b.re().upper_abs() + b.im().upper_abs(); }

Ball ball_mul(const Ball& x, const Ball& y, long bits) {
  Dyadic re = x.re() * y.re() - x.im() * y.im();
  Dyadic im = x.re() * y.im() + x.im() * y.re();
  const Dyadic rad = mid_abs_upper(x) * y.rad() + mid_abs_upper(y) * x.rad() + x.rad() * y.rad();
  return rounded(std::move(re), std::move(im), rad, x.is_real() && y.is_real(), bits);
}

Ball ball_inv(const Ball& y, long bits) {
  const Dyadic lower = max_abs(y.re(), y.im()).lower_abs();
  if (cmp(lower, y.rad()) <= 0)
    throw Error(Errc::division_by_possible_zero, "ball divisor region contains 0");
  const Dyadic norm = y.re() * y.re() + y.im() * y.im();
  Dyadic err;
  auto coord = [&](const Dyadic& c, bool negate) {
    if (c.is_zero()) return Dyadic();
    const Dyadic mag = c.sign() < 0 ? -c : c;
    Dyadic q = divide(mag, norm, bits + 2, true);
    err = err + pow2(q.exponent());
    const bool neg = (c.sign() < 0) != negate;
    return neg ? -q : q;
  };
  Dyadic re = coord(y.re(), false);
  Dyadic im = coord(y.im(), true);
  Dyadic rad;
  if (!y.rad().is_zero()) {
    const Dyadic den = (lower * (lower - y.rad())).lower_abs();
    rad = divide(y.rad(), den, 30, false);
  }
  return rounded(std::move(re), std::move(im), rad + err, y.is_real(), bits);
}

// ---- jets ----

long upper_exponent(const Jet& j) { return j.has_leading() ? j.leading_exponent() : *j.tail(); }

bool is_exact_zero(const Jet& j) { return j.is_exact() && !j.has_leading(); }

Jet jet_add(const Jet& x, const Jet& y) {
  if (x.modulus() != y.modulus()) throw Error(Errc::domain_mismatch, "jets over different fields");
  std::optional<long> t;
  if (x.tail() || y.tail()) t = std::max(x.tail().value_or(LONG_MIN), y.tail().value_or(LONG_MIN));
  const long lo = std::min(x.low(), y.low());
  FpPoly sum = x.window().shifted_up(static_cast<std::size_t>(x.low() - lo));
  sum += y.window().shifted_up(static_cast<std::size_t>(y.low() - lo));
  return Jet::make(std::move(sum), lo, t);
}

Jet jet_neg(const Jet& x) { return Jet::make(-x.window(), x.low(), x.tail()); }

// Coefficients with exponent > floor_exp only.
std::pair<FpPoly, long> above(const Jet& x, long floor_exp) {
  if (x.low() > floor_exp) return {x.window(), x.low()};
  const long drop = floor_exp + 1 - x.low();
  return {x.window().high_part(static_cast<std::size_t>(drop)), floor_exp + 1};
}

Jet jet_mul(const Jet& x, const Jet& y) {
  if (x.modulus() != y.modulus()) throw Error(Errc::domain_mismatch, "jets over different fields");
  const std::uint32_t p = x.modulus();
  if (is_exact_zero(x) || is_exact_zero(y)) return Jet::exact(FpPoly(p));
  if (x.is_exact() && y.is_exact())
    return Jet::make(x.window() * y.window(), x.low() + y.low(), std::nullopt);
  const long mx = upper_exponent(x), my = upper_exponent(y);
  long t = LONG_MIN;
  if (y.tail()) t = std::max(t, mx + *y.tail());
  if (x.tail()) t = std::max(t, my + *x.tail());
  auto [wx, lx] = above(x, t - my);
  auto [wy, ly] = above(y, t - mx);
  return Jet::make(wx * wy, lx + ly, t);
}

Jet jet_inv(const Jet& y, long window) {
  if (!y.has_leading()) throw Error(Errc::division_by_possible_zero, "jet without known leading term");
  const std::uint32_t p = y.modulus();
  const long d = y.leading_exponent();
  const long len = d - y.low() + 1;
  if (y.is_exact() && y.window().degree() == 0) {
    const FpPoly c = FpPoly::constant(p, inverse_mod(y.window().leading(), p));
    return Jet::make(c, -d, std::nullopt);
  }
  const long r = y.is_exact() ? std::max(window, len) : d - *y.tail();
  FpPoly f = y.window().reversed(static_cast<std::size_t>(len));
  FpPoly g = inverse_series(f, static_cast<std::size_t>(r));
  return Jet::make(g.reversed(static_cast<std::size_t>(r)), -d - r + 1, -d - r);
}

template <class BallOp, class JetOp>
Scalar dispatch(const Scalar& x, const Scalar& y, BallOp&& bop, JetOp&& jop) {
  if (x.is_ball() && y.is_ball()) return bop(x.ball(), y.ball());
  if (x.is_jet() && y.is_jet()) return jop(x.jet(), y.jet());
  throw Error(Errc::domain_mismatch, "ball and jet mixed in one expression");
}

}  // namespace

// ---------------- Dyadic ----------------

Dyadic::Dyadic(mpz_class man, long exp) : man_(std::move(man)), exp_(exp) { normalize(); }

void Dyadic::normalize() {
  if (man_ == 0) {
    exp_ = 0;
    return;
  }
  const auto tz = mpz_scan1(man_.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_tdiv_q_2exp(man_.get_mpz_t(), man_.get_mpz_t(), tz);
    exp_ += static_cast<long>(tz);
  }
}

Dyadic Dyadic::from_rational(const mpq_class& q, long bits, bool down) {
  if (q == 0) return {};
  const long s = bits - (bitlen(q.get_num()) - bitlen(q.get_den())) + 1;
  mpz_class num = q.get_num(), den = q.get_den();
  if (s >= 0)
    num = shl(num, s);
  else
    den = shl(den, -s);
  mpz_class m;
  if (down)
    mpz_fdiv_q(m.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  else
    mpz_cdiv_q(m.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return {m, -s};
}

long Dyadic::magnitude() const { return man_ == 0 ? LONG_MIN : bitlen(man_) + exp_; }

mpq_class Dyadic::to_mpq() const {
  mpq_class q(man_);
  if (exp_ >= 0)
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(exp_));
  else
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-exp_));
  return q;
}

Dyadic Dyadic::floor_to(long cut) const {
  if (exp_ >= cut) return *this;
  return {shl(man_, exp_ - cut), cut};
}

Dyadic Dyadic::upper_abs(long bits) const {
  mpz_class a = abs(man_);
  const long n = bitlen(a);
  if (n <= bits) return {a, exp_};
  mpz_class r;
  mpz_cdiv_q_2exp(r.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(n - bits));
  return {r, exp_ + n - bits};
}

Dyadic Dyadic::lower_abs(long bits) const {
  mpz_class a = abs(man_);
  const long n = bitlen(a);
  if (n <= bits) return {a, exp_};
  return {shl(a, bits - n), exp_ + n - bits};
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const long e = std::min(a.exp_, b.exp_);
  return {shl(a.man_, a.exp_ - e) + shl(b.man_, b.exp_ - e), e};
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) { return {a.man_ * b.man_, a.exp_ + b.exp_}; }

int cmp(const Dyadic& a, const Dyadic& b) {
  if (a.sign() != b.sign()) return a.sign() < b.sign() ? -1 : 1;
  if (a.sign() == 0) return 0;
  const long ma = a.magnitude(), mb = b.magnitude();
  if (ma != mb) return (ma < mb) == (a.sign() > 0) ? -1 : 1;
  return (a - b).sign();
}

Dyadic divide(const Dyadic& a, const Dyadic& b, long bits, bool down) {
  if (b.is_zero()) throw Error(Errc::division_by_possible_zero, "dyadic division by zero");
  if (a.is_zero()) return {};
  const long s = bits + bitlen(b.mantissa()) - bitlen(a.mantissa()) + 1;
  mpz_class num = a.mantissa(), den = b.mantissa();
  if (s >= 0)
    num = shl(num, s);
  else
    den = shl(den, -s);
  mpz_class q;
  if (down)
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  else
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return {q, a.exponent() - b.exponent() - s};
}

std::optional<Precision> PrecisionPolicy::next(const Precision& p) const {
  if (p.bits >= cap_bits && p.window >= cap_window) return std::nullopt;
  return Precision{std::min(p.bits * 2, cap_bits), std::min(p.window * 2, cap_window)};
}

// ---------------- Ball ----------------

Ball::Ball(Dyadic re, Dyadic im, Dyadic rad, bool real)
    : re_(std::move(re)), im_(std::move(im)), rad_(std::move(rad)), real_(real) {
  if (rad_.sign() < 0) throw Error(Errc::invalid_argument, "negative ball radius");
  if (real_ && !im_.is_zero()) throw Error(Errc::invalid_argument, "real ball with imaginary part");
}

Ball Ball::exact(const mpz_class& re, const mpz_class& im, bool real) {
  return {Dyadic(re), Dyadic(im), Dyadic(), real};
}

Ball Ball::from_rational(const mpq_class& re, const mpq_class& im, const mpq_class& rad, bool real,
                         long bits) {
  const long top = std::max(bitlen(re.get_num()) - bitlen(re.get_den()),
                            bitlen(im.get_num()) - bitlen(im.get_den()));
  auto round = [&](const mpq_class& v, Dyadic& err) {
    if (v == 0) return Dyadic();
    const long vb = bitlen(v.get_num()) - bitlen(v.get_den());
    const Dyadic d = Dyadic::from_rational(v, std::max<long>(bits - (top - vb), 2), true);
    const mpq_class e = v - d.to_mpq();
    if (e != 0) err = err + Dyadic::from_rational(e, 30, false);
    return d;
  };
  Dyadic err = rad == 0 ? Dyadic() : Dyadic::from_rational(rad, 30, false);
  Dyadic r = round(re, err);
  Dyadic i = round(im, err);
  return {std::move(r), std::move(i), err.upper_abs(), real};
}

Interval Ball::real_interval() const {
  if (!real_) throw Error(Errc::invalid_argument, "real_interval on a complex ball");
  return {(re_ - rad_).to_mpq(), (re_ + rad_).to_mpq()};
}

Interval Ball::abs_interval(long bits) const {
  if (real_) {
    const Dyadic a = re_.sign() < 0 ? -re_ : re_;
    Dyadic lo = a - rad_;
    if (lo.sign() < 0) lo = Dyadic();
    return {lo.to_mpq(), (a + rad_).to_mpq()};
  }
  const Dyadic n = re_ * re_ + im_ * im_;
  if (n.is_zero()) return {mpq_class(0), rad_.to_mpq()};
  mpz_class m = n.mantissa();
  long e = n.exponent();
  if (e & 1) {
    m <<= 1;
    e -= 1;
  }
  const long target = 2 * bits + 4;
  mpz_class m_lo = m, m_hi = m;
  long nb = bitlen(m);
  if (nb > target) {
    long sh = nb - target;
    sh += sh & 1;
    m_lo = shl(m, -sh);
    m_hi = m_lo + 1;
    e += sh;
  } else if (nb < target) {
    long sh = target - nb;
    sh += sh & 1;
    m_lo = m_hi = shl(m, sh);
    e -= sh;
  }
  mpz_class s_lo, s_hi;
  mpz_sqrt(s_lo.get_mpz_t(), m_lo.get_mpz_t());
  mpz_sqrt(s_hi.get_mpz_t(), m_hi.get_mpz_t());
  if (s_hi * s_hi < m_hi) s_hi += 1;
  Dyadic lo = Dyadic(s_lo, e / 2) - rad_;
  if (lo.sign() < 0) lo = Dyadic();
  return {lo.to_mpq(), (Dyadic(s_hi, e / 2) + rad_).to_mpq()};
}

bool Ball::contains(const mpq_class& re, const mpq_class& im) const {
  const mpq_class dr = re - re_.to_mpq();
  const mpq_class di = im - im_.to_mpq();
  const mpq_class r = rad_.to_mpq();
  return dr * dr + di * di <= r * r;
}

// ---------------- Jet ----------------

Jet Jet::exact(const FpPoly& f) { return make(f, 0, std::nullopt); }

Jet Jet::make(FpPoly window, long low, std::optional<long> tail) {
  Jet j;
  j.tail_ = tail;
  if (tail && low <= *tail) {
    window = window.high_part(static_cast<std::size_t>(*tail + 1 - low));
    low = *tail + 1;
  }
  if (!tail) {
    // exact values keep their lowest nonzero term at `low`
    if (window.is_zero()) {
      low = 0;
    } else {
      std::size_t k = 0;
      while (window.coeff(k) == 0) ++k;
      window = window.high_part(k);
      low += static_cast<long>(k);
    }
  }
  j.window_ = std::move(window);
  j.low_ = low;
  return j;
}

long Jet::leading_exponent() const {
  if (!has_leading()) throw Error(Errc::out_of_range, "jet has no known nonzero coefficient");
  return low_ + window_.degree();
}

FpPoly::Coeff Jet::coeff_at(long e) const {
  if (e < low_) {
    if (tail_ && e <= *tail_) throw Error(Errc::out_of_range, "coefficient below the jet tail");
    return 0;
  }
  return window_.coeff(static_cast<std::size_t>(e - low_));
}

Jet Jet::with_tail(long t) const {
  if (tail_ && *tail_ >= t) return *this;
  return make(window_, low_, t);
}

FpPoly Jet::polynomial_part() const {
  if (tail_ && *tail_ >= 0)
    throw Error(Errc::rounding_ambiguous, "jet tail reaches the polynomial part");
  if (low_ >= 0) return window_.shifted_up(static_cast<std::size_t>(low_));
  return window_.high_part(static_cast<std::size_t>(-low_));
}

Jet Jet::fractional_part() const {
  if (low_ >= 0) return make(FpPoly(modulus()), tail_ ? *tail_ + 1 : 0, tail_);
  return make(window_.low_part(static_cast<std::size_t>(-low_)), low_, tail_);
}

// ---------------- Scalar ----------------

std::optional<mpq_class> Scalar::error_log() const {
  if (is_jet()) {
    const auto& t = jet().tail();
    if (!t) return std::nullopt;
    return mpq_class(*t);
  }
  if (ball().rad().is_zero()) return std::nullopt;
  return certified::log(ball().rad().to_mpq(), 64).hi();
}

Scalar embed(const RingElement& x, long bits) {
  const Domain& d = x.domain();
  if (d.is_poly()) return Jet::exact(x.poly());
  if (d.kind() == DomainKind::z_sqrt_minus5) {
    // x + y sqrt(-5) = x + i y sqrt(5): irrational imaginary part
    if (x.y() == 0) return Ball::exact(x.x(), 0, false);
    const long prec = bits + bitlen(x.y());
    const Interval s5 = certified::sqrt(mpq_class(5), prec);
    const mpq_class im_lo = x.y() > 0 ? x.y() * s5.lo() : x.y() * s5.hi();
    const mpq_class width = abs(mpq_class(x.y())) * s5.width();
    return Ball::from_rational(mpq_class(x.x()), im_lo + width / 2, width / 2, false, prec);
  }
  return Ball::exact(x.x(), x.y(), d.kind() == DomainKind::rational_integers);
}

Scalar sc_neg(const Scalar& x) {
  if (x.is_jet()) return jet_neg(x.jet());
  const Ball& b = x.ball();
  return Ball(-b.re(), -b.im(), b.rad(), b.is_real());
}

Scalar sc_add(const Scalar& x, const Scalar& y, const Precision& prec) {
  return dispatch(
      x, y, [&](const Ball& a, const Ball& b) { return Scalar(ball_add(a, b, prec.bits)); },
      [](const Jet& a, const Jet& b) { return Scalar(jet_add(a, b)); });
}

Scalar sc_sub(const Scalar& x, const Scalar& y, const Precision& prec) {
  return sc_add(x, sc_neg(y), prec);
}

Scalar sc_mul(const Scalar& x, const Scalar& y, const Precision& prec) {
  return dispatch(
      x, y, [&](const Ball& a, const Ball& b) { return Scalar(ball_mul(a, b, prec.bits)); },
      [](const Jet& a, const Jet& b) { return Scalar(jet_mul(a, b)); });
}

Scalar sc_div(const Scalar& x, const Scalar& y, const Precision& prec) {
  return dispatch(
      x, y,
      [&](const Ball& a, const Ball& b) { return Scalar(ball_mul(a, ball_inv(b, prec.bits), prec.bits)); },
      [&](const Jet& a, const Jet& b) { return Scalar(jet_mul(a, jet_inv(b, prec.window))); });
}

LogMag sc_abs_bounds(const Scalar& x, long bits) {
  if (x.is_jet()) {
    const Jet& j = x.jet();
    if (j.has_leading()) return LogMag::degree(j.leading_exponent());
    if (j.tail()) return LogMag::upper_only(mpq_class(*j.tail()));
    return LogMag::neg_infinity();
  }
  const Interval a = x.ball().abs_interval(bits);
  if (a.hi() == 0) return LogMag::neg_infinity();
  const mpq_class hi = certified::log(a.hi(), bits).hi();
  if (a.lo() == 0) return LogMag::upper_only(hi);
  if (a.is_point()) {
    const Interval l = certified::log(a.lo(), bits);
    return LogMag::enclosure(l);
  }
  return LogMag::enclosure(Interval(certified::log(a.lo(), bits).lo(), hi));
}

Certainty cmp_abs_certified(const Scalar& x, const Scalar& y) {
  if (x.is_ball() && y.is_ball()) {
    // compare |x| and |y| directly on rational enclosures
    return compare(x.ball().abs_interval(), y.ball().abs_interval());
  }
  return compare(sc_abs_bounds(x), sc_abs_bounds(y));
}

Certainty cmp_certified(const Scalar& x, const Scalar& y) {
  if (x.is_ball() && y.is_ball() && x.ball().is_real() && y.ball().is_real())
    return compare(x.ball().real_interval(), y.ball().real_interval());
  return cmp_abs_certified(x, y);
}

Scalar refine(const Recipe& recipe, const mpq_class& target_log, const PrecisionPolicy& policy) {
  Precision p = policy.start();
  std::optional<mpq_class> last;
  for (;;) {
    Scalar s = recipe(p);
    const auto e = s.error_log();
    if (!e || *e <= target_log) return s;
    last = last ? std::min(*last, *e) : *e;
    auto n = policy.next(p);
    if (!n)
      throw Error(Errc::precision_cap_exceeded,
                  "last error bound e^" + certified::format17(certified::round_up(*last)));
    p = *n;
  }
}

}  // namespace fibext
