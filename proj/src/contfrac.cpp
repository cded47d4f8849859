#include "fibext/contfrac.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "fibext/error.hpp"
#include "fibext/fibword.hpp"

namespace fibext {

namespace {

const mpq_class kLn2Lo("6931471805599453/10000000000000000");
const mpq_class kLn2Hi("6931471805599454/10000000000000000");

// min |x| over the given elements, as 1 + rho with rho a rational lower bound
mpq_class rho_lower(const std::vector<RingElement>& xs) {
  const Domain& d = xs.front().domain();
  mpq_class m;
  if (d.archimedean()) {
    mpz_class n = xs.front().norm();
    for (const auto& x : xs) n = std::min(n, x.norm());
    m = certified::sqrt(mpq_class(n), 128).lo();
  } else {
    long deg = xs.front().degree();
    for (const auto& x : xs) deg = std::min(deg, x.degree());
    m = certified::exp(mpq_class(deg), 128).lo();
  }
  mpq_class rho = m - 1;
  if (rho <= 1)
    throw Error(Errc::rho_too_small, "min |a_j| = " + certified::format17(certified::round_up(m)) +
                                         " does not exceed 2");
  return rho;
}

// Lower bound of log|q| from the leading bits; conservative by a relative 1e-9.
mpq_class log_abs_lower(const RingElement& q) {
  if (q.domain().is_poly()) return mpq_class(q.degree());
  auto top = [](const mpz_class& v, long& e) {
    if (v == 0) {
      e = 0;
      return 0.0L;
    }
    signed long ex = 0;
    const double d = std::fabs(mpz_get_d_2exp(&ex, v.get_mpz_t()));
    e = ex;
    return static_cast<long double>(d);
  };
  long ex = 0, ey = 0;
  long double dx = top(q.x(), ex), dy = top(q.y(), ey);
  const long double k = q.domain().kind() == DomainKind::z_sqrt_minus5 ? 5.0L : 1.0L;
  const long e = std::max(ex, ey);
  dx = std::ldexp(dx, static_cast<int>(std::max<long>(ex - e, -4000)));
  dy = std::ldexp(dy, static_cast<int>(std::max<long>(ey - e, -4000)));
  const long double n = dx * dx + k * dy * dy;
  const long double l = 0.5L * std::log(n) * (1 - 1e-9L) - 1e-9L;
  // e * ln 2 with a rational lower bound
  return mpq_class(static_cast<double>(l)) + mpq_class(e) * (e >= 0 ? kLn2Lo : kLn2Hi);
}

void advance(Mat2& m, const RingElement& a) {
  // M <- M * [[a, 1], [1, 0]]
  RingElement q = a * m.m00 + m.m01;
  RingElement p = a * m.m10 + m.m11;
  m.m01 = std::move(m.m00);
  m.m11 = std::move(m.m10);
  m.m00 = std::move(q);
  m.m10 = std::move(p);
}

Convergent from_matrix(std::size_t j, const Mat2& m) { return {j, m.m10, m.m00, m.m11, m.m01}; }

Mat2 tree_product(const PartialQuotients& pq, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return Mat2::letter(pq.term(lo));
  if (hi - lo <= 8) {
    Mat2 m = Mat2::letter(pq.term(lo));
    for (std::size_t j = lo + 1; j < hi; ++j) advance(m, pq.term(j));
    return m;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return tree_product(pq, lo, mid) * tree_product(pq, mid, hi);
}

}  // namespace

mpq_class rho_of(const RingElement& a, const RingElement& b) {
  if (a.domain() != b.domain()) throw Error(Errc::domain_mismatch, "a and b in different rings");
  if (a == b) throw Error(Errc::invalid_argument, "a and b must be distinct");
  return rho_lower({a, b});
}

PartialQuotients::PartialQuotients(Domain d, Generator term, mpq_class rho)
    : domain_(d), gen_(std::move(term)), rho_(std::move(rho)) {
  if (rho_ <= 1) throw Error(Errc::rho_too_small, "rho must exceed 1");
}

PartialQuotients PartialQuotients::fibonacci(const RingElement& a, const RingElement& b) {
  mpq_class rho = rho_of(a, b);
  return PartialQuotients(
      a.domain(), [a, b](std::size_t j) { return fib_letter(j - 1) == Letter::a ? a : b; },
      std::move(rho));
}

PartialQuotients PartialQuotients::constant(const RingElement& a) {
  return PartialQuotients(a.domain(), [a](std::size_t) { return a; }, rho_lower({a}));
}

RingElement PartialQuotients::term(std::size_t j) const {
  if (j == 0) throw Error(Errc::out_of_range, "partial quotients start at j = 1");
  RingElement t = gen_(j);
  if (t.domain() != domain_) throw Error(Errc::domain_mismatch, "partial quotient outside the ring");
  const mpq_class one_rho = 1 + rho_;
  bool ok;
  if (domain_.archimedean())
    ok = mpq_class(t.norm()) >= one_rho * one_rho;
  else
    ok = !t.is_zero() && certified::exp(mpq_class(t.degree()), 128).lo() >= one_rho;
  if (!ok)
    throw Error(Errc::certification_failed, "|a_" + std::to_string(j) + "| < 1 + rho");
  return t;
}

std::vector<Convergent> convergent_stream(const PartialQuotients& pq, std::size_t J) {
  std::vector<Convergent> out;
  out.reserve(J + 1);
  Mat2 m = Mat2::identity(pq.domain());
  out.push_back(from_matrix(0, m));
  for (std::size_t j = 1; j <= J; ++j) {
    advance(m, pq.term(j));
    out.push_back(from_matrix(j, m));
    gap_identity_check(out[j - 1], out[j]);
  }
  return out;
}

Convergent convergent_at(const PartialQuotients& pq, std::size_t J) {
  if (J == 0) return from_matrix(0, Mat2::identity(pq.domain()));
  return from_matrix(J, tree_product(pq, 1, J + 1));
}

Certificate growth_check(const std::vector<Convergent>& stream, const mpq_class& rho) {
  Certificate cert("growth");
  for (std::size_t k = 0; k + 1 < stream.size(); ++k) {
    const RingElement& q0 = stream[k].q;
    const RingElement& q1 = stream[k + 1].q;
    const std::size_t j = stream[k].j;
    if (q0.domain().archimedean()) {
      const mpq_class ratio2(q1.norm(), q0.norm());
      const CertStatus s = ratio2 >= rho * rho ? CertStatus::pass : CertStatus::fail;
      const mpq_class r = certified::sqrt(ratio2, 64).lo();
      cert.add(j, s, "ratio >= " + certified::format17(certified::round_down(r)));
    } else {
      const long diff = q1.degree() - q0.degree();
      const CertStatus s = certified::exp(mpq_class(diff), 64).lo() >= rho ? CertStatus::pass
                                                                            : CertStatus::fail;
      cert.add(j, s, "degree gap " + std::to_string(diff));
    }
  }
  return cert;
}

RingElement gap_identity_check(const Convergent& cj, const Convergent& cj1) {
  RingElement cross = cj1.p * cj.q - cj.p * cj1.q;
  if (!cross.is_unit())
    throw Error(Errc::identity_violated,
                "p_{j+1} q_j - p_j q_{j+1} = " + cross.to_string() + " at j = " + std::to_string(cj.j));
  return cross;
}

// ---------------- XiSource ----------------

struct XiSource::Cache {
  std::mutex mu;
  Mat2 state;
  std::size_t cur = 0;
  std::vector<mpq_class> logq;  // prefix maxima of lower bounds of log|q_j|
  std::map<mpq_class, Scalar> memo;
  mpq_class log_c0_hi;
};

XiSource::XiSource(PartialQuotients pq) : pq_(std::move(pq)), cache_(std::make_unique<Cache>()) {
  cache_->state = Mat2::identity(pq_.domain());
  cache_->logq.push_back(mpq_class(0));
  cache_->log_c0_hi = certified::log(pq_.c0(), 64).hi();
}

XiSource::~XiSource() = default;

namespace {

bool meets(const Domain& d, const mpq_class& log_c0_hi, const mpq_class& logq, const mpq_class& target) {
  const mpq_class bound = log_c0_hi - 2 * logq;
  if (d.is_poly()) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
    return f <= target;
  }
  return bound + kLn2Hi <= target;
}

}  // namespace

std::size_t XiSource::index_for(const mpq_class& target_log) const {
  Cache& c = *cache_;
  std::lock_guard lock(c.mu);
  const Domain& d = pq_.domain();
  auto ok = [&](std::size_t j) { return meets(d, c.log_c0_hi, c.logq[j], target_log); };
  if (c.cur >= 1 && ok(c.cur)) {
    std::size_t lo = 1, hi = c.cur;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (ok(mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }
  for (;;) {
    const RingElement t = pq_.term(c.cur + 1);
    ++c.cur;
    if (d.is_poly()) {
      // deg q_j is the sum of the partial quotient degrees
      c.logq.push_back(c.logq.back() + t.degree());
    } else {
      advance(c.state, t);
      c.logq.push_back(std::max(c.logq.back(), log_abs_lower(c.state.m00)));
    }
    if (ok(c.cur)) return c.cur;
  }
}

Scalar XiSource::eval(const mpq_class& target_log) const {
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->memo.find(target_log);
    if (it != cache_->memo.end()) return it->second;
  }
  const std::size_t J = index_for(target_log);
  Convergent cv;
  {
    std::lock_guard lock(cache_->mu);
    if (J == cache_->cur && !pq_.domain().is_poly()) cv = from_matrix(J, cache_->state);
  }
  if (cv.j != J) cv = convergent_at(pq_, J);

  const Domain& d = pq_.domain();
  Scalar out;
  if (d.is_poly()) {
    const mpq_class bound = cache_->log_c0_hi - 2 * mpq_class(cv.q.degree());
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
    const long t = f.get_si();
    const long r = std::max<long>(1, cv.p.degree() - cv.q.degree() - t);
    Precision prec;
    prec.window = r;
    out = Scalar(sc_div(embed(cv.p), embed(cv.q), prec).jet().with_tail(t));
  } else {
    double tl = -target_log.get_d() / 0.6931471805599453;
    const long bits = std::max<long>(64, static_cast<long>(std::ceil(tl)) + 16);
    const mpz_class n = cv.q.norm();
    const RingElement num = cv.p * cv.q.conj();
    const mpq_class rad = pq_.c0() / mpq_class(n);
    if (d.kind() == DomainKind::rational_integers) {
      out = Ball::from_rational(mpq_class(num.x(), n), 0, rad, true, bits);
    } else if (d.kind() == DomainKind::gaussian_integers) {
      out = Ball::from_rational(mpq_class(num.x(), n), mpq_class(num.y(), n), rad, false, bits);
    } else {
      // (X + Y sqrt(-5)) / N = X/N + i Y sqrt(5) / N
      const Interval s5 = certified::sqrt(mpq_class(5), bits + 8);
      const mpq_class yn(num.y(), n);
      const Interval im = Interval(yn) * s5;
      out = Ball::from_rational(mpq_class(num.x(), n), im.mid(), rad + im.width() / 2, false, bits);
    }
  }
  std::lock_guard lock(cache_->mu);
  if (cache_->memo.size() > 256) cache_->memo.clear();
  cache_->memo.emplace(target_log, out);
  return out;
}

Scalar XiSource::at(const Precision& prec) const {
  if (pq_.domain().is_poly()) return eval(mpq_class(-prec.window));
  return eval(-mpq_class(prec.bits) * kLn2Lo);
}

Scalar eval_xi(const XiSource& xi, const mpq_class& eps) {
  if (eps <= 0) throw Error(Errc::invalid_argument, "error target must be positive");
  return xi.eval(certified::log(eps, 64).lo());
}

}  // namespace fibext
