#include "fibext/extremal.hpp"

#include <algorithm>
#include <random>

#include "fibext/error.hpp"
#include "fibext/parallel.hpp"

namespace fibext {

namespace {

long bitlen(const mpz_class& v) { return v == 0 ? 0 : static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)); }

long height_bits(const RingElement& x) {
  if (x.domain().is_poly()) return x.degree();
  return std::max(bitlen(x.x()), bitlen(x.y())) + 3;
}

Interval log_of(const mpq_class& c, long bits = 128) { return certified::log(c, bits); }

}  // namespace

GoldenRatio GoldenRatio::make(long bits) {
  const Interval s5 = certified::sqrt(mpq_class(5), bits + 4);
  const Interval g = (Interval::of_int(1) + s5) * Interval(mpq_class(1, 2));
  return {g, g - Interval::of_int(1)};
}

LogMag max_logmag(const LogMag& x, const LogMag& y) {
  if (x.is_neg_inf()) return y;
  if (y.is_neg_inf()) return x;
  if (x.exact_degree() && y.exact_degree()) return LogMag::degree(std::max(*x.exact_degree(), *y.exact_degree()));
  const mpq_class hi = std::max(x.hi(), y.hi());
  if (x.lo_is_neg_inf() && y.lo_is_neg_inf()) return LogMag::upper_only(hi);
  mpq_class lo = x.lo_is_neg_inf() ? y.lo() : y.lo_is_neg_inf() ? x.lo() : std::max(x.lo(), y.lo());
  if (lo == hi && lo.get_den() == 1 && (x.exact_degree() || y.exact_degree()))
    return LogMag::degree(lo.get_num().get_si());
  return LogMag::enclosure(Interval(lo, hi));
}

ApproxError approx_error_at(const ApproxTriple& x, const Scalar& xi, const Precision& prec) {
  const Scalar x0 = embed(x.x0, prec.bits), x1 = embed(x.x1, prec.bits), x2 = embed(x.x2, prec.bits);
  const Scalar e1 = sc_sub(sc_mul(x0, xi, prec), x1, prec);
  const Scalar e2 = sc_sub(sc_mul(x0, sc_mul(xi, xi, prec), prec), x2, prec);
  return {e1, e2, max_logmag(sc_abs_bounds(e1), sc_abs_bounds(e2))};
}

Precision hinted_precision(const PrecisionPolicy& policy, long bits_hint, long window_hint) {
  Precision p = policy.start();
  while (p.bits < bits_hint || p.window < window_hint) {
    auto n = policy.next(p);
    if (!n) break;
    p = *n;
  }
  return p;
}

ApproxError approx_error(const ApproxTriple& x, const XiSource& xi, const PrecisionPolicy& policy,
                         const mpq_class& max_width) {
  const long h = height_bits(x.x0);
  const bool poly = x.domain().is_poly();
  Precision p = hinted_precision(policy, poly ? 0 : 2 * h + 64, poly ? 2 * h + 8 : 0);
  std::optional<mpq_class> last;
  for (;;) {
    ApproxError r = approx_error_at(x, xi.at(p), p);
    const LogMag& l = r.log_L;
    if (!l.is_neg_inf() && !l.lo_is_neg_inf() && (l.is_exact() || l.hi() - l.lo() <= max_width)) return r;
    auto n = policy.next(p);
    if (!n)
      throw Error(Errc::precision_cap_exceeded,
                  "L(x) undecided at " + std::to_string(p.bits) + " bits / window " + std::to_string(p.window) +
                      ", bracket " + l.to_string());
    p = *n;
  }
}

ThetaAbs theta_abs(const RingElement& a, const RingElement& b, const XiSource& xi, const PrecisionPolicy& policy) {
  return decide(
      policy,
      [&](const Precision& p) -> std::optional<ThetaAbs> {
        const Scalar x = xi.at(p);
        Scalar t = sc_mul(x, x, p);
        t = sc_add(t, sc_mul(embed(a + b, p.bits), x, p), p);
        t = sc_add(t, embed(a * b + RingElement::one(a.domain()), p.bits), p);
        const LogMag l = sc_abs_bounds(t, p.bits);
        if (l.is_neg_inf() || l.lo_is_neg_inf()) return std::nullopt;
        if (!l.is_exact() && l.hi() - l.lo() > mpq_class(1, 1L << 60)) return std::nullopt;
        return ThetaAbs{t, l};
      },
      "theta");
}

void fill_c3(ConstantsReport& k, const PartialQuotients& pq, const RingElement& a1) {
  k.rho = pq.rho();
  k.c0 = pq.c0();
  mpq_class inv_q1, inv_q1_sq;
  if (a1.domain().archimedean()) {
    const mpq_class n(a1.norm());
    inv_q1 = 1 / certified::sqrt(n, 128).lo();
    inv_q1_sq = 1 / n;
  } else {
    inv_q1 = certified::exp(mpq_class(-a1.degree()), 128).hi();
    inv_q1_sq = certified::exp(mpq_class(-2 * a1.degree()), 128).hi();
  }
  k.xi_abs_hi = inv_q1 + k.c0 * inv_q1_sq;
  k.c3 = (1 + k.xi_abs_hi) * k.c0;
}

Certificate verify_c3_bound(const std::vector<TraceRecord>& records, const ConstantsReport& k) {
  Certificate cert("c3-bound");
  const Interval lc3 = log_of(k.c3);
  for (const auto& r : records) {
    if (!r.mu) {
      cert.add(r.i, CertStatus::unknown, "mu undecided");
      continue;
    }
    Certainty c;
    if (r.mu->exact_degree() && r.lambda.exact_degree()) {
      c = compare(Interval(mpq_class(*r.mu->exact_degree() + *r.lambda.exact_degree())), lc3);
    } else {
      c = compare(r.mu->interval() + r.lambda.interval(), lc3);
    }
    const Interval margin = lc3 - r.mu->interval() - r.lambda.interval();
    cert.add(r.i, le_status(c), "margin >= " + certified::format17(certified::round_down(margin.lo())));
  }
  return cert;
}

std::optional<std::size_t> RatioReport::band_entry(const mpq_class& tol) const {
  std::optional<std::size_t> entry;
  for (const auto& r : rows) {
    const bool in = r.deviation.lo() >= -tol && r.deviation.hi() <= tol;
    if (!in)
      entry.reset();
    else if (!entry)
      entry = r.i;
  }
  return entry;
}

RatioReport ratio_limit_check(const std::vector<TraceRecord>& records, const LogMag& log_theta, std::size_t i_min) {
  RatioReport rep;
  rep.max_abs_deviation = 0;
  auto lam = [&](std::size_t i) { return i == 0 ? Interval::of_int(0) : records.at(i - 1).lambda.interval(); };
  for (std::size_t i = std::max<std::size_t>(i_min, 3); i <= records.size(); ++i) {
    const Interval d = lam(i) - lam(i - 1) - lam(i - 2) - log_theta.interval();
    rep.rows.push_back({i, d});
    rep.max_abs_deviation = std::max({rep.max_abs_deviation, mpq_class(abs(d.lo())), mpq_class(abs(d.hi()))});
  }
  return rep;
}

Sandwich sandwich_estimate(const std::vector<TraceRecord>& records, const GoldenRatio& g) {
  if (records.size() < 6) throw Error(Errc::out_of_range, "sandwich estimate needs N >= 6");
  Sandwich s;
  // log(r_i r_{i-1}^{1/gamma}) for 3 <= i <= N
  std::optional<mpq_class> lo, hi;
  for (std::size_t i = 3; i <= records.size(); ++i) {
    const Interval v = records[i - 1].log_r + g.inv_gamma * records[i - 2].log_r;
    lo = lo ? std::min(*lo, v.lo()) : v.lo();
    hi = hi ? std::max(*hi, v.hi()) : v.hi();
  }
  s.c4 = certified::exp(*lo, 128).lo();
  s.c5 = certified::exp(*hi, 128).hi();
  const Interval& r2 = records[1].log_r;
  for (;;) {
    const Interval l4 = log_of(s.c4), l5 = log_of(s.c5);
    const Interval lower = g.gamma * l4 - l5, upper = g.gamma * l5 - l4;
    if (le_status(compare(lower, r2)) == CertStatus::pass && le_status(compare(r2, upper)) == CertStatus::pass) break;
    s.c4 /= 2;
    s.c5 *= 2;
    ++s.widen_steps;
  }
  const Interval l4 = log_of(s.c4), l5 = log_of(s.c5);
  const Interval lower = g.gamma * l4 - l5, upper = g.gamma * l5 - l4;
  for (std::size_t i = 2; i <= records.size(); ++i) {
    const Interval& r = records[i - 1].log_r;
    const CertStatus st = worst(le_status(compare(lower, r)), le_status(compare(r, upper)));
    s.consequence.add(i, st, "log r_i in [" + certified::format17(certified::round_down(lower.lo())) + ", " +
                                 certified::format17(certified::round_up(upper.hi())) + "]");
  }
  return s;
}

mpq_class c2_of(const mpq_class& c3, const mpq_class& c4, const mpq_class& c5, const GoldenRatio& g) {
  const Interval l = log_of(c3) + g.inv_gamma * log_of(c4) - log_of(c5);
  return certified::exp(l.lo(), 128).lo();
}

mpq_class c2_chain_of(const mpq_class& c3, const mpq_class& c4, const mpq_class& c5, const GoldenRatio& g) {
  const Interval l = log_of(c3) + log_of(c5) - g.inv_gamma * log_of(c4);
  return certified::exp(l.lo(), 128).lo();
}

std::size_t cover_index(const LogMag& X, const std::vector<TraceRecord>& records) {
  if (records.empty()) throw Error(Errc::out_of_range, "no records");
  const Certainty lo = compare(records.front().lambda, X);
  if (lo == Certainty::greater) throw Error(Errc::out_of_range, "X below X_1");
  if (compare(X, records.back().lambda) == Certainty::greater) throw Error(Errc::out_of_range, "X above X_N");
  std::size_t best = 1;
  for (const auto& r : records) {
    const Certainty c = compare(r.lambda, X);
    if (c == Certainty::less || c == Certainty::equal) best = r.i;
  }
  return best;
}

std::vector<ExponentRow> exponent_profile(const std::vector<TraceRecord>& records) {
  std::vector<ExponentRow> out;
  for (const auto& r : records)
    if (r.exp_est) out.push_back({r.i, *r.exp_est});
  return out;
}

// ---------------- Construction ----------------

Construction::Construction(const RingElement& a, const RingElement& b, ConstructOptions opt)
    : a_(a), b_(b), opt_(std::move(opt)), g_(GoldenRatio::make()) {
  if (opt_.N < 1) throw Error(Errc::out_of_range, "N must be at least 1");
  build();
}

Construction::~Construction() = default;

void Construction::build() {
  const std::size_t N = opt_.N;
  PartialQuotients pq = PartialQuotients::fibonacci(a_, b_);
  xi_ = std::make_unique<XiSource>(pq);
  ts_ = triples_stream(a_, b_, N + 1);

  {
    Certificate conv("convergents");
    const auto cs = convergent_stream(pq, 64);
    conv.merge(growth_check(cs, pq.rho()));
    certs_.push_back(std::move(conv));
  }

  Certificate det3c("det3");
  std::vector<std::optional<RingElement>> det3v(N + 1);
  for (std::size_t i = 2; i <= N; ++i) {
    try {
      Det3Result r = det3_trace(ts_.at(i - 1), ts_.at(i), ts_.at(i + 1), a_, b_);
      det3v[i] = r.value;
      det3c.add(i, CertStatus::pass, r.value.to_string());
      det3_.push_back(std::move(r));
    } catch (const Error& e) {
      det3c.add(i, CertStatus::fail, e.what());
    }
  }

  std::vector<LogMag> lam(N + 2);
  lam[0] = LogMag::point(0);
  for (std::size_t i = 1; i <= N + 1; ++i) lam[i] = abs_log(ts_.at(i).x0);
  lambda_next_ = lam[N + 1];

  std::vector<std::optional<LogMag>> mu(N + 1);
  std::vector<std::string> mu_err(N + 1);
  parallel_for(N, opt_.threads, [&](std::size_t k) {
    const std::size_t i = k + 1;
    try {
      mu[i] = approx_error(ts_.triple(i), *xi_, opt_.policy).log_L;
    } catch (const Error& e) {
      if (e.code() != Errc::precision_cap_exceeded) throw;
      mu_err[i] = e.what();
    }
  });

  records_.resize(N);
  for (std::size_t i = 1; i <= N; ++i) {
    TraceRecord& r = records_[i - 1];
    r.i = i;
    r.lambda = lam[i];
    r.mu = mu[i];
    r.log_r = lam[i].interval() - g_.gamma * lam[i - 1].interval();
    if (r.mu) r.exp_est = (-r.mu->interval()) / lam[i + 1].interval();
    r.det3 = det3v[i];
  }

  fill_c3(k_, pq, a_);
  Certificate theta_c("theta-nonzero");
  try {
    const ThetaAbs t = theta_abs(a_, b_, *xi_, opt_.policy);
    k_.log_theta = t.log_abs;
    if (t.log_abs.exact_degree())
      k_.theta_abs = certified::exp(mpq_class(*t.log_abs.exact_degree()), 128);
    else
      k_.theta_abs = t.theta.ball().abs_interval(128);
    theta_c.add(0, CertStatus::pass, "|theta| in " + t.log_abs.to_string());
    ratios_ = ratio_limit_check(records_, k_.log_theta, 3);
  } catch (const Error& e) {
    if (e.code() != Errc::precision_cap_exceeded) throw;
    theta_c.add(0, CertStatus::unknown, e.what());
  }

  Certificate c3c = verify_c3_bound(records_, k_);
  for (std::size_t i = 1; i <= N; ++i)
    if (!mu[i]) c3c.add(i, CertStatus::unknown, mu_err[i]);

  certs_.push_back(std::move(det3c));
  certs_.push_back(std::move(theta_c));
  certs_.push_back(c3c);

  if (N >= 6) {
    sandwich_ = sandwich_estimate(records_, g_);
    k_.c4 = sandwich_.c4;
    k_.c5 = sandwich_.c5;
    k_.widen_steps = sandwich_.widen_steps;
    k_.c2 = c2_of(k_.c3, k_.c4, k_.c5, g_);
    k_.c2_chain = c2_chain_of(k_.c3, k_.c4, k_.c5, g_);
    k_.has_sandwich = true;
    certs_.push_back(sandwich_.consequence);
    if (N >= 4 && opt_.cover_samples > 0) {
      cover_points_ = cover_sample(opt_.cover_samples, opt_.cover_seed);
      certs_.push_back(cover_certificate(cover_points_, k_.c2_chain, "inequality2"));
      const Certificate stated = cover_certificate(cover_points_, k_.c2, "inequality2-stated-c2");
      k_.stated_c2_fail = stated.count(CertStatus::fail);
      k_.stated_c2_unknown = stated.count(CertStatus::unknown);
      std::vector<LogMag> probes;
      for (std::size_t i = 2; i + 2 <= N; ++i)
        probes.push_back(LogMag::point(records_[i].lambda.lo() - mpq_class(1, 1 << 20)));
      const Certificate probe = cover_certificate(probes, k_.c2, "inequality2-stated-c2-probe");
      k_.stated_c2_probes = probes.size();
      k_.stated_c2_probe_fail = probe.count(CertStatus::fail);
    }
  }

  for (auto& r : records_) {
    CertStatus s = r.mu ? CertStatus::pass : CertStatus::unknown;
    for (const auto& c : certs_)
      if (c.name() != "inequality2" && c.name() != "convergents") s = worst(s, c.status_at(r.i));
    r.cert = s;
  }
}

CoverResult Construction::cover(const LogMag& X, const mpq_class& c2) const {
  CoverResult res;
  res.i = cover_index(X, records_);
  res.x = ts_.triple(res.i);
  const TraceRecord& r = records_[res.i - 1];
  res.height = le_status(compare(r.lambda, X));
  if (!r.mu) return res;
  auto check = [&](const LogMag& mu, long bits) {
    const GoldenRatio g = bits > 128 ? GoldenRatio::make(bits) : g_;
    const Interval x = X.refined(bits).interval();
    const Interval rhs = log_of(c2, bits) - g.inv_gamma * x;
    return le_status(compare(mu.interval(), rhs));
  };
  res.bound = check(*r.mu, 128);
  if (res.bound == CertStatus::unknown) {
    try {
      const ApproxError e = approx_error(res.x, *xi_, opt_.policy, mpq_class(1) / mpq_class(mpz_class(1) << 200));
      res.bound = check(e.log_L, 512);
    } catch (const Error& e) {
      if (e.code() != Errc::precision_cap_exceeded) throw;
    }
  }
  return res;
}

std::vector<LogMag> Construction::cover_sample(std::size_t count, std::uint64_t seed) const {
  if (records_.size() < 4) return {};
  const mpq_class lo = records_[1].lambda.hi();
  const mpq_class hi = records_[records_.size() - 2].lambda.lo();
  std::mt19937_64 rng(seed);
  std::vector<LogMag> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const mpq_class u(mpz_class(static_cast<unsigned long>(rng() >> 11)), mpz_class(1) << 53);
    out.push_back(LogMag::point(lo + (hi - lo) * u));
  }
  return out;
}

Certificate Construction::cover_certificate(const std::vector<LogMag>& xs, const mpq_class& c2,
                                            const char* name) const {
  Certificate cert(name);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const CoverResult c = cover(xs[k], c2);
    cert.add(k, c.status(), "X = e^" + certified::format17(certified::round_down(xs[k].lo())) + " -> x_" +
                                std::to_string(c.i));
  }
  return cert;
}

std::size_t Construction::count(CertStatus s) const {
  std::size_t n = 0;
  for (const auto& c : certs_) n += c.count(s);
  return n;
}

}  // namespace fibext
