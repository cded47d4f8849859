#include "fibext/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "fibext/error.hpp"
#include "fibext/parallel.hpp"

namespace fibext {

namespace {

constexpr std::size_t kShard = 256;

mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Nearest integer to every point of iv, if unique.
std::optional<mpz_class> round_unique(const Interval& iv) {
  const mpq_class half(1, 2);
  mpz_class lo = floor_q(iv.lo() + half), hi = floor_q(iv.hi() + half);
  if (lo != hi) return std::nullopt;
  return lo;
}

Interval max_iv(const Interval& x, const Interval& y) {
  return {std::max(x.lo(), y.lo()), std::max(x.hi(), y.hi())};
}

Interval box_re(const Ball& b) {
  const mpq_class r = b.rad().to_mpq(), c = b.re().to_mpq();
  return {c - r, c + r};
}

Interval box_im(const Ball& b) {
  const mpq_class r = b.rad().to_mpq(), c = b.im().to_mpq();
  return {c - r, c + r};
}

// Nearest lattice point to the ball, coordinatewise.
std::optional<RingElement> nearest(const Domain& d, const Ball& y, long bits) {
  auto x = round_unique(box_re(y));
  if (!x) return std::nullopt;
  switch (d.kind()) {
    case DomainKind::rational_integers:
      return RingElement::integer(*x);
    case DomainKind::gaussian_integers: {
      auto v = round_unique(box_im(y));
      if (!v) return std::nullopt;
      return RingElement::quadratic(d, *x, *v);
    }
    case DomainKind::z_sqrt_minus5: {
      auto v = round_unique(box_im(y) / certified::sqrt(mpq_class(5), bits + 8));
      if (!v) return std::nullopt;
      return RingElement::quadratic(d, *x, *v);
    }
    default:
      return std::nullopt;
  }
}

ApproxTriple triple(RingElement x0, RingElement x1, RingElement x2) {
  ApproxTriple t{std::move(x0), std::move(x1), std::move(x2)};
  t.provenance = Provenance::oracle;
  return t;
}

bool triple_less(const ApproxTriple& a, const ApproxTriple& b) {
  for (int k = 0; k < 3; ++k) {
    const auto c = canonical_compare(a.coords()[k], b.coords()[k]);
    if (c != 0) return c < 0;
  }
  return false;
}

bool triple_equal(const ApproxTriple& a, const ApproxTriple& b) {
  return a.x0 == b.x0 && a.x1 == b.x1 && a.x2 == b.x2;
}

std::optional<BestForX0> best_at(const RingElement& x0, const Scalar& xi, const Scalar& xi2, const Precision& p) {
  const Domain& d = x0.domain();
  const Scalar e0 = embed(x0, p.bits);
  const Scalar y1 = sc_mul(e0, xi, p), y2 = sc_mul(e0, xi2, p);
  if (d.is_poly()) {
    const Jet& j1 = y1.jet();
    const Jet& j2 = y2.jet();
    if ((j1.tail() && *j1.tail() >= 0) || (j2.tail() && *j2.tail() >= 0)) return std::nullopt;
    const LogMag l = max_logmag(sc_abs_bounds(Scalar(j1.fractional_part())), sc_abs_bounds(Scalar(j2.fractional_part())));
    if (!l.exact_degree()) return std::nullopt;
    return BestForX0{RingElement::polynomial(j1.polynomial_part()), RingElement::polynomial(j2.polynomial_part()),
                     LValue{*l.exact_degree(), Interval()}};
  }
  auto x1 = nearest(d, y1.ball(), p.bits);
  auto x2 = nearest(d, y2.ball(), p.bits);
  if (!x1 || !x2) return std::nullopt;
  const Interval a1 = sc_sub(y1, embed(*x1, p.bits), p).ball().abs_interval(p.bits);
  const Interval a2 = sc_sub(y2, embed(*x2, p.bits), p).ball().abs_interval(p.bits);
  const Interval L = max_iv(a1, a2);
  if (L.lo() <= 0) return std::nullopt;
  return BestForX0{*x1, *x2, LValue{std::nullopt, L}};
}

LValue unit_L(const Domain& d) {
  if (d.is_poly()) return LValue{0L, Interval()};
  return LValue{std::nullopt, Interval::of_int(1)};
}

}  // namespace

LogMag LValue::log() const {
  if (degree) return LogMag::degree(*degree);
  return LogMag::enclosure(Interval(certified::log(abs.lo(), 128).lo(), certified::log(abs.hi(), 128).hi()));
}

Certainty compare(const LValue& x, const LValue& y) {
  if (x.degree && y.degree) {
    if (*x.degree < *y.degree) return Certainty::less;
    if (*x.degree > *y.degree) return Certainty::greater;
    return Certainty::equal;
  }
  if (x.degree || y.degree) return compare(x.log(), y.log());
  return compare(x.abs, y.abs);
}

std::optional<BestForX0> best_for_x0_at(const RingElement& x0, const Scalar& xi, const Precision& prec) {
  if (x0.is_zero()) throw Error(Errc::zero_input, "best_for_x0: x0 = 0");
  return best_at(x0, xi, sc_mul(xi, xi, prec), prec);
}

BestForX0 best_for_x0(const RingElement& x0, const XiSource& xi, const PrecisionPolicy& policy) {
  if (x0.is_zero()) throw Error(Errc::zero_input, "best_for_x0: x0 = 0");
  Precision p = policy.start();
  for (;;) {
    const Scalar s = xi.at(p);
    if (auto r = best_at(x0, s, sc_mul(s, s, p), p)) return *r;
    auto n = policy.next(p);
    if (!n) {
      std::string detail = "best_for_x0(" + x0.to_string() + ") undecided at the precision cap";
      if (s.is_ball()) {
        const Ball y = sc_mul(embed(x0, p.bits), s, p).ball();
        const Interval re = box_re(y);
        detail += "; candidates x1 in {" + floor_q(re.lo() + mpq_class(1, 2)).get_str() + ", " +
                  floor_q(re.hi() + mpq_class(1, 2)).get_str() + "} (real part)";
      }
      throw Error(Errc::rounding_ambiguous, detail);
    }
    p = *n;
  }
}

HeightBound HeightBound::of(const Domain& d, const LogMag& X) {
  if (X.is_neg_inf()) {
    if (d.is_poly()) return {std::nullopt, -1L};
    return {mpz_class(0), std::nullopt};
  }
  if (d.is_poly()) {
    if (X.exact_degree()) return {std::nullopt, *X.exact_degree()};
    for (long bits = 128; bits <= 4096; bits *= 2) {
      const LogMag r = X.refined(bits);
      const mpz_class lo = floor_q(r.lo()), hi = floor_q(r.hi());
      if (lo == hi) return {std::nullopt, lo.get_si()};
    }
  } else {
    if (X.norm()) return {*X.norm(), std::nullopt};
    for (long bits = 128; bits <= 4096; bits *= 2) {
      const LogMag r = X.refined(bits);
      const mpz_class lo = floor_q(certified::exp(2 * r.lo(), bits).lo());
      const mpz_class hi = floor_q(certified::exp(2 * r.hi(), bits).hi());
      if (lo == hi) return {lo, std::nullopt};
    }
  }
  throw Error(Errc::rounding_ambiguous, "height bound " + X.to_string() + " sits on a lattice height");
}

bool HeightBound::admits(const RingElement& x0) const {
  if (degree_max) return x0.degree() <= *degree_max;
  return x0.norm() <= *norm_max;
}

ApproxTriple canonical_triple(const ApproxTriple& x) {
  const RingElement& lead = !x.x0.is_zero() ? x.x0 : (!x.x1.is_zero() ? x.x1 : x.x2);
  if (lead.is_zero()) return x;
  const UnitNormalized un = unit_normalize(lead);
  const RingElement inv = *divide_exact(RingElement::one(lead.domain()), un.unit);
  ApproxTriple r = x;
  r.x0 = x.x0 * inv;
  r.x1 = x.x1 * inv;
  r.x2 = x.x2 * inv;
  return r;
}

namespace {

template <class Push>
void enumerate_archimedean(const Domain& d, const mpz_class& N, Push&& push) {
  const mpz_class limit = d.kind() == DomainKind::rational_integers ? mpz_class(400000000) : mpz_class(40000);
  if (N > limit)
    throw Error(Errc::search_space_too_large, "norm bound " + N.get_str() + " exceeds " + limit.get_str());
  const long n = N.get_si();
  auto isqrt = [](long v) { return v < 0 ? -1L : static_cast<long>(std::sqrt(double(v))); };
  auto fix = [](long r, long v) {
    while (r >= 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
  };
  switch (d.kind()) {
    case DomainKind::rational_integers:
      for (long x = 1; x * x <= n; ++x) push(RingElement::integer(x));
      break;
    case DomainKind::gaussian_integers:
      for (long x = 1; x * x <= n; ++x)
        for (long y = 0, ym = fix(isqrt(n - x * x), n - x * x); y <= ym; ++y)
          push(RingElement::quadratic(d, x, y));
      break;
    default:
      for (long y = 1; 5 * y * y <= n; ++y) push(RingElement::quadratic(d, 0, y));
      for (long x = 1; x * x <= n; ++x) {
        const long rest = n - x * x;
        long ym = 0;
        while (5 * (ym + 1) * (ym + 1) <= rest) ++ym;
        for (long y = -ym; y <= ym; ++y) push(RingElement::quadratic(d, x, y));
      }
      break;
  }
}

// Canonical x0 with |x0| <= bound, sorted by height then canonical order.
std::vector<RingElement> enumerate_x0(const Domain& d, const HeightBound& hb, std::size_t max_count) {
  std::vector<RingElement> out;
  auto push = [&](RingElement e) {
    if (out.size() >= max_count)
      throw Error(Errc::search_space_too_large, "more than " + std::to_string(max_count) + " candidates for x0");
    out.push_back(std::move(e));
  };
  if (d.is_poly()) {
    const long D = *hb.degree_max;
    const std::uint32_t p = d.p();
    if (D > 12 && p <= 3) throw Error(Errc::search_space_too_large, "deg x0 <= 12 over F_2 / F_3");
    for (long deg = 0; deg <= D; ++deg) {
      double total = std::pow(double(p), double(deg));
      if (total + double(out.size()) > double(max_count))
        throw Error(Errc::search_space_too_large, "degree " + std::to_string(deg) + " over F_" + std::to_string(p));
      std::vector<FpPoly::Coeff> c(static_cast<std::size_t>(deg) + 1, 0);
      c.back() = 1;
      for (;;) {
        push(RingElement::polynomial(FpPoly(p, c)));
        std::size_t k = 0;
        while (k < static_cast<std::size_t>(deg) && ++c[k] == p) c[k++] = 0;
        if (k == static_cast<std::size_t>(deg)) break;
      }
    }
  } else {
    enumerate_archimedean(d, *hb.norm_max, push);
  }
  std::sort(out.begin(), out.end(), [](const RingElement& a, const RingElement& b) {
    return canonical_compare(a, b) < 0;
  });
  return out;
}


}  // namespace

OracleTable::OracleTable(const XiSource& xi, const HeightBound& bound, OracleOptions opt)
    : xi_(&xi), dom_(xi.domain()), bound_(bound), opt_(opt) {
  const std::vector<RingElement> xs = enumerate_x0(dom_, bound_, opt_.max_candidates);
  const RingElement zero = RingElement::zero(dom_), one = RingElement::one(dom_);
  entries_.resize(xs.size() + 1);
  {
    OracleEntry& z = entries_[0];
    z.x = triple(zero, zero, one);
    z.L = unit_L(dom_);
    z.norm = 0;
    z.degree = -1;
    z.primitive = true;
  }
  const Precision base = opt_.policy.start();
  const Scalar s = xi.at(base);
  const Scalar s2 = sc_mul(s, s, base);
  const std::size_t shards = (xs.size() + kShard - 1) / kShard;
  parallel_for(shards, opt_.threads, [&](std::size_t k) {
    const std::size_t end = std::min(xs.size(), (k + 1) * kShard);
    for (std::size_t t = k * kShard; t < end; ++t) {
      const RingElement& x0 = xs[t];
      auto r = best_at(x0, s, s2, base);
      BestForX0 b = r ? *std::move(r) : best_for_x0(x0, xi, opt_.policy);
      OracleEntry& e = entries_[t + 1];
      e.x = triple(x0, b.x1, b.x2);
      e.L = std::move(b.L);
      if (dom_.is_poly()) {
        e.degree = x0.degree();
      } else {
        e.norm = x0.norm();
      }
      if (dom_.ufd()) {
        const auto c = e.x.coords();
        e.primitive = is_primitive(c);
      }
    }
  });
}

Certainty OracleTable::refined_compare(const OracleEntry& x, const OracleEntry& y) const {
  if (x.x.x0.is_zero() || y.x.x0.is_zero()) return compare(x.L, y.L);
  for (auto p = opt_.policy.next(opt_.policy.start()); p; p = opt_.policy.next(*p)) {
    const Scalar s = xi_->at(*p);
    auto a = best_for_x0_at(x.x.x0, s, *p), b = best_for_x0_at(y.x.x0, s, *p);
    if (!a || !b) continue;
    const Certainty c = compare(a->L, b->L);
    if (c != Certainty::unknown) return c;
  }
  return Certainty::unknown;
}

std::size_t OracleTable::prefix_end(const HeightBound& hb) const {
  if (dom_.is_poly()) {
    if (*hb.degree_max > *bound_.degree_max)
      throw Error(Errc::out_of_range, "X beyond the enumerated degree " + std::to_string(*bound_.degree_max));
  } else if (*hb.norm_max > *bound_.norm_max) {
    throw Error(Errc::out_of_range, "X beyond the enumerated norm " + bound_.norm_max->get_str());
  }
  auto it = std::partition_point(entries_.begin(), entries_.end(), [&](const OracleEntry& e) {
    if (dom_.is_poly()) return e.degree <= *hb.degree_max;
    return e.norm <= *hb.norm_max;
  });
  return static_cast<std::size_t>(it - entries_.begin());
}

MinimalPoint OracleTable::minimum(std::size_t end, const LogMag& X, bool primitive_only) const {
  if (primitive_only && !dom_.ufd())
    throw Error(Errc::unsupported_domain, "primitivity is not available on Z[sqrt(-5)]");
  MinimalPoint mp;
  mp.X = X;
  mp.exhaustive = true;
  std::vector<std::size_t> best;
  for (std::size_t k = 0; k < end; ++k) {
    const OracleEntry& e = entries_[k];
    if (primitive_only && !e.primitive) continue;
    if (best.empty()) {
      best.push_back(k);
      continue;
    }
    switch (compare(e.L, entries_[best.front()].L)) {
      case Certainty::less:
        best.assign(1, k);
        break;
      case Certainty::equal:
        best.push_back(k);
        break;
      case Certainty::unknown: {
        const Certainty c = refined_compare(e, entries_[best.front()]);
        if (c == Certainty::less) {
          best.assign(1, k);
        } else if (c == Certainty::equal || c == Certainty::unknown) {
          best.push_back(k);
          if (c == Certainty::unknown) mp.exhaustive = false;
        }
        break;
      }
      default:
        break;
    }
  }
  for (std::size_t k : best) mp.ties.push_back(entries_[k].x);
  std::sort(mp.ties.begin(), mp.ties.end(), triple_less);
  mp.witness = mp.ties.front();
  mp.ell = entries_[best.front()].L;
  for (std::size_t k : best)
    if (triple_equal(entries_[k].x, mp.witness)) mp.primitive = entries_[k].primitive;
  return mp;
}

MinimalPoint OracleTable::ell_of(const LogMag& X, bool primitive_only) const {
  return minimum(prefix_end(HeightBound::of(dom_, X)), X, primitive_only);
}

std::vector<MinimalPoint> OracleTable::minimal_point_sequence(bool primitive_only) const {
  if (primitive_only && !dom_.ufd())
    throw Error(Errc::unsupported_domain, "primitivity is not available on Z[sqrt(-5)]");
  std::vector<MinimalPoint> out;
  std::optional<LValue> cur;
  std::size_t k = 1;  // entry 0 is (0, 0, 1)
  if (!primitive_only || entries_[0].primitive) cur = entries_[0].L;
  while (k < entries_.size()) {
    std::size_t g = k;
    while (g < entries_.size() && (dom_.is_poly() ? entries_[g].degree == entries_[k].degree
                                                   : entries_[g].norm == entries_[k].norm))
      ++g;
    std::optional<LValue> group_min;
    for (std::size_t t = k; t < g; ++t) {
      if (primitive_only && !entries_[t].primitive) continue;
      if (!group_min || compare(entries_[t].L, *group_min) == Certainty::less) group_min = entries_[t].L;
    }
    if (group_min && (!cur || compare(*group_min, *cur) == Certainty::less)) {
      const LogMag X = dom_.is_poly() ? LogMag::degree(entries_[k].degree) : LogMag::of_norm(entries_[k].norm);
      out.push_back(minimum(g, X, primitive_only));
      cur = out.back().ell;
    }
    k = g;
  }
  return out;
}

std::vector<ApproxTriple> OracleTable::below_threshold(const LogMag& X, std::size_t limit) const {
  const std::size_t end = prefix_end(HeightBound::of(dom_, X));
  // log L < -(log 6 + X) / 2
  const Interval l6 = certified::log(mpq_class(6), 128);
  const mpq_class thr = -(l6.hi() + X.hi()) / 2;
  std::vector<std::pair<LValue, ApproxTriple>> hits;
  for (std::size_t k = 0; k < end; ++k) {
    const OracleEntry& e = entries_[k];
    const LogMag l = e.L.log();
    if (l.hi() < thr) hits.emplace_back(e.L, e.x);
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const auto& a, const auto& b) { return compare(a.first, b.first) == Certainty::less; });
  std::vector<ApproxTriple> out;
  for (std::size_t k = 0; k < hits.size() && k < limit; ++k) out.push_back(hits[k].second);
  return out;
}

ScanReport OracleTable::c1_scan(const std::vector<mpq_class>& X_logs, bool primitive_only, const GoldenRatio& g) const {
  ScanReport rep;
  for (const mpq_class& x : X_logs) {
    const MinimalPoint mp = ell_of(LogMag::point(x), primitive_only);
    const Interval scale = Interval(x) * g.inv_gamma;
    const Interval s = Interval(certified::exp(scale.lo(), 128).lo(), certified::exp(scale.hi(), 128).hi());
    Interval v;
    if (mp.ell.degree) {
      const Interval e = certified::exp(mpq_class(*mp.ell.degree), 128);
      v = e * s;
    } else {
      v = mp.ell.abs * s;
    }
    rep.rows.push_back({x, mp.ell, v});
  }
  const std::size_t n = rep.rows.size();
  if (n == 0) return rep;
  rep.upper_envelope.resize(n);
  rep.lower_envelope.resize(n);
  for (std::size_t k = n; k-- > 0;)
    rep.upper_envelope[k] =
        k + 1 < n ? std::max(rep.upper_envelope[k + 1], rep.rows[k].value.lo()) : rep.rows[k].value.lo();
  for (std::size_t k = 0; k < n; ++k)
    rep.lower_envelope[k] = k ? std::min(rep.lower_envelope[k - 1], rep.rows[k].value.hi()) : rep.rows[k].value.hi();
  mpq_class overall = rep.upper_envelope[0];
  rep.c1_estimate = rep.upper_envelope[n / 2];
  rep.floor_positive = rep.c1_estimate > 0;
  rep.degrades = rep.c1_estimate * 10 < overall;
  for (std::size_t k = 0; k < n; ++k) {
    if (rep.upper_envelope[k] <= 2 * rep.c1_estimate) {
      rep.X0_log = rep.rows[k].X_log;
      break;
    }
  }
  return rep;
}

MinimalPoint ell_of(const LogMag& X, const XiSource& xi, bool primitive_only, OracleOptions opt) {
  const HeightBound hb = HeightBound::of(xi.domain(), X);
  return OracleTable(xi, hb, opt).ell_of(X, primitive_only);
}

DependenceResult dependence_check(const std::array<ApproxTriple, 3>& pts, const LogMag& X, const XiSource& xi,
                                  const PrecisionPolicy& policy) {
  const Domain& d = xi.domain();
  const HeightBound hb = HeightBound::of(d, X);
  const Interval l6 = certified::log(mpq_class(6), 128);
  for (std::size_t k = 0; k < 3; ++k) {
    const ApproxTriple& x = pts[k];
    if (!hb.admits(x.x0))
      throw Error(Errc::criterion_precondition_unmet, "point " + std::to_string(k) + ": |x0| > X");
    const LogMag l = x.x0.is_zero() ? max_logmag(abs_log(x.x1), abs_log(x.x2)) : approx_error(x, xi, policy).log_L;
    // 2 log L + log 6 + X < 0
    const mpq_class slack = 2 * l.hi() + l6.hi() + X.hi();
    if (!(slack < 0))
      throw Error(Errc::criterion_precondition_unmet,
                  "point " + std::to_string(k) + ": L(x) < (6X)^(-1/2) not certified");
  }
  DependenceResult r{det3(pts[0].coords(), pts[1].coords(), pts[2].coords())};
  if (!r.det.is_zero()) {
    r.cert.add(0, CertStatus::fail, "det = " + r.det.to_string());
    throw Error(Errc::determinant_nonzero, "det of three points meeting (6X)^(-1/2) is " + r.det.to_string());
  }
  r.cert.add(0, CertStatus::pass, "det = 0");
  return r;
}

Degenerate degenerate_decompose(const ApproxTriple& x) {
  const Domain& d = x.domain();
  if (!d.ufd()) throw Error(Errc::unsupported_domain, "degenerate_decompose needs a UFD");
  if (!(x.x0 * x.x2 - x.x1 * x.x1).is_zero()) throw Error(Errc::not_degenerate, "x0 x2 != x1^2");
  if (x.is_zero() || !is_primitive(x.coords())) throw Error(Errc::not_primitive, "coordinates share a non-unit factor");
  const RingElement zero = RingElement::zero(d), one = RingElement::one(d);
  Degenerate r;
  if (x.x0.is_zero()) {
    r = {x.x2, zero, one};
  } else {
    r.m = gcd(x.x0, x.x1);
    auto u = divide_exact(x.x0, r.m * r.m);
    if (!u || !u->is_unit()) throw Error(Errc::not_primitive, "x0 / gcd(x0, x1)^2 is not a unit");
    r.unit = *u;
    r.n = *divide_exact(x.x1, r.unit * r.m);
  }
  const bool ok = r.unit * r.m * r.m == x.x0 && r.unit * r.m * r.n == x.x1 && r.unit * r.n * r.n == x.x2;
  if (!ok) throw Error(Errc::identity_violated, "back-substitution of u (m^2, m n, n^2) failed");
  return r;
}

}  // namespace fibext
