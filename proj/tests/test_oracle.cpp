#include "doctest.h"

#include <random>

#include "fibext/error.hpp"
#include "fibext/oracle.hpp"

using namespace fibext;

namespace {

RingElement zz(long v) { return RingElement::integer(v); }
RingElement gi(long x, long y) { return RingElement::quadratic(Domain::gaussian(), x, y); }
RingElement s5(long x, long y) { return RingElement::quadratic(Domain::sqrt_minus5(), x, y); }
RingElement poly(std::uint32_t p, std::vector<std::uint32_t> c) { return RingElement::polynomial(FpPoly(p, c)); }
RingElement u2() { return poly(2, {0, 1}); }
RingElement u2p1() { return poly(2, {1, 1}); }

ApproxTriple tri(RingElement a, RingElement b, RingElement c) { return {std::move(a), std::move(b), std::move(c)}; }

bool same(const ApproxTriple& x, const ApproxTriple& y) { return x.x0 == y.x0 && x.x1 == y.x1 && x.x2 == y.x2; }

bool among(const ApproxTriple& x, const std::vector<ApproxTriple>& ts) {
  const ApproxTriple c = canonical_triple(x);
  for (const auto& t : ts)
    if (same(c, t)) return true;
  return false;
}

LogMag height(const RingElement& x0) {
  return x0.domain().is_poly() ? LogMag::degree(x0.degree()) : LogMag::of_norm(x0.norm());
}

// rank 2 iff some 2x2 minor is nonzero
bool independent(const ApproxTriple& x, const ApproxTriple& y) {
  const auto a = x.coords(), b = y.coords();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (!(a[i] * b[j] - a[j] * b[i]).is_zero()) return true;
  return false;
}

RingElement random_poly(std::mt19937_64& rng, std::uint32_t p, int max_deg, bool monic) {
  const int d = std::uniform_int_distribution<int>(0, max_deg)(rng);
  std::vector<std::uint32_t> c(d + 1);
  for (auto& v : c) v = std::uniform_int_distribution<std::uint32_t>(0, p - 1)(rng);
  if (monic) c.back() = 1;
  return poly(p, c);
}

}  // namespace

TEST_CASE("best_for_x0 examples") {
  XiSource f2(PartialQuotients::fibonacci(u2(), u2p1()));
  const BestForX0 one = best_for_x0(RingElement::one(Domain::polynomials(2)), f2, {});
  CHECK(one.x1.is_zero());
  CHECK(one.x2.is_zero());
  REQUIRE(one.L.degree);
  CHECK(*one.L.degree == -1);

  const BestForX0 bu = best_for_x0(u2(), f2, {});
  CHECK(bu.x1 == RingElement::one(Domain::polynomials(2)));
  CHECK(*bu.L.degree <= -1);

  const auto pq = PartialQuotients::fibonacci(zz(3), zz(4));
  XiSource z(PartialQuotients::fibonacci(zz(3), zz(4)));
  for (const auto& c : convergent_stream(pq, 8)) {
    if (c.j == 0) continue;
    const BestForX0 b = best_for_x0(c.q, z, {});
    CHECK(b.x1 == c.p);
  }
  CHECK_THROWS_AS(best_for_x0(zz(0), z, {}), Error);
}

TEST_CASE("best_for_x0 is a true minimizer") {
  std::mt19937_64 rng(7);
  XiSource z(PartialQuotients::fibonacci(zz(3), zz(4)));
  XiSource g(PartialQuotients::fibonacci(gi(2, 1), gi(2, -1)));
  XiSource q(PartialQuotients::fibonacci(s5(3, 0), s5(2, 1)));
  XiSource f2(PartialQuotients::fibonacci(u2(), u2p1()));
  const Precision p{256, 128};
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const int which = k % 4;
    RingElement x0;
    const XiSource* src = nullptr;
    std::uniform_int_distribution<long> coord(-300, 300);
    switch (which) {
      case 0:
        x0 = zz(std::uniform_int_distribution<long>(1, 20000)(rng));
        src = &z;
        break;
      case 1:
        x0 = gi(coord(rng), coord(rng));
        src = &g;
        break;
      case 2:
        x0 = s5(coord(rng), coord(rng) / 3);
        src = &q;
        break;
      default:
        x0 = random_poly(rng, 2, 10, true);
        src = &f2;
        break;
    }
    if (x0.is_zero()) continue;
    const BestForX0 b = best_for_x0(x0, *src, {});
    const Scalar xi = src->at(p);
    const Domain& d = x0.domain();
    std::vector<RingElement> deltas;
    if (d.is_poly()) {
      for (std::uint32_t c = 0; c < 4; ++c) deltas.push_back(poly(2, {c & 1, c >> 1}));
    } else {
      for (long dx = -1; dx <= 1; ++dx)
        for (long dy = -1; dy <= 1; ++dy) {
          if (d.kind() == DomainKind::rational_integers && dy != 0) continue;
          deltas.push_back(d.kind() == DomainKind::rational_integers ? zz(dx)
                                                                     : RingElement::quadratic(d, dx, dy));
        }
    }
    const LogMag best = approx_error_at(tri(x0, b.x1, b.x2), xi, p).log_L;
    for (const auto& d1 : deltas)
      for (const auto& d2 : deltas) {
        const LogMag other = approx_error_at(tri(x0, b.x1 + d1, b.x2 + d2), xi, p).log_L;
        CHECK(compare(other, best) != Certainty::less);
      }
    ++checked;
  }
  CHECK(checked > 990);
}

TEST_CASE("ell_of examples") {
  XiSource f2(PartialQuotients::fibonacci(u2(), u2p1()));
  const MinimalPoint m = ell_of(LogMag::degree(1), f2, true);
  CHECK(m.exhaustive);
  CHECK(*m.ell.degree == -1);
  CHECK(m.primitive);
  const RingElement o = RingElement::one(Domain::polynomials(2)), zero = RingElement::zero(Domain::polynomials(2));
  CHECK(among(tri(o, zero, zero), m.ties));
  CHECK(among(tri(u2(), o, zero), m.ties));
  CHECK(among(m.witness, {tri(o, zero, zero), tri(u2(), o, zero)}));

  XiSource z(PartialQuotients::fibonacci(zz(3), zz(4)));
  const MinimalPoint mz = ell_of(LogMag::degree(0), z, true);
  CHECK(mz.witness.x0 == zz(1));
  CHECK(mz.ell.abs.lo() > 0);

  XiSource q(PartialQuotients::fibonacci(s5(3, 0), s5(2, 1)));
  CHECK_THROWS_AS(ell_of(LogMag::of_norm(100), q, true), Error);
  CHECK_NOTHROW(ell_of(LogMag::of_norm(100), q, false));
  CHECK_THROWS_AS(ell_of(LogMag::degree(13), f2, false), Error);
  XiSource g(PartialQuotients::fibonacci(gi(2, 1), gi(2, -1)));
  CHECK_THROWS_AS(ell_of(LogMag::of_norm(100000), g, false), Error);
}

TEST_CASE("ladder over F_2[u] and agreement with the construction") {
  XiSource f2(PartialQuotients::fibonacci(u2(), u2p1()));
  OracleTable t(f2, {std::nullopt, 8L});
  const auto lad = t.minimal_point_sequence(true);
  std::vector<long> hs;
  for (const auto& m : lad) hs.push_back(*m.X.exact_degree());
  CHECK(hs == std::vector<long>{0, 2, 3, 6});
  for (std::size_t k = 1; k < lad.size(); ++k) {
    CHECK(compare(lad[k].ell, lad[k - 1].ell) == Certainty::less);
    CHECK(independent(lad[k].witness, lad[k - 1].witness));
  }
  const TripleStream ts = triples_stream(u2(), u2p1(), 6);
  int matched = 0;
  for (std::size_t i = 1; i <= 6; ++i) {
    const ApproxTriple x = ts.triple(i);
    if (x.x0.degree() > 8) break;
    const MinimalPoint m = t.ell_of(height(x.x0), true);
    CHECK(among(x, m.ties));
    ++matched;
  }
  CHECK(matched == 3);
}

TEST_CASE("agreement over Z, Z[i], Z[sqrt(-5)]") {
  struct Run {
    RingElement a, b;
    long h;
    bool prim;
  };
  for (const Run& r : {Run{zz(3), zz(4), 2000, true}, Run{gi(2, 1), gi(2, -1), 60, true},
                       Run{s5(3, 0), s5(2, 1), 60, false}}) {
    XiSource xi(PartialQuotients::fibonacci(r.a, r.b));
    OracleTable t(xi, HeightBound::of_abs(r.h), {2});
    const TripleStream ts = triples_stream(r.a, r.b, 6);
    int matched = 0;
    for (std::size_t i = 1; i <= 6; ++i) {
      const ApproxTriple x = ts.triple(i);
      if (!t.bound().admits(x.x0)) break;
      const MinimalPoint m = t.ell_of(height(x.x0), r.prim);
      CHECK(same(canonical_triple(x), m.witness));
      ++matched;
    }
    CHECK(matched >= 2);
  }
}

TEST_CASE("ell is non-increasing and positive") {
  XiSource z(PartialQuotients::fibonacci(zz(3), zz(4)));
  OracleTable t(z, HeightBound::of_abs(500));
  std::optional<LValue> prev;
  for (long n = 1; n <= 250000; n = n * 3 / 2 + 1) {
    const MinimalPoint m = t.ell_of(LogMag::of_norm(n), false);
    CHECK(m.ell.abs.lo() > 0);
    if (prev) CHECK(compare(m.ell, *prev) != Certainty::greater);
    prev = m.ell;
  }
}

TEST_CASE("shards give identical tables") {
  XiSource g(PartialQuotients::fibonacci(gi(2, 1), gi(2, -1)));
  OracleTable a(g, HeightBound::of_abs(40), {1});
  OracleTable b(g, HeightBound::of_abs(40), {4});
  REQUIRE(a.entries().size() == b.entries().size());
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    CHECK(same(a.entries()[k].x, b.entries()[k].x));
    CHECK(a.entries()[k].L.abs.lo() == b.entries()[k].L.abs.lo());
  }
}

TEST_CASE("dependence_check") {
  XiSource f2(PartialQuotients::fibonacci(u2(), u2p1()));
  OracleTable t(f2, {std::nullopt, 8L});
  // At degree 6 only x_6 itself clears the threshold; at degree 8 its multiples by u, u + 1 join it.
  CHECK(t.below_threshold(LogMag::degree(6), 8).size() == 1);
  const auto pts = t.below_threshold(LogMag::degree(8), 8);
  REQUIRE(pts.size() >= 3);
  const DependenceResult r = dependence_check({pts[0], pts[1], pts[2]}, LogMag::degree(8), f2);
  CHECK(r.det.is_zero());
  CHECK(r.cert.passed());
  CHECK(dependence_check({pts[0], pts[0], pts[1]}, LogMag::degree(8), f2).det.is_zero());

  const RingElement o = RingElement::one(Domain::polynomials(2)), zero = RingElement::zero(Domain::polynomials(2));
  try {
    dependence_check({tri(o, zero, zero), pts[0], pts[1]}, LogMag::degree(6), f2);
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::criterion_precondition_unmet);
  }

  XiSource z(PartialQuotients::fibonacci(zz(3), zz(4)));
  OracleTable tz(z, HeightBound::of_abs(2000));
  const LogMag X = LogMag::of_norm(2000 * 2000);
  const auto pz = tz.below_threshold(X, 8);
  for (std::size_t i = 0; i < pz.size(); ++i)
    for (std::size_t j = i + 1; j < pz.size(); ++j)
      for (std::size_t k = j + 1; k < pz.size(); ++k)
        CHECK(dependence_check({pz[i], pz[j], pz[k]}, X, z).det.is_zero());
}

TEST_CASE("degenerate_decompose examples") {
  Degenerate d = degenerate_decompose(tri(zz(4), zz(6), zz(9)));
  CHECK(d.unit == zz(1));
  CHECK(d.m == zz(2));
  CHECK(d.n == zz(3));
  d = degenerate_decompose(tri(zz(-4), zz(-6), zz(-9)));
  CHECK(d.unit == zz(-1));
  CHECK(d.m == zz(2));
  CHECK(d.n == zz(3));
  d = degenerate_decompose(tri(poly(2, {0, 0, 1}), poly(2, {0, 1, 1}), poly(2, {1, 0, 1})));
  CHECK(d.unit == poly(2, {1}));
  CHECK(d.m == u2());
  CHECK(d.n == u2p1());

  auto code = [](const ApproxTriple& x) {
    try {
      degenerate_decompose(x);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::io_error;
  };
  CHECK(code(tri(zz(4), zz(6), zz(10))) == Errc::not_degenerate);
  CHECK(code(tri(zz(8), zz(12), zz(18))) == Errc::not_primitive);
  CHECK(code(tri(s5(1, 0), s5(0, 0), s5(0, 0))) == Errc::unsupported_domain);
}

TEST_CASE("degenerate_decompose round-trips") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> c(-60, 60);
  int done = 0;
  for (int k = 0; k < 2000; ++k) {
    RingElement m, n;
    const int which = k % 4;
    if (which == 0) {
      m = zz(c(rng)), n = zz(c(rng));
    } else if (which == 1) {
      m = gi(c(rng), c(rng)), n = gi(c(rng), c(rng));
    } else {
      const std::uint32_t p = which == 2 ? 2 : 3;
      m = random_poly(rng, p, 6, false), n = random_poly(rng, p, 6, false);
    }
    if (m.is_zero() && n.is_zero()) continue;
    if (!gcd(m, n).is_unit()) continue;
    const auto us = units(m.domain());
    const RingElement u = us[k % us.size()];
    const ApproxTriple x = tri(u * m * m, u * m * n, u * n * n);
    const Degenerate d = degenerate_decompose(x);
    CHECK(d.unit.is_unit());
    CHECK(d.unit * d.m * d.m == x.x0);
    CHECK(d.unit * d.m * d.n == x.x1);
    CHECK(d.unit * d.n * d.n == x.x2);
    if (!m.is_zero()) CHECK(d.m == unit_normalize(m).canonical);
    ++done;
  }
  CHECK(done > 500);
}

TEST_CASE("c1 scan over F_2[u]") {
  XiSource f2(PartialQuotients::fibonacci(u2(), u2p1()));
  OracleTable t(f2, {std::nullopt, 10L});
  std::vector<mpq_class> grid;
  for (int k = 1; k <= 10; ++k) grid.emplace_back(k);
  const GoldenRatio g = GoldenRatio::make();
  const ScanReport s = t.c1_scan(grid, true, g);
  CHECK(s.rows.size() == 10);
  CHECK(s.floor_positive);
  CHECK_FALSE(s.degrades);
  for (std::size_t k = 1; k < s.rows.size(); ++k) {
    CHECK(s.upper_envelope[k] <= s.upper_envelope[k - 1]);
    CHECK(s.lower_envelope[k] <= s.lower_envelope[k - 1]);
  }

  OracleOptions fine;
  fine.policy.start_window = 256;
  OracleTable t2(f2, {std::nullopt, 10L}, fine);
  const ScanReport s2 = t2.c1_scan(grid, true, g);
  for (std::size_t k = 0; k < s.rows.size(); ++k) CHECK(*s.rows[k].ell.degree == *s2.rows[k].ell.degree);

  std::vector<mpq_class> half(grid.begin(), grid.begin() + 5);
  const ScanReport sh = t.c1_scan(half, true, g);
  for (std::size_t k = 0; k < sh.rows.size(); ++k) {
    CHECK(sh.upper_envelope[k] <= s.upper_envelope[k]);
    CHECK(sh.lower_envelope[k] == s.lower_envelope[k]);
  }
}
