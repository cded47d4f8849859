#include "fibext/ring.hpp"

#include <algorithm>

#include "fibext/error.hpp"

namespace fibext {

namespace {

// floor((2n + d) / (2d)) for d > 0: nearest integer to n/d, halves rounded up.
mpz_class round_div(const mpz_class& n, const mpz_class& d) {
  mpz_class q;
  const mpz_class num = 2 * n + d;
  const mpz_class den = 2 * d;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

int sign_of(const mpz_class& v) { return sgn(v); }

std::string term(const mpz_class& c, const std::string& sym, bool first) {
  std::string s;
  if (c == 0) return s;
  if (c < 0)
    s += "-";
  else if (!first)
    s += "+";
  const mpz_class a = abs(c);
  if (a != 1) s += a.get_str() + (sym.empty() ? "" : "*");
  else if (sym.empty()) s += "1";
  s += sym;
  return s;
}

}  // namespace

Domain Domain::polynomials(std::uint32_t p) {
  if (p >= (1u << 31) || !is_prime(p))
    throw Error(Errc::invalid_argument, "modulus " + std::to_string(p) + " is not a prime below 2^31");
  return Domain(DomainKind::poly_over_prime_field, p);
}

Domain Domain::from_name(std::string_view name, std::uint32_t p) {
  if (name == "rational-integers") return integers();
  if (name == "gaussian-integers") return gaussian();
  if (name == "z-sqrt-minus5") return sqrt_minus5();
  if (name == "poly-over-prime-field") return polynomials(p);
  throw Error(Errc::parse_error, "unknown domain kind '" + std::string(name) + "'");
}

const char* Domain::name() const noexcept {
  switch (kind_) {
    case DomainKind::rational_integers: return "rational-integers";
    case DomainKind::gaussian_integers: return "gaussian-integers";
    case DomainKind::z_sqrt_minus5: return "z-sqrt-minus5";
    case DomainKind::poly_over_prime_field: return "poly-over-prime-field";
  }
  return "";
}

std::string Domain::label() const {
  switch (kind_) {
    case DomainKind::rational_integers: return "Z";
    case DomainKind::gaussian_integers: return "Z[i]";
    case DomainKind::z_sqrt_minus5: return "Z[sqrt(-5)]";
    case DomainKind::poly_over_prime_field: return "F_" + std::to_string(p_) + "[u]";
  }
  return "";
}

RingElement RingElement::zero(const Domain& d) { return from_int(d, 0); }

RingElement RingElement::from_int(const Domain& d, long v) {
  RingElement r;
  r.dom_ = d;
  if (d.is_poly())
    r.f_ = FpPoly::constant(d.p(), v);
  else
    r.x_ = v;
  return r;
}

RingElement RingElement::integer(mpz_class v) {
  RingElement r;
  r.x_ = std::move(v);
  return r;
}

RingElement RingElement::quadratic(const Domain& d, mpz_class x, mpz_class y) {
  if (!d.is_quadratic() && !(d.kind() == DomainKind::rational_integers && y == 0))
    throw Error(Errc::domain_mismatch, "coordinate pair outside a quadratic ring");
  RingElement r;
  r.dom_ = d;
  r.x_ = std::move(x);
  r.y_ = std::move(y);
  return r;
}

RingElement RingElement::polynomial(FpPoly f) {
  RingElement r;
  r.dom_ = Domain::polynomials(f.modulus());
  r.f_ = std::move(f);
  return r;
}

RingElement RingElement::variable(std::uint32_t p) { return polynomial(FpPoly::monomial(p, 1)); }

bool RingElement::is_zero() const { return dom_.is_poly() ? f_.is_zero() : (x_ == 0 && y_ == 0); }

bool RingElement::is_unit() const {
  if (dom_.is_poly()) return f_.degree() == 0;
  return norm() == 1;
}

mpz_class RingElement::norm() const {
  switch (dom_.kind()) {
    case DomainKind::rational_integers: return x_ * x_;
    case DomainKind::gaussian_integers: return x_ * x_ + y_ * y_;
    case DomainKind::z_sqrt_minus5: return x_ * x_ + 5 * y_ * y_;
    case DomainKind::poly_over_prime_field: break;
  }
  throw Error(Errc::unsupported_domain, "norm is defined on the archimedean rings only");
}

long RingElement::degree() const {
  if (!dom_.is_poly()) throw Error(Errc::unsupported_domain, "degree on a non-polynomial ring");
  return f_.degree();
}

RingElement RingElement::conj() const {
  RingElement r = *this;
  r.y_ = -y_;
  return r;
}

void RingElement::check_same(const RingElement& o) const {
  if (!(dom_ == o.dom_))
    throw Error(Errc::domain_mismatch, dom_.label() + " vs " + o.dom_.label());
}

RingElement RingElement::operator-() const {
  RingElement r = *this;
  if (dom_.is_poly()) {
    r.f_ = -f_;
  } else {
    r.x_ = -x_;
    r.y_ = -y_;
  }
  return r;
}

RingElement& RingElement::operator+=(const RingElement& o) {
  check_same(o);
  if (dom_.is_poly()) {
    f_ += o.f_;
  } else {
    x_ += o.x_;
    y_ += o.y_;
  }
  return *this;
}

RingElement& RingElement::operator-=(const RingElement& o) {
  check_same(o);
  if (dom_.is_poly()) {
    f_ -= o.f_;
  } else {
    x_ -= o.x_;
    y_ -= o.y_;
  }
  return *this;
}

RingElement& RingElement::operator*=(const RingElement& o) {
  check_same(o);
  switch (dom_.kind()) {
    case DomainKind::rational_integers:
      x_ *= o.x_;
      break;
    case DomainKind::gaussian_integers:
    case DomainKind::z_sqrt_minus5: {
      const long d = dom_.kind() == DomainKind::gaussian_integers ? 1 : 5;
      mpz_class nx = x_ * o.x_ - d * (y_ * o.y_);
      mpz_class ny = x_ * o.y_ + y_ * o.x_;
      x_ = std::move(nx);
      y_ = std::move(ny);
      break;
    }
    case DomainKind::poly_over_prime_field:
      f_ = f_ * o.f_;
      break;
  }
  return *this;
}

bool operator==(const RingElement& a, const RingElement& b) {
  if (!(a.dom_ == b.dom_)) return false;
  if (a.dom_.is_poly()) return a.f_ == b.f_;
  return a.x_ == b.x_ && a.y_ == b.y_;
}

std::string RingElement::to_string() const {
  if (is_zero()) return "0";
  switch (dom_.kind()) {
    case DomainKind::rational_integers:
      return x_.get_str();
    case DomainKind::gaussian_integers:
    case DomainKind::z_sqrt_minus5: {
      const std::string sym = dom_.kind() == DomainKind::gaussian_integers ? "i" : "sqrt(-5)";
      std::string s = term(x_, "", true);
      s += term(y_, sym, x_ == 0);
      return s;
    }
    case DomainKind::poly_over_prime_field: {
      std::string s;
      for (long k = f_.degree(); k >= 0; --k) {
        const auto c = f_.coeff(static_cast<std::size_t>(k));
        if (c == 0) continue;
        const std::string sym = k == 0 ? "" : k == 1 ? "u" : "u^" + std::to_string(k);
        s += term(mpz_class(c), sym, s.empty());
      }
      return s;
    }
  }
  return "";
}

LogMag abs_log(const RingElement& x, const mpq_class& eps) {
  if (x.is_zero()) return LogMag::neg_infinity();
  if (x.domain().is_poly()) return LogMag::degree(x.degree());
  const mpz_class n = x.norm();
  for (long bits = 64;; bits *= 2) {
    LogMag m = LogMag::of_norm(n, bits);
    if (m.is_exact() || m.hi() - m.lo() <= eps) return m;
  }
}

LogMag abs_log(const RingElement& x) {
  mpq_class eps(1);
  mpq_div_2exp(eps.get_mpq_t(), eps.get_mpq_t(), 64);
  return abs_log(x, eps);
}

std::pair<RingElement, RingElement> divmod(const RingElement& a, const RingElement& b) {
  if (!(a.domain() == b.domain())) throw Error(Errc::domain_mismatch, "divmod");
  if (b.is_zero()) throw Error(Errc::zero_input, "division by zero");
  const Domain& d = a.domain();
  switch (d.kind()) {
    case DomainKind::rational_integers: {
      mpz_class q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.x().get_mpz_t(), b.x().get_mpz_t());
      return {RingElement::integer(q), RingElement::integer(r)};
    }
    case DomainKind::gaussian_integers: {
      const RingElement num = a * b.conj();
      const mpz_class n = b.norm();
      RingElement q = RingElement::quadratic(d, round_div(num.x(), n), round_div(num.y(), n));
      RingElement r = a - q * b;
      return {q, r};
    }
    case DomainKind::poly_over_prime_field: {
      auto [q, r] = divmod(a.poly(), b.poly());
      return {RingElement::polynomial(q), RingElement::polynomial(r)};
    }
    case DomainKind::z_sqrt_minus5:
      break;
  }
  throw Error(Errc::unsupported_domain, "Z[sqrt(-5)] is not Euclidean");
}

std::optional<RingElement> divide_exact(const RingElement& a, const RingElement& b) {
  if (!(a.domain() == b.domain())) throw Error(Errc::domain_mismatch, "divide_exact");
  if (b.is_zero()) throw Error(Errc::zero_input, "division by zero");
  const Domain& d = a.domain();
  if (d.is_quadratic()) {
    const RingElement num = a * b.conj();
    const mpz_class n = b.norm();
    if (!mpz_divisible_p(num.x().get_mpz_t(), n.get_mpz_t()) ||
        !mpz_divisible_p(num.y().get_mpz_t(), n.get_mpz_t()))
      return std::nullopt;
    return RingElement::quadratic(d, num.x() / n, num.y() / n);
  }
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

bool divides(const RingElement& d, const RingElement& a) {
  if (d.is_zero()) return a.is_zero();
  return divide_exact(a, d).has_value();
}

RingElement gcd(const RingElement& a, const RingElement& b) {
  if (!(a.domain() == b.domain())) throw Error(Errc::domain_mismatch, "gcd");
  if (!a.domain().euclidean()) throw Error(Errc::unsupported_domain, "gcd on " + a.domain().label());
  if (a.is_zero() && b.is_zero()) throw Error(Errc::zero_input, "gcd(0, 0)");
  RingElement x = a, y = b;
  while (!y.is_zero()) {
    RingElement r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return unit_normalize(x).canonical;
}

bool is_primitive(std::span<const RingElement> coords) {
  std::optional<RingElement> g;
  for (const auto& c : coords) {
    if (c.is_zero()) continue;
    g = g ? gcd(*g, c) : unit_normalize(c).canonical;
    if (!c.domain().euclidean())
      throw Error(Errc::unsupported_domain, "primitivity on " + c.domain().label());
  }
  if (!g) throw Error(Errc::zero_input, "primitivity of the zero triple");
  return g->is_unit();
}

UnitNormalized unit_normalize(const RingElement& x) {
  if (x.is_zero()) throw Error(Errc::zero_input, "unit_normalize(0)");
  const Domain& d = x.domain();
  switch (d.kind()) {
    case DomainKind::rational_integers: {
      const int s = sign_of(x.x());
      return {RingElement::integer(abs(x.x())), RingElement::integer(s)};
    }
    case DomainKind::z_sqrt_minus5: {
      const bool pos = x.x() > 0 || (x.x() == 0 && x.y() > 0);
      return {pos ? x : -x, RingElement::from_int(d, pos ? 1 : -1)};
    }
    case DomainKind::gaussian_integers: {
      // multiply by i until Re > 0 and Im >= 0; i^k * x = c means x = i^{-k} c
      const RingElement i = RingElement::quadratic(d, 0, 1);
      RingElement c = x;
      RingElement unit = RingElement::one(d);
      const RingElement minus_i = RingElement::quadratic(d, 0, -1);
      for (int k = 0; k < 4; ++k) {
        if (c.x() > 0 && c.y() >= 0) return {c, unit};
        c *= i;
        unit *= minus_i;
      }
      break;
    }
    case DomainKind::poly_over_prime_field: {
      const auto lead = x.poly().leading();
      return {RingElement::polynomial(x.poly().monic()),
              RingElement::polynomial(FpPoly::constant(d.p(), lead))};
    }
  }
  throw Error(Errc::identity_violated, "unit normalization failed");
}

std::vector<RingElement> units(const Domain& d) {
  std::vector<RingElement> out;
  switch (d.kind()) {
    case DomainKind::rational_integers:
    case DomainKind::z_sqrt_minus5:
      out = {RingElement::from_int(d, 1), RingElement::from_int(d, -1)};
      break;
    case DomainKind::gaussian_integers:
      out = {RingElement::from_int(d, 1), RingElement::quadratic(d, 0, 1),
             RingElement::from_int(d, -1), RingElement::quadratic(d, 0, -1)};
      break;
    case DomainKind::poly_over_prime_field:
      for (std::uint32_t c = 1; c < d.p(); ++c) out.push_back(RingElement::from_int(d, c));
      break;
  }
  return out;
}

std::strong_ordering canonical_compare(const RingElement& a, const RingElement& b) {
  if (!(a.domain() == b.domain())) throw Error(Errc::domain_mismatch, "canonical_compare");
  auto zc = [](const mpz_class& u, const mpz_class& v) {
    const int c = cmp(u, v);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  };
  if (a.domain().is_poly()) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    for (long k = a.degree(); k >= 0; --k) {
      const auto i = static_cast<std::size_t>(k);
      if (auto c = a.poly().coeff(i) <=> b.poly().coeff(i); c != 0) return c;
    }
    return std::strong_ordering::equal;
  }
  if (auto c = zc(a.norm(), b.norm()); c != 0) return c;
  if (auto c = zc(a.x(), b.x()); c != 0) return c;
  return zc(a.y(), b.y());
}

}  // namespace fibext
