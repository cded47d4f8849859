#include "fibext/fibword.hpp"

#include <gmpxx.h>

#include <algorithm>

#include "fibext/error.hpp"

namespace fibext {

namespace {

// floor(m / phi) = floor((m sqrt5 - m) / 2), with floor(m sqrt5) = isqrt(5 m^2)
mpz_class floor_div_phi(std::uint64_t m) {
  mpz_class mm(static_cast<unsigned long>(m));
  mpz_class s = 5 * mm * mm;
  mpz_sqrt(s.get_mpz_t(), s.get_mpz_t());
  mpz_class r = s - mm;
  mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), 1);
  return r;
}


Mat2 j_matrix(const Domain& d) {
  return {RingElement::zero(d), RingElement::one(d), -RingElement::one(d), RingElement::zero(d)};
}

}  // namespace

Letter fib_letter(std::uint64_t n) {
  return floor_div_phi(n + 2) == floor_div_phi(n + 1) ? Letter::b : Letter::a;
}

std::uint64_t fib_length(std::size_t i) {
  if (i == 0) throw Error(Errc::out_of_range, "Fibonacci words start at i = 1");
  std::uint64_t f1 = 1, f2 = 2;
  if (i == 1) return f1;
  for (std::size_t k = 3; k <= i; ++k) {
    const std::uint64_t f = f1 + f2;
    if (f < f2) throw Error(Errc::out_of_range, "word length overflows 64 bits");
    f1 = f2;
    f2 = f;
  }
  return f2;
}

Word fib_word(std::size_t i) {
  if (i == 0) throw Error(Errc::out_of_range, "Fibonacci words start at i = 1");
  Word prev = "a", cur = "ab";
  if (i == 1) return prev;
  for (std::size_t k = 3; k <= i; ++k) {
    Word next = cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::uint64_t palindrome_length(std::size_t i) { return fib_length(i + 2) - 2; }

bool is_palindrome(std::string_view w) { return std::equal(w.begin(), w.begin() + w.size() / 2, w.rbegin()); }

Word palindrome_prefix(std::size_t i) {
  if (i == 0) throw Error(Errc::out_of_range, "palindromic prefixes start at i = 1");
  Word w = fib_word(i + 2);
  w.resize(w.size() - 2);
  if (!is_palindrome(w)) throw Error(Errc::palindrome_violated, "m_" + std::to_string(i));
  return w;
}

Mat2 phi(std::string_view w, const RingElement& a, const RingElement& b) {
  if (a.domain() != b.domain()) throw Error(Errc::domain_mismatch, "a and b in different rings");
  Mat2 m = Mat2::identity(a.domain());
  for (char c : w) {
    if (c != 'a' && c != 'b') throw Error(Errc::invalid_argument, "letter outside {a, b}");
    m = m * Mat2::letter(c == 'a' ? a : b);
  }
  return m;
}

SymMatrix SymMatrix::from(std::size_t i, const Mat2& m) {
  if (!m.symmetric())
    throw Error(Errc::identity_violated, "M_" + std::to_string(i) + " is not symmetric");
  return {i, m.m00, m.m01, m.m11};
}

const char* to_string(Parity p) noexcept {
  return p == Parity::s_on_even ? "S on even i" : "S on odd i";
}

ApproxTriple TripleStream::triple(std::size_t i) const {
  const SymMatrix& m = at(i);
  return {m.x0, m.x1, m.x2, i, Provenance::constructed};
}

namespace {

std::vector<SymMatrix> build(const RingElement& a, const RingElement& b, std::size_t N, Parity parity,
                             std::size_t check_upto, bool& ok) {
  const Mat2 S = phi("ab", a, b);
  const Mat2 St = S.transpose();
  std::vector<SymMatrix> out;
  out.push_back(SymMatrix::from(1, phi(palindrome_prefix(1), a, b)));
  if (N >= 2) out.push_back(SymMatrix::from(2, phi(palindrome_prefix(2), a, b)));
  ok = true;
  for (std::size_t i = 2; i < N; ++i) {
    const bool even = i % 2 == 0;
    const bool use_s = (parity == Parity::s_on_even) == even;
    const Mat2 next = out[i - 1].matrix() * (use_s ? S : St) * out[i - 2].matrix();
    if (i + 1 <= check_upto && next != phi(palindrome_prefix(i + 1), a, b)) {
      ok = false;
      return out;
    }
    out.push_back(SymMatrix::from(i + 1, next));
  }
  return out;
}

}  // namespace

TripleStream triples_stream(const RingElement& a, const RingElement& b, std::size_t N) {
  if (N == 0) throw Error(Errc::out_of_range, "N must be at least 1");
  if (a == b) throw Error(Errc::invalid_argument, "a and b must be distinct");
  const std::size_t check = std::min<std::size_t>(N, 10);
  TripleStream ts;
  for (Parity p : {Parity::s_on_even, Parity::s_on_odd}) {
    bool ok = false;
    auto ms = build(a, b, N, p, check, ok);
    if (!ok) continue;
    for (const auto& m : ms) {
      const long sign = palindrome_length(m.index) % 2 == 0 ? 1 : -1;
      if (m.det() != RingElement::from_int(a.domain(), sign))
        throw Error(Errc::identity_violated, "det M_" + std::to_string(m.index) + " is not (-1)^|m_i|");
    }
    ts.matrices = std::move(ms);
    ts.parity = p;
    ts.cross_checked = check;
    return ts;
  }
  throw Error(Errc::recurrence_mismatch, "M_{i+1} = M_i S_i M_{i-1} fails for both parities");
}

RingElement det3(const std::array<RingElement, 3>& r0, const std::array<RingElement, 3>& r1,
                 const std::array<RingElement, 3>& r2) {
  return r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
         r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
}

Det3Result det3_trace(const SymMatrix& prev, const SymMatrix& cur, const SymMatrix& next,
                      const RingElement& a, const RingElement& b) {
  const Domain& d = a.domain();
  const RingElement direct = det3({prev.x0, prev.x1, prev.x2}, {cur.x0, cur.x1, cur.x2},
                                  {next.x0, next.x1, next.x2});
  const Mat2 J = j_matrix(d);
  const RingElement traced = -(J * cur.matrix() * J * next.matrix() * J * prev.matrix()).trace();
  const std::string at = " at i = " + std::to_string(cur.index);
  if (direct != traced)
    throw Error(Errc::identity_violated, "determinant and trace routes disagree" + at);
  const auto unit = divide_exact(direct, a - b);
  if (!unit || !unit->is_unit())
    throw Error(Errc::identity_violated, "det3 = " + direct.to_string() + " is not a unit times (a-b)" + at);
  Det3Result r;
  r.value = direct;
  r.unit = *unit;
  r.predicted_sign = (palindrome_length(prev.index) + palindrome_length(cur.index)) % 2 == 0 ? 1 : -1;
  r.observed_sign = r.unit == RingElement::one(d) ? 1 : -1;
  const int closed = (cur.index % 2 == 0 ? -1 : 1) * r.predicted_sign;
  r.closed_form_holds = r.unit == RingElement::from_int(d, closed);
  return r;
}

}  // namespace fibext
