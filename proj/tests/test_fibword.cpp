#include "doctest.h"

#include "fibext/error.hpp"
#include "fibext/fibword.hpp"

using namespace fibext;

namespace {

RingElement zz(long v) { return RingElement::integer(v); }
RingElement gi(long x, long y) { return RingElement::quadratic(Domain::gaussian(), x, y); }
RingElement s5(long x, long y) { return RingElement::quadratic(Domain::sqrt_minus5(), x, y); }
RingElement f2(std::vector<std::uint32_t> c) { return RingElement::polynomial(FpPoly(2, c)); }

}  // namespace

TEST_CASE("Fibonacci words") {
  CHECK(fib_word(1) == "a");
  CHECK(fib_word(2) == "ab");
  CHECK(fib_word(3) == "aba");
  CHECK(fib_word(4) == "abaab");
  CHECK(fib_word(5) == "abaababa");
  const Word w = fib_word(20);
  for (std::size_t n = 0; n < w.size(); ++n) REQUIRE(static_cast<char>(fib_letter(n)) == w[n]);
  for (std::size_t i = 1; i <= 25; ++i) CHECK(fib_word(i).size() == fib_length(i));
}

TEST_CASE("palindromic prefixes") {
  CHECK(palindrome_prefix(1) == "a");
  CHECK(palindrome_prefix(2) == "aba");
  CHECK(palindrome_prefix(3) == "abaaba");
  for (std::size_t i = 1; i <= 25; ++i) {
    const Word m = palindrome_prefix(i);
    CHECK(is_palindrome(m));
    CHECK(m.size() == palindrome_length(i));
    if (i >= 3) CHECK(palindrome_length(i) == palindrome_length(i - 1) + palindrome_length(i - 2) + 2);
  }
}

TEST_CASE("phi") {
  const RingElement a = zz(3), b = zz(4);
  CHECK(phi("", a, b) == Mat2::identity(a.domain()));
  CHECK(phi("a", a, b) == Mat2::letter(a));
  const Mat2 m = phi("aba", a, b);
  CHECK(m.m00 == a * a * b + zz(2) * a);
  CHECK(m.m01 == a * b + zz(1));
  CHECK(m.m10 == a * b + zz(1));
  CHECK(m.m11 == b);
  const Mat2 f = phi("aba", f2({0, 1}), f2({1, 1}));
  CHECK(f.m00 == f2({0, 0, 1, 1}));
  CHECK(f.m01 == f2({1, 1, 1}));
  CHECK(f.m11 == f2({1, 1}));
}

TEST_CASE("triples stream") {
  const auto ts = triples_stream(zz(3), zz(4), 12);
  CHECK(ts.matrices.size() == 12);
  CHECK(ts.cross_checked == 10);
  CHECK(ts.parity == Parity::s_on_even);
  CHECK(ts.triple(1).x0 == zz(3));
  CHECK(ts.triple(1).x1 == zz(1));
  CHECK(ts.triple(1).x2 == zz(0));
  CHECK(ts.triple(2).x0 == zz(42));
  CHECK(ts.triple(2).x1 == zz(13));
  CHECK(ts.triple(2).x2 == zz(4));
  const auto tf = triples_stream(f2({0, 1}), f2({1, 1}), 3);
  CHECK(tf.triple(2).x0 == f2({0, 0, 1, 1}));
  CHECK(tf.triple(2).x1 == f2({1, 1, 1}));
  CHECK(tf.triple(2).x2 == f2({1, 1}));
  CHECK_THROWS_AS(triples_stream(zz(3), zz(3), 4), Error);
}

TEST_CASE("determinant identities") {
  struct Case {
    RingElement a, b;
  };
  for (const Case& c : {Case{f2({0, 1}), f2({1, 1})}, Case{zz(3), zz(4)}, Case{gi(2, 1), gi(2, -1)},
                        Case{s5(3, 0), s5(2, 1)}}) {
    const auto ts = triples_stream(c.a, c.b, 16);
    for (std::size_t i = 1; i <= 16; ++i) {
      const long sign = palindrome_length(i) % 2 ? -1 : 1;
      CHECK(ts.at(i).det() == RingElement::from_int(c.a.domain(), sign));
    }
    for (std::size_t i = 2; i < 16; ++i) {
      const Det3Result r = det3_trace(ts.at(i - 1), ts.at(i), ts.at(i + 1), c.a, c.b);
      CHECK(r.unit.is_unit());
      if (c.a.domain().is_poly())
        CHECK(r.value == f2({1}));
      else
        CHECK(r.value.norm() == (c.a - c.b).norm());
      CHECK(r.closed_form_holds);
    }
  }
}
