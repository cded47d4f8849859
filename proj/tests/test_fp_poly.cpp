#include "doctest.h"

#include <random>

#include "fibext/fp_poly.hpp"

using namespace fibext;

namespace {

FpPoly random_poly(std::uint32_t p, std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint32_t> c(n);
  for (auto& x : c) x = std::uniform_int_distribution<std::uint32_t>(0, p - 1)(rng);
  return FpPoly(p, c);
}

FpPoly schoolbook(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return FpPoly(a.modulus());
  std::vector<std::uint32_t> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
  const std::uint64_t p = a.modulus();
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j)
      c[i + j] = static_cast<std::uint32_t>((c[i + j] + std::uint64_t(a.coeff(i)) * b.coeff(j)) % p);
  return FpPoly(a.modulus(), c);
}

}  // namespace

TEST_CASE("basic operations") {
  const FpPoly f(2, {0, 1, 1});
  CHECK(f.degree() == 2);
  CHECK(FpPoly(3, {1, 2}).monic() == FpPoly(3, {2, 1}));
  CHECK(FpPoly(2, {1, 1}) + FpPoly(2, {1, 1}) == FpPoly(2));
  CHECK(FpPoly(5, {1, 2, 3}).reversed(3) == FpPoly(5, {3, 2, 1}));
  auto [q, r] = divmod(FpPoly(2, {0, 1, 1}), FpPoly(2, {1, 1}));
  CHECK(q == FpPoly(2, {0, 1}));
  CHECK(r.is_zero());
  CHECK(inverse_mod(2, 3) == 2);
  CHECK(is_prime(65537));
  CHECK_FALSE(is_prime(65535));
}

TEST_CASE("Kronecker multiplication agrees with schoolbook") {
  std::mt19937_64 rng(11);
  for (std::uint32_t p : {2u, 3u, 65537u, 2147483647u}) {
    for (std::size_t n : {1u, 47u, 48u, 200u, 1500u}) {
      const FpPoly a = random_poly(p, n, rng), b = random_poly(p, n + 13, rng);
      CHECK(a * b == schoolbook(a, b));
    }
  }
}

TEST_CASE("series inverse") {
  std::mt19937_64 rng(5);
  for (std::uint32_t p : {2u, 3u, 101u}) {
    FpPoly f = random_poly(p, 300, rng) + FpPoly::constant(p, 1);
    if (f.coeff(0) == 0) f = f + FpPoly::constant(p, 1);
    const FpPoly g = inverse_series(f, 517);
    CHECK((f * g).low_part(517) == FpPoly::constant(p, 1));
  }
}
