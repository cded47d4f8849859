#include "fibext/fp_poly.hpp"

#include <gmp.h>

#include <algorithm>
#include <bit>

#include "fibext/error.hpp"

namespace fibext {

namespace {

constexpr std::size_t kKroneckerThreshold = 48;

unsigned bit_length(unsigned __int128 v) {
  unsigned n = 0;
  while (v != 0) {
    ++n;
    v >>= 1;
  }
  return n;
}

std::vector<std::uint64_t> pack(std::span<const FpPoly::Coeff> a, unsigned bits) {
  const std::size_t total = a.size() * bits;
  std::vector<std::uint64_t> words(total / 64 + 2, 0);
  std::size_t off = 0;
  for (FpPoly::Coeff v : a) {
    const std::size_t w = off >> 6;
    const unsigned sh = off & 63;
    words[w] |= static_cast<std::uint64_t>(v) << sh;
    if (sh != 0 && sh + 32 > 64) words[w + 1] |= static_cast<std::uint64_t>(v) >> (64 - sh);
    off += bits;
  }
  return words;
}

std::vector<FpPoly::Coeff> schoolbook(std::span<const FpPoly::Coeff> a,
                                      std::span<const FpPoly::Coeff> b, std::uint32_t p) {
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  if (p < (1u << 16)) {
    // each product < 2^32, so 2^32 of them fit in a word before reduction
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      const std::uint64_t ai = a[i];
      for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += ai * b[j];
    }
    std::vector<FpPoly::Coeff> out(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) out[k] = static_cast<FpPoly::Coeff>(acc[k] % p);
    return out;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    const std::uint64_t ai = a[i];
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + ai * b[j]) % p;
  }
  return {acc.begin(), acc.end()};
}

std::vector<FpPoly::Coeff> kronecker(std::span<const FpPoly::Coeff> a,
                                     std::span<const FpPoly::Coeff> b, std::uint32_t p,
                                     unsigned bits) {
  auto wa = pack(a, bits);
  auto wb = pack(b, bits);
  mpz_t za, zb;
  mpz_init(za);
  mpz_init(zb);
  mpz_import(za, wa.size(), -1, sizeof(std::uint64_t), 0, 0, wa.data());
  mpz_import(zb, wb.size(), -1, sizeof(std::uint64_t), 0, 0, wb.data());
  mpz_mul(za, za, zb);
  const std::size_t n_out = a.size() + b.size() - 1;
  std::vector<std::uint64_t> words(n_out * bits / 64 + 3, 0);
  std::size_t count = 0;
  mpz_export(words.data(), &count, -1, sizeof(std::uint64_t), 0, 0, za);
  mpz_clear(za);
  mpz_clear(zb);

  std::vector<FpPoly::Coeff> out(n_out);
  const std::uint64_t mask = bits == 64 ? ~0ULL : ((1ULL << bits) - 1);
  std::size_t off = 0;
  for (std::size_t k = 0; k < n_out; ++k) {
    const std::size_t w = off >> 6;
    const unsigned sh = off & 63;
    std::uint64_t v = words[w] >> sh;
    if (sh != 0 && sh + bits > 64) v |= words[w + 1] << (64 - sh);
    out[k] = static_cast<FpPoly::Coeff>((v & mask) % p);
    off += bits;
  }
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  long long t = 0, new_t = 1;
  long long r = p, new_r = a % p;
  while (new_r != 0) {
    const long long q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw Error(Errc::zero_input, "element not invertible mod p");
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

namespace detail {

std::vector<FpPoly::Coeff> multiply(std::span<const FpPoly::Coeff> a,
                                    std::span<const FpPoly::Coeff> b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  const std::size_t n = std::min(a.size(), b.size());
  if (n < kKroneckerThreshold) return schoolbook(a, b, p);
  const unsigned __int128 bound =
      static_cast<unsigned __int128>(p - 1) * (p - 1) * static_cast<unsigned __int128>(n);
  const unsigned bits = std::max(1u, bit_length(bound));
  if (bits > 64) return schoolbook(a, b, p);
  return kronecker(a, b, p, bits);
}

}  // namespace detail

FpPoly::FpPoly(std::uint32_t p, std::vector<Coeff> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (auto& c : c_) c %= p_;
  trim();
}

FpPoly FpPoly::constant(std::uint32_t p, long long c) {
  long long r = c % static_cast<long long>(p);
  if (r < 0) r += p;
  return FpPoly(p, {static_cast<Coeff>(r)});
}

FpPoly FpPoly::monomial(std::uint32_t p, std::size_t degree, Coeff c) {
  std::vector<Coeff> v(degree + 1, 0);
  v[degree] = c;
  return FpPoly(p, std::move(v));
}

void FpPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void FpPoly::check_same(const FpPoly& o) const {
  if (p_ != o.p_) throw Error(Errc::domain_mismatch, "polynomials over different prime fields");
}

FpPoly FpPoly::scaled(Coeff c) const {
  FpPoly r(p_);
  if (c % p_ == 0) return r;
  r.c_.resize(c_.size());
  for (std::size_t k = 0; k < c_.size(); ++k)
    r.c_[k] = static_cast<Coeff>(static_cast<std::uint64_t>(c_[k]) * c % p_);
  return r;
}

FpPoly FpPoly::shifted_up(std::size_t k) const {
  if (is_zero()) return *this;
  FpPoly r(p_);
  r.c_.assign(k, 0);
  r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  return r;
}

FpPoly FpPoly::low_part(std::size_t k) const {
  FpPoly r(p_);
  r.c_.assign(c_.begin(), c_.begin() + std::min(k, c_.size()));
  r.trim();
  return r;
}

FpPoly FpPoly::high_part(std::size_t k) const {
  FpPoly r(p_);
  if (k < c_.size()) r.c_.assign(c_.begin() + k, c_.end());
  return r;
}

FpPoly FpPoly::monic() const {
  if (is_zero()) throw Error(Errc::zero_input, "monic of zero polynomial");
  return scaled(inverse_mod(leading(), p_));
}

FpPoly FpPoly::reversed(std::size_t n) const {
  std::vector<Coeff> v(n, 0);
  for (std::size_t k = 0; k < std::min(n, c_.size()); ++k) v[n - 1 - k] = c_[k];
  return FpPoly(p_, std::move(v));
}

FpPoly& FpPoly::operator+=(const FpPoly& o) {
  check_same(o);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t k = 0; k < o.c_.size(); ++k) {
    const std::uint32_t s = c_[k] + o.c_[k];
    c_[k] = s >= p_ ? s - p_ : s;
  }
  trim();
  return *this;
}

FpPoly& FpPoly::operator-=(const FpPoly& o) {
  check_same(o);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t k = 0; k < o.c_.size(); ++k)
    c_[k] = c_[k] >= o.c_[k] ? c_[k] - o.c_[k] : c_[k] + p_ - o.c_[k];
  trim();
  return *this;
}

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
  a.check_same(b);
  return FpPoly(a.p_, detail::multiply(a.c_, b.c_, a.p_));
}

FpPoly FpPoly::operator-() const {
  FpPoly r(p_);
  r.c_.resize(c_.size());
  for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] == 0 ? 0 : p_ - c_[k];
  return r;
}

std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b) {
  if (b.is_zero()) throw Error(Errc::zero_input, "polynomial division by zero");
  if (a.modulus() != b.modulus()) throw Error(Errc::domain_mismatch, "divmod moduli differ");
  const std::uint32_t p = a.modulus();
  if (a.degree() < b.degree()) return {FpPoly(p), a};
  std::vector<FpPoly::Coeff> r = a.coeffs();
  const auto& bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  const std::uint64_t inv_lead = inverse_mod(b.leading(), p);
  std::vector<FpPoly::Coeff> q(r.size() - db, 0);
  for (std::size_t k = r.size(); k-- > db;) {
    if (r[k] == 0) continue;
    const std::uint64_t f = r[k] * inv_lead % p;
    q[k - db] = static_cast<FpPoly::Coeff>(f);
    for (std::size_t j = 0; j <= db; ++j) {
      const std::uint64_t sub = f * bc[j] % p;
      auto& slot = r[k - db + j];
      slot = static_cast<FpPoly::Coeff>((slot + p - sub) % p);
    }
  }
  return {FpPoly(p, std::move(q)), FpPoly(p, std::move(r))};
}

FpPoly inverse_series(const FpPoly& f, std::size_t n) {
  const std::uint32_t p = f.modulus();
  if (f.coeff(0) == 0) throw Error(Errc::division_by_possible_zero, "series with zero constant term");
  FpPoly g = FpPoly::constant(p, inverse_mod(f.coeff(0), p));
  std::size_t k = 1;
  while (k < n) {
    const std::size_t k2 = std::min(2 * k, n);
    // g <- g (2 - f g) mod u^k2
    FpPoly e = (f.low_part(k2) * g).low_part(k2);
    FpPoly two_minus = -e;
    two_minus += FpPoly::constant(p, 2);
    g = (g * two_minus).low_part(k2);
    k = k2;
  }
  return g.low_part(n);
}

}  // namespace fibext
