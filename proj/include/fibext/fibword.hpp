#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fibext/mat2.hpp"
#include "fibext/ring.hpp"

namespace fibext {

enum class Letter : char { a = 'a', b = 'b' };

/// Words over {a, b}, stored as plain strings.
using Word = std::string;

/// Letter n (0-based) of the infinite Fibonacci word abaababa...
Letter fib_letter(std::uint64_t n);
/// |w_i| with |w_1| = 1, |w_2| = 2.
std::uint64_t fib_length(std::size_t i);
/// w_1 = a, w_2 = ab, w_i = w_{i-1} w_{i-2}.
Word fib_word(std::size_t i);
/// w_{i+2} without its last two letters; checked to be a palindrome.
Word palindrome_prefix(std::size_t i);
/// |m_i| = |w_{i+2}| - 2 without materializing the word.
std::uint64_t palindrome_length(std::size_t i);
bool is_palindrome(std::string_view w);

/// Product of [[a,1],[1,0]] / [[b,1],[1,0]] over the letters of w.
Mat2 phi(std::string_view w, const RingElement& a, const RingElement& b);

/// [[x0, x1], [x1, x2]].
struct SymMatrix {
  std::size_t index = 0;
  RingElement x0, x1, x2;

  static SymMatrix from(std::size_t i, const Mat2& m);
  Mat2 matrix() const { return {x0, x1, x1, x2}; }
  RingElement det() const { return x0 * x2 - x1 * x1; }
};

enum class Provenance { constructed, oracle };

struct ApproxTriple {
  RingElement x0, x1, x2;
  std::size_t index = 0;
  Provenance provenance = Provenance::constructed;

  std::array<RingElement, 3> coords() const { return {x0, x1, x2}; }
  const Domain& domain() const { return x0.domain(); }
  bool is_zero() const { return x0.is_zero() && x1.is_zero() && x2.is_zero(); }
};

/// Which index parity multiplies by S = Phi(ab) (the other uses S^t).
enum class Parity { s_on_even, s_on_odd };
const char* to_string(Parity p) noexcept;

struct TripleStream {
  std::vector<SymMatrix> matrices;  ///< M_1 .. M_N (matrices[i-1] is M_i)
  Parity parity = Parity::s_on_even;
  std::size_t cross_checked = 0;    ///< indices verified against direct Phi(m_i)

  const SymMatrix& at(std::size_t i) const { return matrices.at(i - 1); }
  ApproxTriple triple(std::size_t i) const;
};

/// M_1, M_2 directly, then M_{i+1} = M_i S_i M_{i-1}; direct cross-check for i <= 10.
TripleStream triples_stream(const RingElement& a, const RingElement& b, std::size_t N);

struct Det3Result {
  RingElement value;      ///< det(x_{i-1}, x_i, x_{i+1})
  RingElement unit;       ///< value / (a - b)
  int predicted_sign = 1; ///< det(M_{i-1} M_i) det(S_i J) = (-1)^{|m_{i-1}|+|m_i|}
  int observed_sign = 1;  ///< unit as +-1; only meaningful on rings where it is +-1
  /// Empirical closed form: unit = -(-1)^i (-1)^{|m_{i-1}|+|m_i|}.
  bool closed_form_holds = true;
};

RingElement det3(const std::array<RingElement, 3>& r0, const std::array<RingElement, 3>& r1,
                 const std::array<RingElement, 3>& r2);

/// Direct 3x3 determinant and -tr(J M_i J M_{i+1} J M_{i-1}); both must agree and
/// equal a unit times (a - b). Throws identity_violated otherwise.
Det3Result det3_trace(const SymMatrix& prev, const SymMatrix& cur, const SymMatrix& next,
                      const RingElement& a, const RingElement& b);

}  // namespace fibext
