#pragma once

#include "fibext/ring.hpp"

namespace fibext {

/// 2x2 matrix over A, row-major.
struct Mat2 {
  RingElement m00, m01, m10, m11;

  static Mat2 identity(const Domain& d) {
    return {RingElement::one(d), RingElement::zero(d), RingElement::zero(d), RingElement::one(d)};
  }
  /// [[a, 1], [1, 0]]
  static Mat2 letter(const RingElement& a) {
    const Domain& d = a.domain();
    return {a, RingElement::one(d), RingElement::one(d), RingElement::zero(d)};
  }

  RingElement det() const { return m00 * m11 - m01 * m10; }
  RingElement trace() const { return m00 + m11; }
  Mat2 transpose() const { return {m00, m10, m01, m11}; }
  bool symmetric() const { return m01 == m10; }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

}  // namespace fibext
