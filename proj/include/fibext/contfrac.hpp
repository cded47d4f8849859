#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "fibext/certificate.hpp"
#include "fibext/completion.hpp"
#include "fibext/mat2.hpp"
#include "fibext/ring.hpp"

namespace fibext {

/// Largest certified rational rho with min(|a|, |b|) >= 1 + rho.
/// Throws rho_too_small unless rho > 1, invalid_argument when a == b.
mpq_class rho_of(const RingElement& a, const RingElement& b);

/// Sequence (a_j)_{j>=1} in A with |a_j| >= 1 + rho, rho > 1.
class PartialQuotients {
 public:
  using Generator = std::function<RingElement(std::size_t)>;

  PartialQuotients(Domain d, Generator term, mpq_class rho);

  /// a_j = a or b following the Fibonacci word abaab...; rho = rho_of(a, b).
  static PartialQuotients fibonacci(const RingElement& a, const RingElement& b);
  /// a_j = a for all j.
  static PartialQuotients constant(const RingElement& a);

  const Domain& domain() const noexcept { return domain_; }
  const mpq_class& rho() const noexcept { return rho_; }
  /// rho / (rho^2 - 1); exact since rho is rational.
  mpq_class c0() const { return rho_ / (rho_ * rho_ - 1); }
  /// a_j, j >= 1, checked against |a_j| >= 1 + rho before it is returned.
  RingElement term(std::size_t j) const;

 private:
  Domain domain_;
  Generator gen_;
  mpq_class rho_;
};

/// [[q_j, q_{j-1}], [p_j, p_{j-1}]] = prod_{k<=j} [[a_k, 1], [1, 0]].
struct Convergent {
  std::size_t j = 0;
  RingElement p, q, p_prev, q_prev;

  Mat2 matrix() const { return {q, q_prev, p, p_prev}; }
};

/// Convergents j = 0..J by left-to-right right-multiplication.
std::vector<Convergent> convergent_stream(const PartialQuotients& pq, std::size_t J);
/// Convergent J by a balanced product tree.
Convergent convergent_at(const PartialQuotients& pq, std::size_t J);

/// |q_{j+1}| >= rho |q_j| for every consecutive pair of the stream.
/// Entry details carry the certified ratio |q_{j+1}|/|q_j| lower bound.
Certificate growth_check(const std::vector<Convergent>& stream, const mpq_class& rho);

/// p_{j+1} q_j - p_j q_{j+1}; throws identity_violated unless it is a unit.
RingElement gap_identity_check(const Convergent& cj, const Convergent& cj1);

/// Certified evaluation of xi = [0, a_1, a_2, ...] with caching of the
/// convergent stream. Thread-safe; results depend only on the request.
class XiSource {
 public:
  explicit XiSource(PartialQuotients pq);
  ~XiSource();
  XiSource(const XiSource&) = delete;
  XiSource& operator=(const XiSource&) = delete;

  const PartialQuotients& quotients() const noexcept { return pq_; }
  const Domain& domain() const noexcept { return pq_.domain(); }

  /// xi with error <= e^{target_log}, as p_J/q_J for the first J whose
  /// bound c0 |q_J|^{-2} (plus midpoint rounding for balls) meets the target.
  Scalar eval(const mpq_class& target_log) const;
  /// Index J that eval(target_log) uses.
  std::size_t index_for(const mpq_class& target_log) const;
  /// Error 2^-bits for balls, e^-window for jets.
  Scalar at(const Precision& prec) const;

 private:
  struct Cache;
  PartialQuotients pq_;
  std::unique_ptr<Cache> cache_;
};

/// eval_xi with an absolute error target eps > 0.
Scalar eval_xi(const XiSource& xi, const mpq_class& eps);

}  // namespace fibext
