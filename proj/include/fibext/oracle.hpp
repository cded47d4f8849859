#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

#include "fibext/certificate.hpp"
#include "fibext/contfrac.hpp"
#include "fibext/extremal.hpp"
#include "fibext/fibword.hpp"

namespace fibext {

/// L(x) as an exact degree (F_p[u]) or an enclosure of the absolute value.
struct LValue {
  std::optional<long> degree;
  Interval abs;

  LogMag log() const;
};

Certainty compare(const LValue& x, const LValue& y);

struct BestForX0 {
  RingElement x1, x2;
  LValue L;
};

/// Nearest x1 to x0 xi and x2 to x0 xi^2 at one precision; nullopt when
/// the rounding or |L| is not decided yet.
std::optional<BestForX0> best_for_x0_at(const RingElement& x0, const Scalar& xi, const Precision& prec);
/// Refines xi until decided; throws rounding_ambiguous at the cap.
BestForX0 best_for_x0(const RingElement& x0, const XiSource& xi, const PrecisionPolicy& policy);

/// |x0| <= X as an exact bound: norm for the archimedean rings, degree for F_p[u].
struct HeightBound {
  std::optional<mpz_class> norm_max;
  std::optional<long> degree_max;

  static HeightBound of(const Domain& d, const LogMag& X);
  /// |x0| <= h for the archimedean rings (h >= 0 integer).
  static HeightBound of_abs(const mpz_class& h) { return {h * h, std::nullopt}; }
  bool admits(const RingElement& x0) const;
};

struct OracleOptions {
  unsigned threads = 1;
  std::size_t max_candidates = std::size_t(1) << 21;
  PrecisionPolicy policy;
};

struct MinimalPoint {
  LogMag X;
  LValue ell;
  ApproxTriple witness;              ///< smallest tied minimizer in canonical order
  std::vector<ApproxTriple> ties;    ///< every minimizer, canonical representatives
  bool primitive = false;
  bool exhaustive = false;
};

struct OracleEntry {
  ApproxTriple x;  ///< x0 unit-normalized
  LValue L;
  mpz_class norm;  ///< archimedean height
  long degree = -1;
  bool primitive = false;
};

struct ScanRow {
  mpq_class X_log;
  LValue ell;
  Interval value;  ///< ell(X) X^{1/gamma}
};

struct ScanReport {
  std::vector<ScanRow> rows;
  std::vector<mpq_class> upper_envelope;  ///< sup of value.lo over later rows
  std::vector<mpq_class> lower_envelope;  ///< inf of value.hi over earlier rows
  mpq_class c1_estimate;                  ///< sup of value.lo over the last half of the grid
  bool floor_positive = false;
  bool degrades = false;                  ///< tail sup < 0.1 x overall sup
  std::optional<mpq_class> X0_log;        ///< first X after which the upper envelope stays <= 2 c1_estimate
};

/// Exhaustive table of best_for_x0 over every x0 up to units with |x0| <= bound,
/// plus (0, 0, 1). Entries are sorted by height, then canonical order.
/// `xi` must outlive the table.
class OracleTable {
 public:
  OracleTable(const XiSource& xi, const HeightBound& bound, OracleOptions opt = {});

  const Domain& domain() const noexcept { return dom_; }
  const std::vector<OracleEntry>& entries() const noexcept { return entries_; }
  const HeightBound& bound() const noexcept { return bound_; }

  /// Minimum of L over admissible triples with |x0| <= X; X must lie within the table bound.
  MinimalPoint ell_of(const LogMag& X, bool primitive_only) const;
  /// Heights (table groups) at which ell strictly drops.
  std::vector<MinimalPoint> minimal_point_sequence(bool primitive_only) const;
  /// Entries with |x0| <= X and L < (6X)^{-1/2}, sorted by L.
  std::vector<ApproxTriple> below_threshold(const LogMag& X, std::size_t limit) const;
  ScanReport c1_scan(const std::vector<mpq_class>& X_logs, bool primitive_only, const GoldenRatio& g) const;

 private:
  std::size_t prefix_end(const HeightBound& hb) const;
  MinimalPoint minimum(std::size_t end, const LogMag& X, bool primitive_only) const;
  Certainty refined_compare(const OracleEntry& x, const OracleEntry& y) const;

  const XiSource* xi_;
  Domain dom_;
  HeightBound bound_;
  OracleOptions opt_;
  std::vector<OracleEntry> entries_;
};

/// One-shot ell_of building the table for this X.
MinimalPoint ell_of(const LogMag& X, const XiSource& xi, bool primitive_only, OracleOptions opt = {});

/// x with unit-normalized x0 (x0 != 0), or x with unit-normalized x1 / x2 when x0 = 0.
ApproxTriple canonical_triple(const ApproxTriple& x);

struct DependenceResult {
  RingElement det;
  Certificate cert{"dependence"};
};

/// Requires |x0| <= X and L < (6X)^{-1/2} for all three points; det must vanish.
DependenceResult dependence_check(const std::array<ApproxTriple, 3>& pts, const LogMag& X,
                                  const XiSource& xi, const PrecisionPolicy& policy = {});

struct Degenerate {
  RingElement unit, m, n;
};

/// x = unit (m^2, m n, n^2) for a primitive x with x0 x2 = x1^2.
Degenerate degenerate_decompose(const ApproxTriple& x);

}  // namespace fibext
