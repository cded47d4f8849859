#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fibext/certificate.hpp"
#include "fibext/completion.hpp"
#include "fibext/contfrac.hpp"
#include "fibext/fibword.hpp"
#include "fibext/interval.hpp"

namespace fibext {

/// Enclosures of gamma = (1 + sqrt 5)/2 and 1/gamma = gamma - 1.
struct GoldenRatio {
  Interval gamma;
  Interval inv_gamma;

  static GoldenRatio make(long bits = 128);
};

/// Larger of two magnitudes; exact when both are.
LogMag max_logmag(const LogMag& x, const LogMag& y);

/// Certified |x0 xi - x1| and |x0 xi^2 - x2| at one precision.
struct ApproxError {
  Scalar e1, e2;
  LogMag log_L;  ///< log max(|e1|, |e2|)
};

ApproxError approx_error_at(const ApproxTriple& x, const Scalar& xi, const Precision& prec);

/// Refines xi until log L(x) is bracketed with width <= max_width (exact for jets).
ApproxError approx_error(const ApproxTriple& x, const XiSource& xi, const PrecisionPolicy& policy,
                         const mpq_class& max_width = mpq_class(1, 1L << 40));

/// First doubling level of `policy` that reaches the hints.
Precision hinted_precision(const PrecisionPolicy& policy, long bits_hint, long window_hint);

struct TraceRecord {
  std::size_t i = 0;
  LogMag lambda;                   ///< log X_i
  std::optional<LogMag> mu;        ///< log L(x_i); empty when the precision cap was hit
  Interval log_r;                  ///< lambda_i - gamma lambda_{i-1}, lambda_0 = 0
  std::optional<Interval> exp_est; ///< -mu_i / lambda_{i+1}
  std::optional<RingElement> det3; ///< det(x_{i-1}, x_i, x_{i+1}), i >= 2
  CertStatus cert = CertStatus::pass;
};

struct ThetaAbs {
  Scalar theta;
  LogMag log_abs;
};

/// |xi^2 + (a+b) xi + (ab+1)|, refined until zero is excluded.
ThetaAbs theta_abs(const RingElement& a, const RingElement& b, const XiSource& xi,
                   const PrecisionPolicy& policy);

struct ConstantsReport {
  mpq_class rho, c0;
  mpq_class xi_abs_hi;  ///< |p_1/q_1| + c0 |q_1|^-2
  mpq_class c3;
  LogMag log_theta;
  Interval theta_abs;
  mpq_class c4, c5;
  int widen_steps = 0;
  mpq_class c2;           ///< c3 c4^{1/gamma} / c5, rounded down
  mpq_class c2_chain;     ///< c3 c5 / c4^{1/gamma}, rounded down
  bool has_sandwich = false;
  std::size_t stated_c2_fail = 0;     ///< cover points violating L <= c2 X^{-1/gamma}
  std::size_t stated_c2_unknown = 0;
  std::size_t stated_c2_probes = 0;      ///< X just below X_{i+1}, 2 <= i <= N-2
  std::size_t stated_c2_probe_fail = 0;
};

/// (1 + |xi|) c0 with |xi| bounded from the first convergent.
void fill_c3(ConstantsReport& k, const PartialQuotients& pq, const RingElement& a1);

/// mu_i <= log c3 - lambda_i for every record.
Certificate verify_c3_bound(const std::vector<TraceRecord>& records, const ConstantsReport& k);

struct RatioRow {
  std::size_t i = 0;
  Interval deviation;  ///< lambda_i - lambda_{i-1} - lambda_{i-2} - log|theta|
};

struct RatioReport {
  std::vector<RatioRow> rows;
  mpq_class max_abs_deviation;
  /// First i after which |deviation| <= tol for every later row.
  std::optional<std::size_t> band_entry(const mpq_class& tol) const;
};

/// records[k] must hold index k+1; lambda_0 = 0.
RatioReport ratio_limit_check(const std::vector<TraceRecord>& records, const LogMag& log_theta,
                              std::size_t i_min);

struct Sandwich {
  mpq_class c4, c5;
  int widen_steps = 0;
  Certificate consequence{"sandwich-consequence"};  ///< c4^g/c5 <= r_i <= c5^g/c4, 2 <= i <= N
};

Sandwich sandwich_estimate(const std::vector<TraceRecord>& records, const GoldenRatio& g);

/// c3 c4^{1/gamma} / c5 rounded down.
mpq_class c2_of(const mpq_class& c3, const mpq_class& c4, const mpq_class& c5, const GoldenRatio& g);
/// c3 c5 / c4^{1/gamma} rounded down: the constant for which
/// X_{i+1} <= (c5^g/c4) X_i^g yields c3 X_i^-1 <= c X_{i+1}^{-1/g}.
mpq_class c2_chain_of(const mpq_class& c3, const mpq_class& c4, const mpq_class& c5, const GoldenRatio& g);

struct CoverResult {
  std::size_t i = 0;
  ApproxTriple x;
  CertStatus height = CertStatus::unknown;  ///< |x0| <= X
  CertStatus bound = CertStatus::unknown;   ///< L(x) <= c2 X^{-1/gamma}
  CertStatus status() const { return worst(height, bound); }
};

/// Largest index i with X_i <= X (certified); X must lie in [X_1, X_N].
std::size_t cover_index(const LogMag& X, const std::vector<TraceRecord>& records);

struct ExponentRow {
  std::size_t i = 0;
  Interval estimate;
};
std::vector<ExponentRow> exponent_profile(const std::vector<TraceRecord>& records);

struct ConstructOptions {
  std::size_t N = 20;
  PrecisionPolicy policy;
  unsigned threads = 1;
  std::size_t cover_samples = 100;
  std::uint64_t cover_seed = 20240611;
};

/// The full construction for (a, b, N): triples, xi, trace records, constants and certificates.
class Construction {
 public:
  Construction(const RingElement& a, const RingElement& b, ConstructOptions opt);
  ~Construction();

  const RingElement& a() const noexcept { return a_; }
  const RingElement& b() const noexcept { return b_; }
  const Domain& domain() const noexcept { return a_.domain(); }
  const ConstructOptions& options() const noexcept { return opt_; }
  std::size_t N() const noexcept { return opt_.N; }
  const GoldenRatio& golden() const noexcept { return g_; }

  const XiSource& xi() const noexcept { return *xi_; }
  /// M_1 .. M_{N+1}.
  const TripleStream& triples() const noexcept { return ts_; }
  const std::vector<TraceRecord>& records() const noexcept { return records_; }
  /// lambda_{N+1}.
  const LogMag& lambda_next() const noexcept { return lambda_next_; }
  const ConstantsReport& constants() const noexcept { return k_; }
  const RatioReport& ratios() const noexcept { return ratios_; }
  const Sandwich& sandwich() const noexcept { return sandwich_; }
  const std::vector<Det3Result>& det3() const noexcept { return det3_; }
  const std::vector<Certificate>& certificates() const noexcept { return certs_; }
  const std::vector<LogMag>& cover_points() const noexcept { return cover_points_; }

  /// Cover step with the given constant; refines mu_i when undecided.
  CoverResult cover(const LogMag& X, const mpq_class& c2) const;
  /// `count` log-uniform X in [X_2, X_{N-1}] from a fixed seed.
  std::vector<LogMag> cover_sample(std::size_t count, std::uint64_t seed) const;
  Certificate cover_certificate(const std::vector<LogMag>& xs, const mpq_class& c2,
                                const char* name) const;

  std::size_t count(CertStatus s) const;

 private:
  void build();

  RingElement a_, b_;
  ConstructOptions opt_;
  GoldenRatio g_;
  std::unique_ptr<XiSource> xi_;
  TripleStream ts_;
  std::vector<TraceRecord> records_;
  LogMag lambda_next_;
  ConstantsReport k_;
  RatioReport ratios_;
  Sandwich sandwich_;
  std::vector<Det3Result> det3_;
  std::vector<Certificate> certs_;
  std::vector<LogMag> cover_points_;
};

}  // namespace fibext
