#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fibext/extremal.hpp"
#include "fibext/oracle.hpp"

namespace fibext {

const char* version() noexcept;

struct OracleConfig {
  std::optional<mpq_class> max_log_height;  ///< log of the height bound
  std::optional<mpz_class> max_abs;         ///< |x0| <= max_abs, archimedean rings only
  bool primitive_only = true;
  std::size_t grid_points = 32;
};

struct ExperimentConfig {
  Domain domain;
  RingElement a, b;
  std::size_t N = 20;
  PrecisionPolicy policy;
  std::size_t cover_samples = 100;
  std::uint64_t cover_seed = 20240611;
  std::optional<OracleConfig> oracle;
  std::string out_dir = "out";
  std::string source;  ///< canonical JSON echo of the parsed config
};

/// Parses a JSON document; rejects a == b and any pair for which rho_of fails.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses a ring element literal given as JSON text: an integer (Z), [x, y]
/// (Z[i], Z[sqrt(-5)]) or a little-endian coefficient list (F_p[u]).
RingElement parse_element(const Domain& d, const std::string& json_text);

struct LadderRow {
  MinimalPoint point;
  bool independent_of_previous = true;  ///< 2x3 rank 2 with the previous witness
};

struct AgreementRow {
  std::size_t i = 0;
  bool in_ties = false;
  bool witness_equal = false;
  std::size_t ties = 0;
};

struct OracleRun {
  bool empty = true;
  HeightBound bound;
  std::size_t candidates = 0;
  std::vector<LadderRow> ladder;
  std::vector<AgreementRow> agreement;
  ScanReport scan;
  std::size_t dependence_sets = 0;
  std::vector<Certificate> certificates;  ///< oracle-agreement, ell-floor, dependence, ladder-independence
};

struct CertCounts {
  std::size_t pass = 0, unknown = 0, fail = 0;
};

struct RunReport {
  std::string command;
  ExperimentConfig config;
  std::shared_ptr<const Construction> construction;
  std::optional<OracleRun> oracle;

  std::vector<const Certificate*> certificates() const;
  CertCounts counts() const;
  /// 0 when nothing failed (and, with strict, nothing is unknown), 1 otherwise.
  int exit_code(bool strict) const;
};

RunReport run_construct(const ExperimentConfig& cfg, unsigned threads = 1);
/// Construction for the agreement cross-check, then the oracle ladder, scan and dependence checks.
RunReport run_oracle(const ExperimentConfig& cfg, unsigned threads = 1);
/// Both pipelines.
RunReport run_verify(const ExperimentConfig& cfg, unsigned threads = 1);

/// CSV trace rows, one per index i = 1..N.
std::string trace_csv(const RunReport& r);
std::string report_json(const RunReport& r);
/// Two columns: X_log and ell(X) X^{1/gamma} (midpoint of the enclosure).
std::string ell_scan_dat(const RunReport& r);

/// Writes trace.csv, report.json and, for oracle runs, ell_scan.dat under dir.
std::vector<std::filesystem::path> export_report(const RunReport& r, const std::filesystem::path& dir);

}  // namespace fibext
