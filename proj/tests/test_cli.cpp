#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fibext/error.hpp"
#include "fibext/experiment.hpp"

using namespace fibext;

namespace {

const char* kF2 = R"({"domain": {"kind": "poly-over-prime-field", "p": 2}, "a": [0, 1], "b": [1, 1], "N": 20, "precision": {"cap_bits": 1048576, "cap_window": 262144},
  "cover": {"samples": 20}, "oracle": {"max_log_height": 6, "grid_points": 6}})";

const char* kZi = R"({"domain": "gaussian-integers", "a": [2, 1], "b": [2, -1], "N": 15, "cover": {"samples": 20}})";

Errc code_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::io_error;
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(kF2);
  CHECK(c.domain.is_poly());
  CHECK(c.N == 20);
  REQUIRE(c.oracle);
  CHECK(*c.oracle->max_log_height == 6);
  CHECK(c.oracle->primitive_only);

  const ExperimentConfig z = parse_config(R"({"domain": "rational-integers", "a": "3", "b": 4,
    "oracle": {"max_log_height": "9.9", "primitive_only": false}, "precision": {"cap_bits": 4096}})");
  CHECK(*z.oracle->max_log_height == mpq_class(99, 10));
  CHECK(z.policy.cap_bits == 4096);
  CHECK(z.a == RingElement::integer(3));
  CHECK(*parse_config(R"({"domain": "rational-integers", "a": 3, "b": 4, "oracle": {"max_log_height": 1.5e1}})")
              .oracle->max_log_height == 15);

  CHECK(code_of(R"({"domain": "rational-integers", "a": 3, "b": 3})") == Errc::invalid_argument);
  CHECK(code_of(R"({"domain": "rational-integers", "a": 2, "b": 3})") == Errc::rho_too_small);
  CHECK(code_of(R"({"domain": "octonions", "a": 3, "b": 4})") == Errc::parse_error);
  CHECK(code_of(R"({"domain": "rational-integers", "a": 3})") == Errc::parse_error);
  CHECK(code_of(R"({"domain": "gaussian-integers", "a": [2], "b": [2, 1]})") == Errc::parse_error);
  CHECK(code_of("not json") == Errc::parse_error);
  CHECK(code_of(R"({"domain": "rational-integers", "a": 3, "b": 4, "oracle": {}})") == Errc::parse_error);
}

TEST_CASE("element literals") {
  CHECK(parse_element(Domain::polynomials(3), "[-1, 4]") == RingElement::polynomial(FpPoly(3, {2, 1})));
  CHECK(parse_element(Domain::sqrt_minus5(), "[2, -1]") ==
        RingElement::quadratic(Domain::sqrt_minus5(), 2, -1));
  CHECK(parse_element(Domain::integers(), "\"123456789012345678901234567890\"").x() ==
        mpz_class("123456789012345678901234567890"));
}

TEST_CASE("construct report over F_2[u]") {
  const RunReport r = run_construct(parse_config(kF2));
  CHECK(r.exit_code(true) == 0);
  const auto t = rows(trace_csv(r));
  REQUIRE(t.size() == 21);
  CHECK(t[0].size() == 11);
  CHECK(t[0][0] == "i");
  CHECK(t[0][10] == "cert");
  for (std::size_t i = 1; i <= 20; ++i) {
    CHECK(t[i].size() == 11);
    CHECK(t[i][1] == std::to_string(fib_length(i + 2) - 2));
    CHECK(t[i][1] == t[i][2]);
    CHECK(t[i][10] == "pass");
    if (i >= 2) CHECK(t[i][9] == "1");
  }
}

TEST_CASE("det3 column is |2i|^2 over Z[i]") {
  const RunReport r = run_construct(parse_config(kZi));
  const auto t = rows(trace_csv(r));
  REQUIRE(t.size() == 16);
  CHECK(t[1][9].empty());
  for (std::size_t i = 2; i <= 15; ++i) CHECK(t[i][9] == "4");
}

TEST_CASE("oracle run and exports") {
  const ExperimentConfig cfg = parse_config(kF2);
  const RunReport a = run_oracle(cfg, 1);
  const RunReport b = run_oracle(cfg, 3);
  CHECK(a.exit_code(true) == 0);
  CHECK(trace_csv(a) == trace_csv(b));
  CHECK(report_json(a) == report_json(b));
  CHECK(ell_scan_dat(a) == ell_scan_dat(b));
  REQUIRE(a.oracle);
  CHECK(a.oracle->ladder.size() == 4);
  CHECK(a.oracle->scan.rows.size() == 6);

  const auto dir = std::filesystem::temp_directory_path() / "fibext_test_cli";
  std::filesystem::remove_all(dir);
  const auto files = export_report(a, dir);
  REQUIRE(files.size() == 3);
  CHECK(slurp(files[0]) == trace_csv(a));
  CHECK(slurp(files[2]).rfind("# X_log ell_times_X_gamma\n", 0) == 0);
  CHECK(slurp(files[1]).find('\r') == std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("oracle edge cases") {
  const RunReport e =
      run_oracle(parse_config(R"({"domain": "rational-integers", "a": 3, "b": 4, "oracle": {"max_log_height": -1}})"));
  CHECK(e.exit_code(true) == 0);
  CHECK(e.oracle->empty);
  CHECK(rows(trace_csv(e)).size() == 1);

  const ExperimentConfig s5 = parse_config(
      R"({"domain": "z-sqrt-minus5", "a": [3, 0], "b": [2, 1], "N": 8, "oracle": {"max_abs": 10, "primitive_only": true}})");
  try {
    run_oracle(s5);
    FAIL("expected rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::unsupported_domain);
  }
  CHECK_THROWS_AS(run_oracle(parse_config(kZi)), Error);
}

TEST_CASE("exit codes") {
  RunReport r;
  OracleRun o;
  Certificate c("synthetic");
  c.add(0, CertStatus::pass);
  c.add(1, CertStatus::unknown);
  o.certificates.push_back(c);
  r.oracle = o;
  CHECK(r.exit_code(false) == 0);
  CHECK(r.exit_code(true) == 1);
  r.oracle->certificates.front().add(2, CertStatus::fail);
  CHECK(r.exit_code(false) == 1);
  CHECK(r.counts().fail == 1);
}
