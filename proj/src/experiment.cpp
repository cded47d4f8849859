#include "fibext/experiment.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fibext/error.hpp"

#ifndef FIBEXT_VERSION
#define FIBEXT_VERSION "0.0.0"
#endif

namespace fibext {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* version() noexcept { return FIBEXT_VERSION; }

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::parse_error, what); }

mpz_class to_mpz(const json& v, const char* what) {
  if (v.is_number_integer()) return mpz_class(v.dump());
  if (v.is_string()) {
    mpz_class z;
    if (z.set_str(v.get<std::string>(), 10) != 0) bad(std::string(what) + ": not an integer");
    return z;
  }
  bad(std::string(what) + ": expected an integer");
}

// "9.9", "1e-3", "22/7", "-4"
mpq_class parse_rational(const std::string& s, const char* what) {
  if (s.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) bad(std::string(what) + ": bad rational '" + s + "'");
    q.canonicalize();
    return q;
  }
  std::string mant = s;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    try {
      exp10 = std::stol(s.substr(e + 1));
    } catch (...) {
      bad(std::string(what) + ": bad exponent in '" + s + "'");
    }
  }
  std::string digits;
  long frac = 0;
  bool dot = false;
  for (std::size_t k = 0; k < mant.size(); ++k) {
    const char c = mant[k];
    if (c == '.') {
      if (dot) bad(std::string(what) + ": bad number '" + s + "'");
      dot = true;
    } else if ((c == '-' || c == '+') && k == 0) {
      if (c == '-') digits += c;
    } else if (c >= '0' && c <= '9') {
      digits += c;
      if (dot) ++frac;
    } else {
      bad(std::string(what) + ": bad number '" + s + "'");
    }
  }
  mpz_class num;
  if (digits.empty() || digits == "-" || num.set_str(digits, 10) != 0) bad(std::string(what) + ": bad number '" + s + "'");
  const long e = exp10 - frac;
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  mpq_class q = e < 0 ? mpq_class(num, p10) : mpq_class(num * p10);
  q.canonicalize();
  return q;
}

mpq_class to_mpq(const json& v, const char* what) {
  if (v.is_number()) return parse_rational(v.dump(), what);
  if (v.is_string()) return parse_rational(v.get<std::string>(), what);
  bad(std::string(what) + ": expected a number");
}

RingElement element_from_json(const Domain& d, const json& v, const char* what) {
  if (d.is_poly()) {
    if (!v.is_array()) bad(std::string(what) + ": expected a little-endian coefficient list");
    const mpz_class p(d.p());
    std::vector<FpPoly::Coeff> c;
    for (const auto& x : v) {
      mpz_class r = to_mpz(x, what) % p;
      if (r < 0) r += p;
      c.push_back(static_cast<FpPoly::Coeff>(r.get_ui()));
    }
    return RingElement::polynomial(FpPoly(d.p(), c));
  }
  if (d.is_quadratic()) {
    if (!v.is_array() || v.size() != 2) bad(std::string(what) + ": expected [x, y]");
    return RingElement::quadratic(d, to_mpz(v[0], what), to_mpz(v[1], what));
  }
  return RingElement::integer(to_mpz(v, what));
}

Domain domain_from_json(const json& v) {
  if (v.is_string()) return Domain::from_name(v.get<std::string>());
  if (v.is_object() && v.contains("kind")) {
    const std::uint32_t p = v.contains("p") ? v.at("p").get<std::uint32_t>() : 0;
    return Domain::from_name(v.at("kind").get<std::string>(), p);
  }
  bad("domain: expected a name or {\"kind\", \"p\"}");
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(std::string(key) + ": " + e.what());
  }
}

// q rounded down to 9 decimals
mpq_class trunc9(const mpq_class& q) {
  const mpz_class scale(1000000000);
  mpz_class n = q.get_num() * scale, r;
  mpz_fdiv_q(r.get_mpz_t(), n.get_mpz_t(), q.get_den_mpz_t());
  return mpq_class(r, scale);
}

std::string lo17(const mpq_class& q) { return certified::format17(certified::round_down(q)); }
std::string hi17(const mpq_class& q) { return certified::format17(certified::round_up(q)); }
std::string mid17(const mpq_class& q) { return certified::format17(q.get_d()); }
std::string exact(const mpq_class& q) { return q.get_str(); }

std::string det3_cell(const RingElement& d) {
  if (d.domain().archimedean()) return d.norm().get_str();
  return d.to_string();
}

ojson interval_json(const Interval& iv) { return ojson::array({lo17(iv.lo()), hi17(iv.hi())}); }

ojson logmag_json(const LogMag& l) {
  if (l.is_neg_inf()) return "-inf";
  if (l.exact_degree()) return ojson::array({std::to_string(*l.exact_degree()), std::to_string(*l.exact_degree())});
  if (l.lo_is_neg_inf()) return ojson::array({"-inf", hi17(l.hi())});
  return ojson::array({lo17(l.lo()), hi17(l.hi())});
}

ojson lvalue_json(const LValue& v) {
  ojson o;
  if (v.degree) {
    o["log"] = ojson::array({std::to_string(*v.degree), std::to_string(*v.degree)});
  } else {
    o["abs"] = interval_json(v.abs);
    o["log"] = logmag_json(v.log());
  }
  return o;
}

ojson triple_json(const ApproxTriple& x) {
  return ojson::array({x.x0.to_string(), x.x1.to_string(), x.x2.to_string()});
}

ojson cert_json(const Certificate& c) {
  ojson o;
  o["name"] = c.name();
  o["status"] = to_string(c.status());
  o["pass"] = c.count(CertStatus::pass);
  o["unknown"] = c.count(CertStatus::unknown);
  o["fail"] = c.count(CertStatus::fail);
  ojson es = ojson::array();
  for (const auto& e : c.entries()) es.push_back(ojson{{"index", e.index}, {"status", to_string(e.status)}, {"detail", e.detail}});
  o["entries"] = std::move(es);
  return o;
}

bool independent(const ApproxTriple& x, const ApproxTriple& y) {
  const auto a = x.coords(), b = y.coords();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (!(a[i] * b[j] - a[j] * b[i]).is_zero()) return true;
  return false;
}

LogMag height_of(const RingElement& x0) {
  if (x0.domain().is_poly()) return LogMag::degree(x0.degree());
  return LogMag::of_norm(x0.norm());
}

LogMag bound_logmag(const Domain& d, const HeightBound& hb) {
  if (d.is_poly()) return *hb.degree_max < 0 ? LogMag::neg_infinity() : LogMag::degree(*hb.degree_max);
  return *hb.norm_max == 0 ? LogMag::neg_infinity() : LogMag::of_norm(*hb.norm_max);
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::io_error, "cannot open " + p.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(Errc::io_error, "cannot write " + p.string());
}

ConstructOptions construct_options(const ExperimentConfig& cfg, unsigned threads) {
  ConstructOptions o;
  o.N = cfg.N;
  o.policy = cfg.policy;
  o.threads = threads;
  o.cover_samples = cfg.cover_samples;
  o.cover_seed = cfg.cover_seed;
  return o;
}

OracleRun oracle_pipeline(const ExperimentConfig& cfg, const Construction& c, unsigned threads) {
  const OracleConfig& oc = *cfg.oracle;
  const Domain& d = cfg.domain;
  OracleRun run;
  if (oc.primitive_only && !d.ufd())
    throw Error(Errc::unsupported_domain,
                "primitive_only needs a UFD; " + d.label() + " has no gcd (set oracle.primitive_only to false)");
  if (oc.max_abs) {
    if (d.is_poly()) throw Error(Errc::invalid_argument, "oracle.max_abs is for the archimedean rings");
    run.bound = HeightBound::of_abs(*oc.max_abs);
  } else {
    run.bound = HeightBound::of(d, LogMag::point(*oc.max_log_height));
  }
  OracleOptions opt;
  opt.threads = threads;
  opt.policy = cfg.policy;
  const OracleTable t(c.xi(), run.bound, opt);
  run.empty = false;
  run.candidates = t.entries().size();
  const bool prim = oc.primitive_only;

  Certificate indep("ladder-independence");
  for (const auto& m : t.minimal_point_sequence(prim)) {
    LadderRow row{m, true};
    if (!run.ladder.empty()) {
      row.independent_of_previous = independent(run.ladder.back().point.witness, m.witness);
      indep.add(run.ladder.size(), row.independent_of_previous ? CertStatus::pass : CertStatus::fail);
    }
    run.ladder.push_back(std::move(row));
  }

  Certificate agree("oracle-agreement");
  for (std::size_t i = 1; i <= c.triples().matrices.size(); ++i) {
    const ApproxTriple x = c.triples().triple(i);
    if (!run.bound.admits(x.x0)) break;
    const MinimalPoint m = t.ell_of(height_of(x.x0), prim);
    const ApproxTriple cx = canonical_triple(x);
    AgreementRow r{i, false, false, m.ties.size()};
    for (const auto& y : m.ties) r.in_ties |= (y.x0 == cx.x0 && y.x1 == cx.x1 && y.x2 == cx.x2);
    r.witness_equal = m.witness.x0 == cx.x0 && m.witness.x1 == cx.x1 && m.witness.x2 == cx.x2;
    agree.add(i, r.in_ties ? CertStatus::pass : CertStatus::fail,
              std::to_string(m.ties.size()) + (m.ties.size() == 1 ? " minimizer" : " tied minimizers") +
                  (r.witness_equal ? ", witness equal" : ""));
    run.agreement.push_back(r);
  }

  const LogMag top = bound_logmag(d, run.bound);
  Certificate floor("ell-floor");
  if (!top.is_neg_inf() && oc.grid_points > 0) {
    // grid from X = e^1 (or e^0 below that) up to the enumerated height
    const mpq_class hi = d.is_poly() ? top.lo() : trunc9(top.lo());
    const mpq_class lo = hi >= 1 ? mpq_class(1) : mpq_class(0);
    std::vector<mpq_class> grid;
    const std::size_t n = std::max<std::size_t>(oc.grid_points, 2);
    for (std::size_t k = 0; k < n; ++k) grid.push_back(lo + (hi - lo) * mpq_class(k, n - 1));
    run.scan = t.c1_scan(grid, prim, c.golden());
    for (std::size_t k = 0; k < run.scan.rows.size(); ++k)
      floor.add(k, run.scan.rows[k].value.lo() > 0 ? CertStatus::pass : CertStatus::fail);
    floor.add(run.scan.rows.size(), run.scan.floor_positive ? CertStatus::pass : CertStatus::fail,
              "c1 estimate " + lo17(run.scan.c1_estimate));
  }

  Certificate dep("dependence");
  std::vector<LogMag> heights;
  for (const auto& r : run.ladder) heights.push_back(r.point.X);
  if (!top.is_neg_inf()) heights.push_back(top);
  std::size_t idx = 0;
  for (const LogMag& X : heights) {
    const auto pts = t.below_threshold(X, 8);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        for (std::size_t k = j + 1; k < pts.size(); ++k) {
          ++run.dependence_sets;
          try {
            dependence_check({pts[i], pts[j], pts[k]}, X, c.xi(), cfg.policy);
            dep.add(idx++, CertStatus::pass);
          } catch (const Error& e) {
            const bool fail = e.code() == Errc::determinant_nonzero;
            dep.add(idx++, fail ? CertStatus::fail : CertStatus::unknown, e.what());
          }
        }
  }
  run.certificates = {std::move(agree), std::move(floor), std::move(dep), std::move(indep)};
  return run;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(std::string("config: ") + e.what());
  }
  if (!j.is_object()) bad("config: expected a JSON object");
  for (const char* key : {"domain", "a", "b"})
    if (!j.contains(key)) bad(std::string("config: missing '") + key + "'");
  ExperimentConfig c;
  c.domain = domain_from_json(j.at("domain"));
  c.a = element_from_json(c.domain, j.at("a"), "a");
  c.b = element_from_json(c.domain, j.at("b"), "b");
  c.N = get_or<std::size_t>(j, "N", 20);
  if (c.N < 1) bad("N must be at least 1");
  if (j.contains("precision")) {
    const json& p = j.at("precision");
    c.policy.start_bits = get_or<long>(p, "start_bits", c.policy.start_bits);
    c.policy.cap_bits = get_or<long>(p, "cap_bits", c.policy.cap_bits);
    c.policy.start_window = get_or<long>(p, "start_window", c.policy.start_window);
    c.policy.cap_window = get_or<long>(p, "cap_window", c.policy.cap_window);
    if (c.policy.start_bits < 64 || c.policy.cap_bits < c.policy.start_bits || c.policy.start_window < 8 ||
        c.policy.cap_window < c.policy.start_window)
      bad("precision: need 64 <= start_bits <= cap_bits and 8 <= start_window <= cap_window");
  }
  if (j.contains("cover")) {
    c.cover_samples = get_or<std::size_t>(j.at("cover"), "samples", c.cover_samples);
    c.cover_seed = get_or<std::uint64_t>(j.at("cover"), "seed", c.cover_seed);
  }
  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    OracleConfig oc;
    if (o.contains("max_log_height")) oc.max_log_height = to_mpq(o.at("max_log_height"), "oracle.max_log_height");
    if (o.contains("max_abs")) oc.max_abs = to_mpz(o.at("max_abs"), "oracle.max_abs");
    if (!oc.max_log_height && !oc.max_abs) bad("oracle: need max_log_height or max_abs");
    oc.primitive_only = get_or<bool>(o, "primitive_only", c.domain.ufd());
    oc.grid_points = get_or<std::size_t>(o, "grid_points", oc.grid_points);
    c.oracle = oc;
  }
  if (j.contains("output")) c.out_dir = get_or<std::string>(j.at("output"), "dir", c.out_dir);
  if (c.a == c.b) throw Error(Errc::invalid_argument, "a == b (" + c.a.to_string() + ")");
  rho_of(c.a, c.b);
  c.source = j.dump();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

RingElement parse_element(const Domain& d, const std::string& json_text) {
  json v;
  try {
    v = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(std::string("element: ") + e.what());
  }
  return element_from_json(d, v, "element");
}

std::vector<const Certificate*> RunReport::certificates() const {
  std::vector<const Certificate*> out;
  if (construction)
    for (const auto& c : construction->certificates()) out.push_back(&c);
  if (oracle)
    for (const auto& c : oracle->certificates) out.push_back(&c);
  return out;
}

CertCounts RunReport::counts() const {
  CertCounts n;
  for (const Certificate* c : certificates()) {
    n.pass += c->count(CertStatus::pass);
    n.unknown += c->count(CertStatus::unknown);
    n.fail += c->count(CertStatus::fail);
  }
  return n;
}

int RunReport::exit_code(bool strict) const {
  const CertCounts n = counts();
  return n.fail > 0 || (strict && n.unknown > 0) ? 1 : 0;
}

RunReport run_construct(const ExperimentConfig& cfg, unsigned threads) {
  RunReport r;
  r.command = "construct";
  r.config = cfg;
  r.construction = std::make_shared<const Construction>(cfg.a, cfg.b, construct_options(cfg, threads));
  return r;
}

RunReport run_oracle(const ExperimentConfig& cfg, unsigned threads) {
  if (!cfg.oracle) throw Error(Errc::invalid_argument, "config has no oracle section");
  RunReport r;
  r.command = "oracle";
  r.config = cfg;
  const OracleConfig& oc = *cfg.oracle;
  const bool empty = oc.max_abs ? *oc.max_abs < 1 : *oc.max_log_height < 0;
  if (empty) {
    r.oracle = OracleRun{};
    return r;
  }
  r.construction = std::make_shared<const Construction>(cfg.a, cfg.b, construct_options(cfg, threads));
  r.oracle = oracle_pipeline(cfg, *r.construction, threads);
  return r;
}

RunReport run_verify(const ExperimentConfig& cfg, unsigned threads) {
  RunReport r = cfg.oracle ? run_oracle(cfg, threads) : run_construct(cfg, threads);
  if (!r.construction) r.construction = std::make_shared<const Construction>(cfg.a, cfg.b, construct_options(cfg, threads));
  r.command = "verify";
  return r;
}

std::string trace_csv(const RunReport& r) {
  std::string out = "i,lambda_lo,lambda_hi,mu_lo,mu_hi,log_r_lo,log_r_hi,exp_est_lo,exp_est_hi,det3,cert\n";
  if (!r.construction) return out;
  for (const auto& t : r.construction->records()) {
    std::vector<std::string> cells{std::to_string(t.i)};
    const ojson lam = logmag_json(t.lambda);
    cells.push_back(lam[0].get<std::string>());
    cells.push_back(lam[1].get<std::string>());
    if (t.mu) {
      const ojson mu = logmag_json(*t.mu);
      cells.push_back(mu.is_array() ? mu[0].get<std::string>() : "-inf");
      cells.push_back(mu.is_array() ? mu[1].get<std::string>() : "-inf");
    } else {
      cells.insert(cells.end(), {"", ""});
    }
    cells.push_back(lo17(t.log_r.lo()));
    cells.push_back(hi17(t.log_r.hi()));
    if (t.exp_est) {
      cells.push_back(lo17(t.exp_est->lo()));
      cells.push_back(hi17(t.exp_est->hi()));
    } else {
      cells.insert(cells.end(), {"", ""});
    }
    cells.push_back(t.det3 ? det3_cell(*t.det3) : "");
    cells.push_back(to_string(t.cert));
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  }
  return out;
}

std::string report_json(const RunReport& r) {
  ojson o;
  o["tool"] = "fibext";
  o["version"] = version();
  o["command"] = r.command;
  o["config"] = ojson::parse(r.config.source.empty() ? "{}" : r.config.source);
  o["domain"] = r.config.domain.label();
  o["a"] = r.config.a.to_string();
  o["b"] = r.config.b.to_string();
  if (r.construction) {
    const Construction& c = *r.construction;
    const ConstantsReport& k = c.constants();
    ojson kc;
    kc["rho"] = exact(k.rho);
    kc["c0"] = exact(k.c0);
    kc["xi_abs_hi"] = exact(k.xi_abs_hi);
    kc["c3"] = exact(k.c3);
    kc["c3_decimal"] = hi17(k.c3);
    kc["log_theta"] = logmag_json(k.log_theta);
    kc["theta_abs"] = interval_json(k.theta_abs);
    kc["has_sandwich"] = k.has_sandwich;
    if (k.has_sandwich) {
      kc["c4"] = exact(k.c4);
      kc["c4_decimal"] = lo17(k.c4);
      kc["c5"] = exact(k.c5);
      kc["c5_decimal"] = hi17(k.c5);
      kc["widen_steps"] = k.widen_steps;
      kc["c2"] = exact(k.c2);
      kc["c2_decimal"] = lo17(k.c2);
      kc["c2_chain"] = exact(k.c2_chain);
      kc["c2_chain_decimal"] = lo17(k.c2_chain);
    }
    o["constants"] = std::move(kc);
    o["stated_c2_diagnostics"] = ojson{{"samples", c.cover_points().size()},
                                       {"sample_fail", k.stated_c2_fail},
                                       {"sample_unknown", k.stated_c2_unknown},
                                       {"probes", k.stated_c2_probes},
                                       {"probe_fail", k.stated_c2_probe_fail}};
    const RatioReport& rr = c.ratios();
    const auto band = rr.band_entry(certified::log(mpq_class(101, 100), 128).lo());
    o["ratio_limit"] = ojson{{"max_abs_deviation", hi17(rr.max_abs_deviation)},
                             {"band_entry_1pct", band ? ojson(*band) : ojson(nullptr)}};
    o["parity"] = to_string(c.triples().parity);
    ojson recs = ojson::array();
    for (const auto& t : c.records()) {
      ojson x;
      x["i"] = t.i;
      x["lambda"] = logmag_json(t.lambda);
      x["mu"] = t.mu ? logmag_json(*t.mu) : ojson(nullptr);
      x["log_r"] = interval_json(t.log_r);
      x["exp_est"] = t.exp_est ? interval_json(*t.exp_est) : ojson(nullptr);
      x["det3"] = t.det3 ? ojson(t.det3->to_string()) : ojson(nullptr);
      x["triple"] = triple_json(c.triples().triple(t.i));
      x["cert"] = to_string(t.cert);
      recs.push_back(std::move(x));
    }
    o["records"] = std::move(recs);
  }
  if (r.oracle) {
    const OracleRun& orun = *r.oracle;
    ojson oj;
    oj["empty"] = orun.empty;
    if (!orun.empty) {
      oj["candidates"] = orun.candidates;
      if (orun.bound.degree_max) oj["max_degree"] = *orun.bound.degree_max;
      if (orun.bound.norm_max) oj["max_norm"] = orun.bound.norm_max->get_str();
      ojson lad = ojson::array();
      for (const auto& l : orun.ladder) {
        ojson x;
        x["X"] = logmag_json(l.point.X);
        x["ell"] = lvalue_json(l.point.ell);
        x["witness"] = triple_json(l.point.witness);
        x["ties"] = l.point.ties.size();
        x["primitive"] = l.point.primitive;
        x["exhaustive"] = l.point.exhaustive;
        x["independent_of_previous"] = l.independent_of_previous;
        lad.push_back(std::move(x));
      }
      oj["ladder"] = std::move(lad);
      ojson ag = ojson::array();
      for (const auto& a : orun.agreement)
        ag.push_back(ojson{{"i", a.i}, {"in_ties", a.in_ties}, {"witness_equal", a.witness_equal}, {"ties", a.ties}});
      oj["agreement"] = std::move(ag);
      ojson sc;
      ojson rows = ojson::array();
      for (std::size_t k = 0; k < orun.scan.rows.size(); ++k) {
        const ScanRow& row = orun.scan.rows[k];
        rows.push_back(ojson{{"X_log", exact(row.X_log)},
                             {"value", interval_json(row.value)},
                             {"upper_envelope", lo17(orun.scan.upper_envelope[k])},
                             {"lower_envelope", hi17(orun.scan.lower_envelope[k])}});
      }
      sc["rows"] = std::move(rows);
      if (!orun.scan.rows.empty()) {
        sc["c1_estimate"] = lo17(orun.scan.c1_estimate);
        sc["floor_positive"] = orun.scan.floor_positive;
        sc["degrades"] = orun.scan.degrades;
        sc["X0_log"] = orun.scan.X0_log ? ojson(exact(*orun.scan.X0_log)) : ojson(nullptr);
      }
      oj["scan"] = std::move(sc);
      oj["dependence_sets"] = orun.dependence_sets;
    }
    o["oracle"] = std::move(oj);
  }
  ojson certs = ojson::array();
  for (const Certificate* c : r.certificates()) certs.push_back(cert_json(*c));
  o["certificates"] = std::move(certs);
  const CertCounts n = r.counts();
  o["summary"] = ojson{{"pass", n.pass}, {"unknown", n.unknown}, {"fail", n.fail}};
  return o.dump(2) + "\n";
}

std::string ell_scan_dat(const RunReport& r) {
  std::string out = "# X_log ell_times_X_gamma\n";
  if (!r.oracle) return out;
  for (const ScanRow& row : r.oracle->scan.rows) out += mid17(row.X_log) + " " + mid17(row.value.mid()) + "\n";
  return out;
}

std::vector<std::filesystem::path> export_report(const RunReport& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> out{dir / "trace.csv", dir / "report.json"};
  write_file(out[0], trace_csv(r));
  write_file(out[1], report_json(r));
  if (r.oracle) {
    out.push_back(dir / "ell_scan.dat");
    write_file(out.back(), ell_scan_dat(r));
  }
  return out;
}

}  // namespace fibext
