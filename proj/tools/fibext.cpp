#include <iostream>
#include <algorithm>

#include "CLI11.hpp"
#include "fibext/error.hpp"
#include "fibext/experiment.hpp"

using namespace fibext;

int main(int argc, char** argv) {
  CLI::App app{"Extremal simultaneous approximation: construction, certificates and minimal-point oracle"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string config;
  std::string out;
  unsigned threads = 1;
  long precision_cap = 0;
  bool strict = false;

  for (const char* name : {"construct", "oracle", "verify"}) {
    CLI::App* sub = app.add_subcommand(name, std::string(name) == "construct" ? "Build x_i, xi and all certificates"
                                             : std::string(name) == "oracle"  ? "Exhaustive minimal points vs the construction"
                                                                              : "Construction and oracle together");
    sub->add_option("--config", config, "JSON config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory (default: output.dir of the config)");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--precision-cap", precision_cap, "Cap on ball precision in bits")->check(CLI::PositiveNumber);
    sub->add_flag("--strict", strict, "Treat unknown certificates as failures");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig cfg = load_config(config);
    if (precision_cap > 0) {
      cfg.policy.cap_bits = std::max(precision_cap, cfg.policy.start_bits);
    }
    const RunReport r = cmd == "construct" ? run_construct(cfg, threads)
                        : cmd == "oracle"  ? run_oracle(cfg, threads)
                                           : run_verify(cfg, threads);
    const auto files = export_report(r, out.empty() ? cfg.out_dir : out);
    const CertCounts n = r.counts();
    std::cout << "fibext " << cmd << ": " << cfg.domain.label() << ", a = " << cfg.a.to_string()
              << ", b = " << cfg.b.to_string() << ", N = " << cfg.N << "\n";
    for (const Certificate* c : r.certificates())
      std::cout << "  " << c->name() << ": " << to_string(c->status()) << " (" << c->count(CertStatus::pass) << " pass, "
                << c->count(CertStatus::unknown) << " unknown, " << c->count(CertStatus::fail) << " fail)\n";
    std::cout << "  total: " << n.pass << " pass, " << n.unknown << " unknown, " << n.fail << " fail\n";
    for (const auto& f : files) std::cout << "  wrote " << f.string() << "\n";
    return r.exit_code(strict);
  } catch (const Error& e) {
    std::cerr << "fibext " << cmd << ": error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fibext " << cmd << ": error: " << e.what() << "\n";
    return 2;
  }
}
