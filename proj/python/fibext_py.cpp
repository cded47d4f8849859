#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fibext/error.hpp"
#include "fibext/experiment.hpp"
#include "fibext/fibword.hpp"
#include "fibext/oracle.hpp"

namespace py = pybind11;
using namespace fibext;

namespace {

Domain domain_of(const std::string& name, std::uint32_t p) { return Domain::from_name(name, p); }

ApproxTriple triple_of(const Domain& d, const std::vector<std::string>& xs) {
  if (xs.size() != 3) throw Error(Errc::invalid_argument, "expected three coordinates");
  return {parse_element(d, xs[0]), parse_element(d, xs[1]), parse_element(d, xs[2])};
}

}  // namespace

PYBIND11_MODULE(_fibext, m) {
  m.doc() = "Extremal simultaneous approximation over Z, Z[i], Z[sqrt(-5)] and F_p[u]";

  static py::exception<Error> error(m, "FibextError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("version", &version);

  m.def("fib_word", &fib_word, py::arg("i"));
  m.def("fib_length", &fib_length, py::arg("i"));
  m.def("palindrome_prefix", &palindrome_prefix, py::arg("i"));
  m.def("palindrome_length", &palindrome_length, py::arg("i"));

  m.def(
      "rho",
      [](const std::string& domain, const std::string& a, const std::string& b, std::uint32_t p) {
        const Domain d = domain_of(domain, p);
        return rho_of(parse_element(d, a), parse_element(d, b)).get_str();
      },
      py::arg("domain"), py::arg("a"), py::arg("b"), py::arg("p") = 0,
      "Certified rho as an exact rational string; elements are JSON literals.");

  m.def(
      "degenerate_decompose",
      [](const std::string& domain, const std::vector<std::string>& x, std::uint32_t p) {
        const Degenerate r = degenerate_decompose(triple_of(domain_of(domain, p), x));
        return py::make_tuple(r.unit.to_string(), r.m.to_string(), r.n.to_string());
      },
      py::arg("domain"), py::arg("x"), py::arg("p") = 0);

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("command", &RunReport::command)
      .def("json", &report_json)
      .def("csv", &trace_csv)
      .def("scan_dat", &ell_scan_dat)
      .def("exit_code", &RunReport::exit_code, py::arg("strict") = false)
      .def("counts",
           [](const RunReport& r) {
             const CertCounts n = r.counts();
             return py::dict(py::arg("pass") = n.pass, py::arg("unknown") = n.unknown, py::arg("fail") = n.fail);
           })
      .def("export", [](const RunReport& r, const std::string& dir) {
        std::vector<std::string> out;
        for (const auto& f : export_report(r, dir)) out.push_back(f.string());
        return out;
      });

  auto run = [](RunReport (*fn)(const ExperimentConfig&, unsigned)) {
    return [fn](const std::string& config_json, unsigned threads) {
      const ExperimentConfig cfg = parse_config(config_json);
      py::gil_scoped_release release;
      return fn(cfg, threads);
    };
  };
  m.def("run_construct", run(&run_construct), py::arg("config_json"), py::arg("threads") = 1);
  m.def("run_oracle", run(&run_oracle), py::arg("config_json"), py::arg("threads") = 1);
  m.def("run_verify", run(&run_verify), py::arg("config_json"), py::arg("threads") = 1);
}
