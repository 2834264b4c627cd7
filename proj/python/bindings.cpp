#include "splitlab/algebra/identities.hpp"
#include "splitlab/algebra/scalar.hpp"
#include "splitlab/bundle/generators.hpp"
#include "splitlab/connection/connection.hpp"
#include "splitlab/lang/format.hpp"
#include "splitlab/lang/lower.hpp"
#include "splitlab/lang/parser.hpp"
#include "splitlab/report/suites.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace splitlab;

namespace {

RingRef ring_for(const std::string& mode) {
  if (mode == "massive") return massive_ring();
  if (mode == "massless") return massless_ring();
  throw py::value_error("mode must be 'massive' or 'massless'");
}

lang::Value lower_text(const std::string& expr, const std::string& mode) {
  return lang::lower(lang::parse(expr), ring_for(mode));
}

RepSpec rep_from(const std::optional<int>& spin, const std::optional<int>& helicity, double mass) {
  if (spin.has_value() == helicity.has_value()) throw py::value_error("give exactly one of spin= or helicity=");
  RepSpec r = spin ? RepSpec::massive(mass, *spin) : RepSpec::massless(*helicity);
  r.validate();
  return r;
}

}  // namespace

PYBIND11_MODULE(_splitlab, m) {
  m.doc() = "Poincare generators, connections and SAM/OAM splittings on momentum-space bundles";
  m.attr("__version__") = kToolVersion;

  static py::exception<lang::LangError> lang_error(m, "LangError", PyExc_ValueError);
  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const lang::LangError& e) {
      lang_error(e.what());
    } catch (const ConfigError& e) {
      config_error(e.what());
    }
  });

  m.def(
      "evaluate",
      [](const std::string& expr, const std::string& mode) {
        const auto v = lower_text(expr, mode);
        if (const auto* s = std::get_if<OperatorExpr>(&v)) return lang::format(*s);
        return lang::format(std::get<VectorExpr>(v));
      },
      py::arg("expr"), py::arg("mode") = "massive", "Normal form of an operator-language expression.");
  m.def(
      "is_zero",
      [](const std::string& expr, const std::string& mode) {
        const auto v = lower_text(expr, mode);
        if (const auto* s = std::get_if<OperatorExpr>(&v)) return s->is_zero();
        return std::get<VectorExpr>(v).is_zero();
      },
      py::arg("expr"), py::arg("mode") = "massive");

  m.def("identity_suite", [] {
    py::list out;
    for (const auto& r : identity_suite()) {
      py::dict d;
      d["name"] = r.name;
      d["anchor"] = r.anchor;
      d["ring"] = r.ring;
      d["zero"] = r.zero;
      d["components"] = r.components;
      d["nonzero_components"] = r.nonzero_components;
      out.append(d);
    }
    return out;
  });

  m.def(
      "algebra_residuals",
      [](std::optional<int> spin, std::optional<int> helicity, double mass, std::array<int, 3> grid, double r_min,
         double r_max, std::uint64_t seed) {
        const RepSpec rep = rep_from(spin, helicity, mass);
        const Section psi = random_test_section(rep, make_grid(grid[0], grid[1], grid[2], r_min, r_max), seed);
        std::map<std::string, double> out;
        py::gil_scoped_release release;
        for (const auto& fam : relation_families()) {
          double worst = 0;
          for (const auto& [id, v] : family_residuals(psi, fam)) worst = std::max(worst, v);
          out[fam] = worst;
        }
        return out;
      },
      py::kw_only(), py::arg("spin") = py::none(), py::arg("helicity") = py::none(), py::arg("mass") = 1.0,
      py::arg("grid") = std::array<int, 3>{8, 48, 96}, py::arg("r_min") = 0.9, py::arg("r_max") = 1.1,
      py::arg("seed") = 7, "Largest relative residual per commutator family on a smooth test section.");

  m.def(
      "chern_number",
      [](int helicity, const std::string& connection, int n_theta, int n_phi) {
        ChernOptions opt;
        opt.n_theta = n_theta;
        opt.n_phi = n_phi;
        const ChernResult r = chern_number(Connection::parse(connection), RepSpec::massless(helicity), opt);
        return py::make_tuple(r.value, r.raw);
      },
      py::arg("helicity"), py::arg("connection") = "boost", py::arg("n_theta") = 48, py::arg("n_phi") = 96,
      "(integer, pre-rounding value) of the lattice Chern number on the unit shell.");

  m.def(
      "parse_config", [](const std::string& text) { return parse_config(text, "<string>").suites; },
      py::arg("text"), "Validate a configuration text; returns the selected suites.");

  auto run_text = [](const std::string& text, const std::vector<std::string>& suites, bool normalize) {
    RunConfig cfg = text.empty() ? RunConfig{} : parse_config(text, "<string>");
    if (!suites.empty()) cfg.suites = expand_suites(suites);
    if (cfg.suites.empty() && text.empty()) cfg.suites = expand_suites({"all"});
    cfg.validate();
    Report rep;
    {
      py::gil_scoped_release release;
      rep = run(cfg);
    }
    return report_json(rep, normalize);
  };
  m.def("run", run_text, py::arg("config") = "", py::arg("suites") = std::vector<std::string>{},
        py::arg("normalize") = true, "Run suites and return the JSON report text.");
  m.def(
      "run_suite",
      [run_text](const std::string& name, bool normalize) { return run_text("", {name}, normalize); },
      py::arg("name"), py::arg("normalize") = true);

  m.def(
      "read_section",
      [](const std::string& path) {
        const Section s = read_section(path);
        const auto& g = *s.grid();
        py::array_t<std::complex<double>> a({static_cast<py::ssize_t>(g.n_r()), static_cast<py::ssize_t>(g.n_theta()),
                                            static_cast<py::ssize_t>(g.n_phi()), static_cast<py::ssize_t>(s.dim())});
        std::copy(s.data().begin(), s.data().end(), a.mutable_data());
        py::dict d;
        d["data"] = a;
        d["rep"] = s.rep().label();
        d["r_min"] = g.r_min();
        d["r_max"] = g.r_max();
        return d;
      },
      py::arg("path"), "Binary test section as an (n_r, n_theta, n_phi, dim) complex array.");
}
