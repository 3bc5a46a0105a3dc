#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cobarlie/bar.hpp"
#include "cobarlie/cli.hpp"
#include "cobarlie/errors.hpp"
#include "cobarlie/fincat.hpp"
#include "cobarlie/simplicial.hpp"

namespace py = pybind11;
using namespace cobarlie;

namespace {

std::tuple<int, std::string, std::string> run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full{"cobarlie"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  return {code, out.str(), err.str()};
}

// Terms of w_n as (images, coefficient) pairs, images 1-based.
std::vector<std::pair<std::vector<int>, std::string>> w_terms(int n, bool flip) {
  std::vector<std::pair<std::vector<int>, std::string>> out;
  auto w = fincat::w_element(n, flip);
  for (const auto& [g, c] : w.as_morphism().terms())
    out.emplace_back(std::vector<int>(g.images().begin(), g.images().end()), c.str());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of cobarlie";
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<VerificationFailure>(m, "VerificationFailure", PyExc_RuntimeError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_MemoryError);

  m.def("run_cli", &run_cli, py::arg("args"), "Run the command line front end; returns (code, stdout, stderr).");
  m.def("w_terms", &w_terms, py::arg("n"), py::arg("flip_sign") = false);
  m.def("space_json", [](const std::string& spec) { return simplicial::to_json(simplicial::load_space(spec)); },
        py::arg("spec"));
  m.def("cdga_json", [](const std::string& spec) { return bar::to_json(bar::load_cdga(spec)); }, py::arg("spec"));
  m.def(
      "verify_identities",
      [](int n_max, int pq_max, bool flip) {
        std::vector<std::tuple<std::string, std::string, bool, std::string>> out;
        std::vector<report::IdentityResult> rs;
        {
          py::gil_scoped_release release;
          rs = cli::run_verify(n_max, pq_max, flip);
        }
        for (const auto& r : rs) out.emplace_back(r.identity, r.instance, r.pass, r.counterexample);
        return out;
      },
      py::arg("n_max") = 6, py::arg("pq_max") = 4, py::arg("flip_sign") = false);
}
