#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "critspec/cli.hpp"
#include "critspec/errors.hpp"

namespace py = pybind11;
using namespace critspec;

namespace {

RunConfig config_from(const std::string& text) { return parse_config(Json::parse(text)); }

py::tuple captured(const std::function<int(std::ostream&, std::ostream&)>& run) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run(out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "critspec core bindings";

  static py::exception<Error> error(m, "CritspecError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("version", &version);
  m.def("radon_hurwitz_bound", &radon_hurwitz_bound, py::arg("n"));
  m.def("minimal_module_dim", &minimal_module_dim, py::arg("r"));
  m.def(
      "build_module",
      [](int r, bool hk) {
        const CliffordModule M = build_module(r, hk);
        std::vector<Eigen::MatrixXd> out;
        for (int l = 0; l < M.count(); ++l) out.push_back(M.structure(l));
        return out;
      },
      py::arg("r"), py::arg("hyperkahler") = false);
  m.def(
      "check_invariants",
      [](std::vector<Eigen::MatrixXd> structures, bool hk) {
        std::vector<py::tuple> out;
        for (const auto& c : check_invariants(CliffordModule(std::move(structures), hk)))
          out.push_back(py::make_tuple(c.identity, c.passed, c.defect));
        return out;
      },
      py::arg("structures"), py::arg("hyperkahler") = false);

  // Configs travel as JSON text; the Python side converts to dicts.
  m.def(
      "normalize_config", [](const std::string& text) { return config_to_json(config_from(text)).dump(); },
      py::arg("config_json"));
  m.def(
      "verify",
      [](const std::string& text) {
        return captured([&](std::ostream& o, std::ostream& e) { return cmd_verify(config_from(text), o, e); });
      },
      py::arg("config_json"));
  m.def(
      "spectrum",
      [](const std::string& text) {
        return captured([&](std::ostream& o, std::ostream& e) { return cmd_spectrum(config_from(text), o, e); });
      },
      py::arg("config_json"));
  m.def(
      "solve",
      [](const std::string& text) {
        return captured([&](std::ostream& o, std::ostream& e) { return cmd_solve(config_from(text), o, e); });
      },
      py::arg("config_json"));
  m.def(
      "run_command",
      [](const std::string& command, const std::string& path, std::optional<std::string> out_dir,
         std::optional<std::uint64_t> seed, std::optional<int> threads) {
        const Overrides o{out_dir, seed, threads};
        return captured([&](std::ostream& out, std::ostream& err) { return run_command(command, path, o, out, err); });
      },
      py::arg("command"), py::arg("config_path"), py::arg("out_dir") = py::none(), py::arg("seed") = py::none(),
      py::arg("threads") = py::none());
}
