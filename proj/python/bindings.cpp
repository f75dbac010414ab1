#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "tgp/assembly.hpp"
#include "tgp/cli.hpp"
#include "tgp/config.hpp"
#include "tgp/dynamics.hpp"
#include "tgp/errors.hpp"
#include "tgp/kernels.hpp"
#include "tgp/spectra.hpp"

namespace py = pybind11;

namespace {

tgp::PronyKernel kernel_from(const std::vector<std::pair<double, double>>& terms, bool unit_mass) {
  std::vector<tgp::PronyTerm> out;
  for (const auto& [c, b] : terms) out.push_back({c, b});
  return tgp::PronyKernel(std::move(out), unit_mass);
}

std::vector<std::pair<double, double>> kernel_terms(const tgp::PronyKernel& k) {
  std::vector<std::pair<double, double>> out;
  for (const auto& t : k.terms()) out.emplace_back(t.weight, t.rate);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Thermoelastic Timoshenko beam lab: kernels, assembly, spectra and time stepping";
  m.attr("__version__") = TGP_VERSION;

  py::register_exception<tgp::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<tgp::InvalidKernel>(m, "InvalidKernel", PyExc_ValueError);
  py::register_exception<tgp::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<tgp::ShapeError>(m, "ShapeError", PyExc_ValueError);

  py::class_<tgp::PronyKernel>(m, "PronyKernel")
      .def(py::init(&kernel_from), py::arg("terms"), py::arg("unit_mass") = false)
      .def_property_readonly("terms", &kernel_terms)
      .def_property_readonly("unit_mass", &tgp::PronyKernel::unit_mass)
      .def("__len__", &tgp::PronyKernel::size)
      .def("__repr__", [](const tgp::PronyKernel& k) { return "PronyKernel(" + tgp::format_terms(k) + ")"; });

  m.def("evaluate_g", &tgp::evaluate_g, py::arg("kernel"), py::arg("s"));
  m.def("evaluate_mu", &tgp::evaluate_mu, py::arg("kernel"), py::arg("s"));
  m.def("total_mass", &tgp::total_mass);
  m.def("normalize_unit_mass", &tgp::normalize_unit_mass);
  m.def("dafermos_rate", &tgp::dafermos_rate);
  m.def("rescale", &tgp::rescale, py::arg("kernel"), py::arg("eps"));
  m.def("make_cattaneo", &tgp::make_cattaneo, py::arg("tau"));

  py::class_<tgp::ModelConfig>(m, "ModelConfig")
      .def_static("parse", [](const std::string& text) { return tgp::parse_model(text); }, py::arg("text"))
      .def("echo", [](const tgp::ModelConfig& c) { return tgp::format_flat(tgp::echo_model(c)); })
      .def_readwrite("cells", &tgp::ModelConfig::cells);

  py::class_<tgp::SemidiscreteSystem>(m, "System")
      .def_readonly("gram", &tgp::SemidiscreteSystem::gram)
      .def_readonly("generator", &tgp::SemidiscreteSystem::generator)
      .def_readonly("dissipation", &tgp::SemidiscreteSystem::dissipation)
      .def_property_readonly("dim", &tgp::SemidiscreteSystem::dim);

  m.def("assemble", &tgp::assemble, py::arg("config"));
  m.def("energy", &tgp::energy, py::arg("system"), py::arg("state"));
  m.def("dissipation", &tgp::dissipation, py::arg("system"), py::arg("state"));
  m.def("apply_generator", &tgp::apply_generator, py::arg("system"), py::arg("state"));

  m.def(
      "eigenvalues", [](const tgp::SemidiscreteSystem& sys) { return tgp::eigenvalues(sys).eigenvalues; },
      py::arg("system"));
  m.def("spectral_abscissa", &tgp::spectral_abscissa, py::arg("system"));
  m.def("resolvent_norm", &tgp::resolvent_norm, py::arg("system"), py::arg("lam"));
  m.def(
      "dominant_mode",
      [](const tgp::SemidiscreteSystem& sys) { return tgp::dominant_mode(sys, tgp::eigenvalues(sys)); },
      py::arg("system"));
  m.def("step_midpoint", &tgp::step_midpoint, py::arg("system"), py::arg("state"), py::arg("dt"));

  m.def(
      "simulate",
      [](const tgp::SemidiscreteSystem& sys, const Eigen::VectorXd& u0, double dt, double t_final) {
        const auto r = tgp::simulate(sys, u0, dt, t_final);
        py::dict out;
        out["times"] = r.times;
        out["energies"] = r.energies;
        out["dissipations"] = r.dissipations;
        out["fitted_rate"] = r.fit ? py::cast(r.fit->rate) : py::none();
        return out;
      },
      py::arg("system"), py::arg("state"), py::arg("dt"), py::arg("t_final"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int status = tgp::run_cli(args, out, err);
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"), "Runs the tgp command line in-process; returns (status, stdout, stderr).");
}
