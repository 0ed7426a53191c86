#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "solcoll/analysis/fragmentation.hpp"
#include "solcoll/analysis/kinematics.hpp"
#include "solcoll/analysis/reduced_model.hpp"
#include "solcoll/core/error.hpp"
#include "solcoll/scenario/catalogue.hpp"
#include "solcoll/scenario/runner.hpp"
#include "solcoll/twomode/coeffs.hpp"
#include "solcoll/twomode/observables.hpp"
#include "solcoll/twomode/propagator.hpp"

namespace py = pybind11;
using namespace solcoll;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

// lambda_+- and <n_L> at constant separation, straight from the propagator
py::dict lambda_series(int n_sol, double u0, double d, double t_final, double dt,
                       const std::string& statistics, double phi, unsigned threads) {
  twomode::NumberSuperposition s;
  if (statistics == "poissonian")
    s = twomode::dual_coherent_state(n_sol, phi);
  else if (statistics == "fixed")
    s = twomode::single_sector(twomode::initial_relative_coherent_state(2 * n_sol, phi));
  else
    throw InvalidArgument("statistics must be 'fixed' or 'poissonian', got '" + statistics + "'");

  const Grid1D grid(-64.0, 64.0, 1024);
  const auto provider = twomode::make_coeff_provider(n_sol, u0, grid);
  twomode::PropagationOptions opt;
  opt.threads = threads;
  std::vector<double> t, lp, lm, mean;
  {
    py::gil_scoped_release nogil;
    twomode::propagate(
        s, twomode::SeparationSchedule::constant(d), provider, dt, t_final, 1,
        [&](const twomode::NumberSuperposition& st, const twomode::SliceInfo& info) {
          const auto o = twomode::obdm(st);
          t.push_back(info.t);
          lp.push_back(o.lambda_plus);
          lm.push_back(o.lambda_minus);
          mean.push_back(o.aa);
        },
        opt);
  }
  py::dict out;
  out["t"] = to_array(t);
  out["lambda_plus"] = to_array(lp);
  out["lambda_minus"] = to_array(lm);
  out["mean_nL"] = to_array(mean);
  return out;
}

std::string run_config(const std::string& path, const std::map<std::string, std::string>& overrides) {
  auto kv = parse_key_values_file(path);
  for (const auto& [k, v] : overrides) kv[k] = ConfigEntry{v, 0};
  const auto r = scenario::resolve(kv);
  py::gil_scoped_release nogil;
  return scenario::run_scenario(r.config, r.inferred).to_json();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-mode bright-soliton collision model";
  m.attr("__version__") = scenario::library_version();

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<analysis::LambdaPair>(m, "LambdaPair")
      .def_readonly("plus", &analysis::LambdaPair::plus)
      .def_readonly("minus", &analysis::LambdaPair::minus)
      .def_readonly("gaussian_plus", &analysis::LambdaPair::gaussian_plus)
      .def_readonly("gaussian_minus", &analysis::LambdaPair::gaussian_minus);

  py::class_<analysis::FragmentationReport>(m, "FragmentationReport")
      .def_readonly("n_sol", &analysis::FragmentationReport::n_sol)
      .def_readonly("chi", &analysis::FragmentationReport::chi)
      .def_readonly("threshold", &analysis::FragmentationReport::threshold)
      .def_readonly("t_frag_analytic", &analysis::FragmentationReport::t_frag_analytic)
      .def_readonly("t_threshold", &analysis::FragmentationReport::t_threshold)
      .def_property_readonly("ratio", &analysis::FragmentationReport::ratio);

  py::class_<analysis::CollisionOutcome>(m, "CollisionOutcome")
      .def_readonly("a", &analysis::CollisionOutcome::a)
      .def_readonly("p_plus", &analysis::CollisionOutcome::p_plus)
      .def_readonly("p_minus", &analysis::CollisionOutcome::p_minus)
      .def_readonly("kinetic_gain", &analysis::CollisionOutcome::kinetic_gain)
      .def_readonly("momentum_residual", &analysis::CollisionOutcome::momentum_residual)
      .def_readonly("energy_residual", &analysis::CollisionOutcome::energy_residual);

  py::class_<twomode::TwoModeCoeffs>(m, "TwoModeCoeffs")
      .def_readonly("E0", &twomode::TwoModeCoeffs::E0)
      .def_readonly("chi", &twomode::TwoModeCoeffs::chi)
      .def_readonly("J", &twomode::TwoModeCoeffs::J)
      .def_readonly("Ubar", &twomode::TwoModeCoeffs::Ubar)
      .def_readonly("Jbar", &twomode::TwoModeCoeffs::Jbar)
      .def_readonly("d", &twomode::TwoModeCoeffs::d)
      .def_readonly("qualitative_only", &twomode::TwoModeCoeffs::qualitative_only);

  m.def("lambda_analytic", &analysis::lambda_analytic, py::arg("t"), py::arg("n_sol"), py::arg("chi"));
  m.def("fragmentation_time", &analysis::fragmentation_time, py::arg("n_sol"), py::arg("chi"),
        py::arg("threshold") = 0.2);
  m.def("postcollision_momenta", &analysis::postcollision_momenta, py::arg("a"), py::arg("n_sol"),
        py::arg("p0"), py::arg("chi"), py::arg("mass") = 1.0);
  m.def(
      "v_of_n",
      [](int n_sol, double p0, double chi, int n_first, int n_last) {
        std::vector<double> n, v;
        for (const auto& p : analysis::v_of_n_curve(n_sol, p0, chi, n_first, n_last)) {
          n.push_back(p.n);
          v.push_back(p.v);
        }
        return py::make_tuple(to_array(n), to_array(v));
      },
      py::arg("n_sol"), py::arg("p0"), py::arg("chi"), py::arg("n_first"), py::arg("n_last"));
  m.def("collision_time", &analysis::collision_time, py::arg("d_ini"), py::arg("v_ini"));
  m.def("chi_closed_form", &twomode::chi_closed_form, py::arg("n_sol"), py::arg("u0"));
  m.def(
      "compute_coeffs",
      [](double d, int n_sol, double u0, double x_min, double x_max, std::size_t n_points) {
        return twomode::compute_coeffs(d, n_sol, u0, Grid1D(x_min, x_max, n_points));
      },
      py::arg("d"), py::arg("n_sol"), py::arg("u0"), py::arg("x_min") = -64.0,
      py::arg("x_max") = 64.0, py::arg("n_points") = 1024);
  m.def("lambda_series", &lambda_series, py::arg("n_sol"), py::arg("u0"), py::arg("d") = 32.0,
        py::arg("t_final") = 100.0, py::arg("dt") = 0.1, py::arg("statistics") = "poissonian",
        py::arg("phi") = 0.0, py::arg("threads") = 1);

  m.def("scenario_names", &scenario::scenario_names);
  m.def(
      "scenario_defaults",
      [](const std::string& name) {
        std::map<std::string, std::string> out;
        for (const auto& [k, v] : scenario::scenario_defaults(name).to_key_values()) out[k] = v;
        return out;
      },
      py::arg("name"));
  m.def("run_config", &run_config, py::arg("path"),
        py::arg("overrides") = std::map<std::string, std::string>{},
        "Run a config file; returns the manifest as JSON text.");
}
