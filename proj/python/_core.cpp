#include "oscdeform/config.hpp"
#include "oscdeform/deformation.hpp"
#include "oscdeform/eigensystem.hpp"
#include "oscdeform/errors.hpp"
#include "oscdeform/fockspace.hpp"
#include "oscdeform/moments.hpp"
#include "oscdeform/report.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace oscdeform;

namespace {

ScanConfig config_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ScanConfig cfg = config_from_json(j);
  validate(cfg);
  return cfg;
}

// Element-wise evaluation over a NumPy array of positions.
template <class F>
py::array_t<double> map_array(py::array_t<double, py::array::c_style | py::array::forcecast> x, F&& f) {
  py::array_t<double> out(x.request().shape);
  const double* in = x.data();
  double* o = out.mutable_data();
  for (py::ssize_t i = 0; i < x.size(); ++i) o[i] = f(in[i]);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deformed bosonic oscillators: eigenfunctions, moments and truncated Fock-space checks";

  auto value_error = py::reinterpret_borrow<py::object>(PyExc_ValueError);
  py::register_exception<ConstraintError>(m, "ConstraintError", value_error);
  py::register_exception<AdmissibilityError>(m, "AdmissibilityError", value_error);
  py::register_exception<ParameterRangeError>(m, "ParameterRangeError", value_error);
  py::register_exception<ConfigError>(m, "ConfigError", value_error);
  py::register_exception<SpectrumError>(m, "SpectrumError", PyExc_RuntimeError);

  py::class_<CParams>(m, "CParams")
      .def(py::init<>())
      .def(py::init([](double c1, double c2, double c3, double c4, double c5, double c6) {
             return CParams{c1, c2, c3, c4, c5, c6};
           }),
           py::arg("c1"), py::arg("c2"), py::arg("c3"), py::arg("c4"), py::arg("c5"), py::arg("c6"))
      .def_readwrite("c1", &CParams::c1)
      .def_readwrite("c2", &CParams::c2)
      .def_readwrite("c3", &CParams::c3)
      .def_readwrite("c4", &CParams::c4)
      .def_readwrite("c5", &CParams::c5)
      .def_readwrite("c6", &CParams::c6)
      .def("as_tuple", [](const CParams& c) { return py::tuple(py::cast(c.as_array())); })
      .def(py::self == py::self)
      .def("__repr__", [](const CParams& c) {
        return "CParams(" + format_real(c.c1) + ", " + format_real(c.c2) + ", " + format_real(c.c3) +
               ", " + format_real(c.c4) + ", " + format_real(c.c5) + ", " + format_real(c.c6) + ")";
      });

  py::class_<HamCoeffs>(m, "HamCoeffs")
      .def(py::init<>())
      .def_readwrite("A", &HamCoeffs::A)
      .def_readwrite("B", &HamCoeffs::B)
      .def_readwrite("C", &HamCoeffs::C)
      .def_readwrite("D", &HamCoeffs::D)
      .def_readwrite("E", &HamCoeffs::E)
      .def_readwrite("F", &HamCoeffs::F)
      .def(py::self == py::self)
      .def("__repr__", [](const HamCoeffs& h) {
        return "HamCoeffs(A=" + format_real(h.A) + ", B=" + format_real(h.B) + ", C=" + format_real(h.C) +
               ", D=" + format_real(h.D) + ", E=" + format_real(h.E) + ", F=" + format_real(h.F) + ")";
      });

  py::enum_<PresetKind>(m, "PresetKind")
      .value("harmonic", PresetKind::harmonic)
      .value("lambda_shift", PresetKind::lambda_shift)
      .value("case_i", PresetKind::case_i)
      .value("case_ii", PresetKind::case_ii)
      .value("case_iii", PresetKind::case_iii);

  m.def("preset", [](const std::string& name, double lambda) { return preset({parse_preset(name), lambda}); },
        py::arg("name"), py::arg("lam") = 0.0);
  m.def("constraint_residual", &constraint_residual);
  m.def("coeffs_from_c", &coeffs_from_c);
  m.def("is_admissible", &is_admissible);
  m.def("is_selfadjoint", &is_selfadjoint, py::arg("h"), py::arg("tol") = kSymmetryTolerance);
  m.def("is_mutually_adjoint", &is_mutually_adjoint, py::arg("c"), py::arg("tol") = kSymmetryTolerance);

  py::class_<ChangeOfVariable>(m, "ChangeOfVariable")
      .def_readonly("p", &ChangeOfVariable::p)
      .def_readonly("q", &ChangeOfVariable::q);
  m.def("change_of_variable", &change_of_variable);
  m.def("energy", [](const HamCoeffs& h, int n) { return energy_general(h, change_of_variable(h), n); },
        py::arg("h"), py::arg("n"));

  py::class_<EigenState>(m, "EigenState")
      .def(py::init([](const HamCoeffs& h, int n) { return EigenState(h, n); }), py::arg("h"), py::arg("n"))
      .def_property_readonly("n", &EigenState::n)
      .def_property_readonly("norm", &EigenState::norm)
      .def_property_readonly("cov", &EigenState::cov)
      .def("__call__", [](const EigenState& s, double x) { return s(x); })
      .def("__call__", [](const EigenState& s, py::array_t<double> x) {
        return map_array(x, [&](double v) { return s(v); });
      })
      .def("derivative", [](const EigenState& s, py::array_t<double> x) {
        return map_array(x, [&](double v) { return s.derivative(v); });
      })
      .def("eigen_equation_residual", &EigenState::eigen_equation_residual);

  m.def("normalize", [](const HamCoeffs& h, int n) { return normalize(h, n); });
  m.def("gram_matrix", [](const HamCoeffs& h, int n_max) { return gram_matrix(h, n_max); });
  m.def("sign_changes", [](const EigenState& s) { return sign_changes(s); });

  py::class_<MomentReport>(m, "MomentReport")
      .def_readonly("mean_x", &MomentReport::mean_x)
      .def_readonly("mean_x2", &MomentReport::mean_x2)
      .def_readonly("mean_p", &MomentReport::mean_p)
      .def_readonly("mean_p2", &MomentReport::mean_p2)
      .def_readonly("var_x", &MomentReport::var_x)
      .def_readonly("var_p", &MomentReport::var_p)
      .def_readonly("product", &MomentReport::product)
      .def_readonly("squeezed_x", &MomentReport::squeezed_x)
      .def_readonly("squeezed_p", &MomentReport::squeezed_p)
      .def_readonly("coherent", &MomentReport::coherent);
  m.def("moments", [](const HamCoeffs& h, int n) { return moments_quadrature(h, n); });
  m.def("ground_moments_closed", &ground_moments_closed);
  m.def("variance_lambda_shift_oracle", [](int n, double lam) { return variance_lambda_shift_oracle(n, lam); });
  m.def("printed_variance_lambda_shift", &printed_variance_lambda_shift);
  m.def(
      "squeezing_window",
      [](const std::string& name, int n, double lo, double hi, int steps) {
        const SqueezingWindow w = squeezing_window_scan(parse_preset(name), n, {lo, hi, steps});
        std::vector<std::pair<std::optional<double>, std::optional<double>>> out;
        for (const auto& iv : w.intervals) out.emplace_back(iv.lo, iv.hi);
        return out;
      },
      py::arg("name"), py::arg("n"), py::arg("lo"), py::arg("hi"), py::arg("steps"),
      "Intervals (lo, hi) with var_x < 1/2; None marks an interval reaching the grid edge.");

  py::class_<TruncatedOperators>(m, "TruncatedOperators")
      .def_readonly("dim", &TruncatedOperators::dim)
      .def_readonly("a", &TruncatedOperators::a)
      .def_readonly("b", &TruncatedOperators::b)
      .def_readonly("bdag", &TruncatedOperators::bdag)
      .def_readonly("h", &TruncatedOperators::h);
  m.def("build_truncated", [](const CParams& c, int dim) { return build_truncated(c, dim); },
        py::arg("c"), py::arg("dim"));
  m.def("commutator_residual", &commutator_residual);
  m.def("wigner_residuals", [](const TruncatedOperators& t) {
    const WignerResiduals w = wigner_residuals(t);
    return std::make_pair(w.lowering, w.raising);
  });
  m.def("spectrum", &spectrum_check, py::arg("t"), py::arg("k"));

  m.def("verify_json", [](const std::string& config) { return verify_json(run_verify(config_from_text(config))).dump(); },
        "Run the verification suites for a JSON config; returns the JSON report text.");
  m.def("scan_csv", [](const std::string& config) { return format_scan_csv(run_scan(config_from_text(config))); });
  m.def("discrepancy_report", &discrepancy_report);
}
