#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "specrig/eigensolver.hpp"
#include "specrig/errors.hpp"
#include "specrig/experiments.hpp"
#include "specrig/perturbation.hpp"
#include "specrig/profiles.hpp"
#include "specrig/rays.hpp"
#include "specrig/wave_trace.hpp"

namespace py = pybind11;
using namespace specrig;

namespace {

RadialFn fn_from_dict(const py::dict& d) {
    const std::string dumped =
        py::cast<std::string>(py::module_::import("json").attr("dumps")(d));
    return RadialFn::from_json(nlohmann::json::parse(dumped));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spectral/geometric machinery for radial coefficient profiles";

    py::register_exception<ConfigError>(m, "SpecrigConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "SpecrigNumericalError", PyExc_RuntimeError);

    py::class_<RadialFn>(m, "RadialFn")
        .def_static("constant", &RadialFn::constant, py::arg("value"))
        .def_static("linear", &RadialFn::linear, py::arg("intercept"), py::arg("slope"))
        .def_static("gaussian", &RadialFn::gaussian, py::arg("amplitude"), py::arg("center"), py::arg("width"))
        .def_static("polynomial", &RadialFn::polynomial, py::arg("coeffs"))
        .def_static("log_r", &RadialFn::log_r, py::arg("coeff"))
        .def_static("samples", &RadialFn::samples, py::arg("r"), py::arg("values"))
        .def_static("from_dict", &fn_from_dict, py::arg("description"))
        .def("__call__", &RadialFn::operator(), py::arg("r"))
        .def("deriv", &RadialFn::deriv, py::arg("r"));

    m.def("random_smooth_fn", &random_smooth_fn, py::arg("seed"), py::arg("r_lo"),
          py::arg("amplitude"), py::arg("zero_at_outer"));

    py::class_<BoundaryCondition>(m, "BoundaryCondition")
        .def_static("dirichlet", &BoundaryCondition::dirichlet)
        .def_static("neumann", &BoundaryCondition::neumann)
        .def_static("robin_outer", &BoundaryCondition::robin_outer, py::arg("kappa"))
        .def_static("toroidal", &BoundaryCondition::toroidal);

    py::enum_<OperatorVariant>(m, "OperatorVariant")
        .value("standard", OperatorVariant::Standard)
        .value("toroidal", OperatorVariant::Toroidal);

    py::class_<RadialGrid>(m, "RadialGrid")
        .def_readonly("nodes", &RadialGrid::nodes)
        .def_readonly("cell_weights", &RadialGrid::cell_weights)
        .def_readonly("h", &RadialGrid::h)
        .def_readonly("staggered", &RadialGrid::staggered);

    py::class_<RadialProfile>(m, "RadialProfile")
        .def_readonly("grid", &RadialProfile::grid)
        .def_readonly("a", &RadialProfile::a)
        .def_readonly("b", &RadialProfile::b)
        .def_readonly("c", &RadialProfile::c)
        .def_readonly("rho", &RadialProfile::rho)
        .def("speed", &RadialProfile::speed, py::arg("r"))
        .def("is_ball", &RadialProfile::is_ball);

    m.def("make_profile",
          py::overload_cast<const RadialFn&, const RadialFn&, double, int>(&make_profile),
          py::arg("a"), py::arg("b"), py::arg("inner_radius"), py::arg("n"));
    m.def("herglotz_margin", &herglotz_margin, py::arg("profile"));

    py::class_<Mode>(m, "Mode")
        .def_readonly("l", &Mode::l)
        .def_readonly("n", &Mode::n)
        .def_readonly("lam", &Mode::lambda)
        .def_readonly("f", &Mode::f)
        .def("multiplicity", &Mode::multiplicity)
        .def("omega", &Mode::omega);

    py::class_<DegeneracyFlag>(m, "DegeneracyFlag")
        .def_readonly("l1", &DegeneracyFlag::l1)
        .def_readonly("n1", &DegeneracyFlag::n1)
        .def_readonly("l2", &DegeneracyFlag::l2)
        .def_readonly("n2", &DegeneracyFlag::n2);

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("modes", &Spectrum::modes)
        .def_readonly("degeneracies", &Spectrum::degeneracies)
        .def("expanded", &Spectrum::expanded)
        .def("lambda_abs_max", &Spectrum::lambda_abs_max);

    m.def("solve_modes", &solve_modes, py::arg("profile"), py::arg("l"), py::arg("bc"),
          py::arg("variant"), py::arg("n_max"));
    m.def("full_spectrum", &full_spectrum, py::arg("profile"), py::arg("bc"), py::arg("variant"),
          py::arg("l_max"), py::arg("n_max"), py::arg("threads") = 1,
          py::arg("degeneracy_rel") = 1e-8);

    py::class_<PerturbationFamily>(m, "PerturbationFamily")
        .def(py::init<>())
        .def_readwrite("a_dir", &PerturbationFamily::a_dir)
        .def_readwrite("b_dir", &PerturbationFamily::b_dir)
        .def_readwrite("b_dir2", &PerturbationFamily::b_dir2);

    py::class_<ModeDelta>(m, "ModeDelta")
        .def_readonly("l", &ModeDelta::l)
        .def_readonly("n", &ModeDelta::n)
        .def_readonly("lam", &ModeDelta::lambda)
        .def_readonly("dlambda", &ModeDelta::dlambda);

    m.def("delta_lambda_a", &delta_lambda_a, py::arg("mode"), py::arg("a_dir"), py::arg("profile"));
    m.def("delta_lambda_b", &delta_lambda_b, py::arg("mode"), py::arg("b_dir"), py::arg("profile"));
    m.def("delta_lambda_b_divergence", &delta_lambda_b_divergence, py::arg("mode"), py::arg("b_dir"),
          py::arg("profile"));
    m.def("delta2_lambda_b", &delta2_lambda_b, py::arg("mode"), py::arg("b_dir2"), py::arg("profile"));
    m.def("delta_spectrum", &delta_spectrum, py::arg("profile"), py::arg("bc"), py::arg("variant"),
          py::arg("family"), py::arg("l_max"), py::arg("n_max"), py::arg("threads") = 1);
    m.def("fd_delta_lambda", &fd_delta_lambda, py::arg("profile"), py::arg("bc"), py::arg("variant"),
          py::arg("family"), py::arg("l"), py::arg("n"), py::arg("step"));
    m.def("fd_delta2_lambda", &fd_delta2_lambda, py::arg("profile"), py::arg("bc"), py::arg("variant"),
          py::arg("family"), py::arg("l"), py::arg("n"), py::arg("step"));
    m.def("energy_gradient", &energy_gradient, py::arg("profile"), py::arg("b_dir"));
    m.def("energy_pairing", &energy_pairing, py::arg("profile"), py::arg("b_dir"));

    py::class_<RayParameter>(m, "RayParameter")
        .def_readonly("p", &RayParameter::p)
        .def_readonly("turning_radius", &RayParameter::turning_radius)
        .def_readonly("reflects_inner", &RayParameter::reflects_inner);

    py::class_<PeriodicOrbit>(m, "PeriodicOrbit")
        .def_readonly("p", &PeriodicOrbit::p)
        .def_readonly("n_chords", &PeriodicOrbit::n_chords)
        .def_readonly("m_windings", &PeriodicOrbit::m_windings)
        .def_readonly("length", &PeriodicOrbit::length)
        .def_readonly("turning_radius", &PeriodicOrbit::turning_radius);

    py::class_<LengthSpectrum>(m, "LengthSpectrum")
        .def_readonly("orbits", &LengthSpectrum::orbits)
        .def_readonly("warnings", &LengthSpectrum::warnings);

    m.def("turning_point", &turning_point, py::arg("profile"), py::arg("p"));
    m.def("chord_time", &chord_time, py::arg("profile"), py::arg("p"));
    m.def("angular_advance", &angular_advance, py::arg("profile"), py::arg("p"));
    m.def("abel_transform", &abel_transform, py::arg("profile"), py::arg("f"), py::arg("r"));
    m.def("find_periodic_orbits", &find_periodic_orbits, py::arg("profile"),
          py::arg("n_max_chords"), py::arg("m_max"));
    m.def("orbit_time_integral", &orbit_time_integral, py::arg("profile"), py::arg("orbit"),
          py::arg("f"));
    m.def("delta_T", &delta_T, py::arg("profile"), py::arg("orbit"), py::arg("a_dir"));

    py::class_<TraceWindow>(m, "TraceWindow")
        .def(py::init([](double omega_max, const std::string& shape) {
                 TraceWindow w;
                 w.omega_max = omega_max;
                 w.shape = shape == "boxcar" ? TraceWindow::Shape::Boxcar
                                             : TraceWindow::Shape::CosineSquared;
                 return w;
             }),
             py::arg("omega_max"), py::arg("shape") = "cosine2")
        .def("weight", &TraceWindow::weight, py::arg("omega"));

    py::class_<Peak>(m, "Peak")
        .def_readonly("t", &Peak::t)
        .def_readonly("prominence", &Peak::prominence);

    py::class_<TraceSeries>(m, "TraceSeries")
        .def_readonly("t", &TraceSeries::t)
        .def_readonly("values", &TraceSeries::values);

    m.def("uniform_time_grid", &uniform_time_grid, py::arg("t_min"), py::arg("t_max"), py::arg("dt"));
    m.def("trace_series",
          py::overload_cast<const Spectrum&, const TraceWindow&, const std::vector<double>&>(&trace_series),
          py::arg("spectrum"), py::arg("window"), py::arg("t_grid"));
    m.def("delta_trace", &delta_trace, py::arg("spectrum"), py::arg("deltas"), py::arg("window"),
          py::arg("t_grid"));
    m.def("detect_peaks", &detect_peaks, py::arg("series"), py::arg("min_prominence"));
    m.def("detect_envelope_peaks", &detect_envelope_peaks, py::arg("series"), py::arg("min_prominence"));
}
