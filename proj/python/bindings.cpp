#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ftm/experiment.hpp"
#include "ftm/hybrid.hpp"
#include "ftm/splitting.hpp"
#include "ftm/version.hpp"

namespace py = pybind11;

namespace {

using namespace ftm;

Basis basis_from(const std::string& name) {
    if (name == "z") return Basis::Z;
    if (name == "x") return Basis::X;
    throw DomainError("unknown basis '" + name + "' (use \"z\" or \"x\")");
}

const char* basis_name(Basis b) { return b == Basis::Z ? "z" : "x"; }

Scenario scenario_from(const std::string& name) {
    if (name == "pd_z") return {BathCoupling::Dephasing, MeasurementAxis::Z};
    if (name == "pd_x") return {BathCoupling::Dephasing, MeasurementAxis::X};
    if (name == "ad_z") return {BathCoupling::Dissipative, MeasurementAxis::Z};
    if (name == "ad_x") return {BathCoupling::Dissipative, MeasurementAxis::X};
    throw DomainError("unknown scenario '" + name +
                      "' (use pd_z, pd_x, ad_z or ad_x)");
}

WeightConvention convention_from(const std::string& name) {
    if (name == "step_interval") return WeightConvention::StepInterval;
    if (name == "total_time") return WeightConvention::TotalTime;
    throw DomainError("unknown weight convention '" + name +
                      "' (use step_interval or total_time)");
}

ModelParams make_params(double lambda, double eta, double omega0,
                        double omega_c, double temperature) {
    ModelParams p;
    p.lambda = lambda;
    p.eta = eta;
    p.omega0 = omega0;
    p.omega_c = omega_c;
    p.beta = InverseTemperature::from_temperature(temperature);
    p.validate();
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Monitored qubit under a finite-time measurement in a thermal "
              "Ohmic bath: closed noiseless propagators, hybrid "
              "master-equation solvers, the exact splitting sum and the "
              "weak-measurement fitting chain.";
    m.attr("__version__") = version;

    py::register_exception<Error>(m, "FtmError");

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init([](double rho11, cplx rho12, const std::string& basis) {
                 return make_density(rho11, rho12, basis_from(basis));
             }),
             py::arg("rho11"), py::arg("rho12") = cplx(0.0, 0.0),
             py::arg("basis") = "z")
        .def_readonly("rho11", &DensityMatrix::rho11)
        .def_readonly("rho12", &DensityMatrix::rho12)
        .def_property_readonly(
            "basis", [](const DensityMatrix& s) { return basis_name(s.basis); })
        .def("__repr__", [](const DensityMatrix& s) {
            return "DensityMatrix(rho11=" + std::to_string(s.rho11) +
                   ", rho12=(" + std::to_string(s.rho12.real()) + "+" +
                   std::to_string(s.rho12.imag()) + "j), basis='" +
                   basis_name(s.basis) + "')";
        });

    m.def("to_x_basis", &to_x_basis, py::arg("state"));
    m.def("min_eigenvalue", &min_eigenvalue, py::arg("state"));

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init(&make_params), py::arg("lambda_") = 1.0,
             py::arg("eta") = 0.0, py::arg("omega0") = 0.0,
             py::arg("omega_c") = 1.0, py::arg("temperature") = 0.0)
        .def_readonly("lambda_", &ModelParams::lambda)
        .def_readonly("eta", &ModelParams::eta)
        .def_readonly("omega0", &ModelParams::omega0)
        .def_readonly("omega_c", &ModelParams::omega_c)
        .def_property_readonly("temperature", [](const ModelParams& p) {
            return p.beta.temperature();
        });

    py::class_<Diagnostics>(m, "Diagnostics")
        .def_readonly("max_trace_error", &Diagnostics::max_trace_error)
        .def_readonly("min_eigenvalue", &Diagnostics::min_eigenvalue)
        .def_readonly("min_eigenvalue_time", &Diagnostics::min_eigenvalue_time)
        .def_readonly("warnings", &Diagnostics::warnings);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("diagnostics", &Trajectory::diagnostics);

    m.def(
        "solve",
        [](const std::string& scenario, const ModelParams& params,
           const DensityMatrix& rho0, double t_final, int n_steps) {
            return solve(scenario_from(scenario),
                         HybridRun{params, rho0, t_final, n_steps});
        },
        py::arg("scenario"), py::arg("params"), py::arg("rho0"),
        py::arg("t_final") = 10.0, py::arg("n_steps") = 2000,
        "Hybrid master-equation trajectory for scenario pd_z, pd_x, ad_z or "
        "ad_x; states come back in the Z basis.");

    py::class_<SplittingOutput>(m, "SplittingOutput")
        .def_readonly("t", &SplittingOutput::t)
        .def_readonly("rho11", &SplittingOutput::rho11)
        .def_readonly("rho12", &SplittingOutput::rho12)
        .def_readonly("rho21", &SplittingOutput::rho21);

    m.def(
        "splitting_trajectory",
        [](const ModelParams& params, const DensityMatrix& rho0, int n_steps,
           double dt, const std::string& convention) {
            SplittingRun run{params, rho0, n_steps, dt,
                             convention_from(convention),
                             SumStrategy::GrayCode};
            return splitting_trajectory(run);
        },
        py::arg("params"), py::arg("rho0"), py::arg("n_steps") = 16,
        py::arg("dt") = 0.0625, py::arg("convention") = "step_interval",
        "Exact 2^N branch sum for the dephasing bath with the x apparatus; "
        "one state per prefix time k*dt.");

    m.def("propagate_z_meas", &propagate_z_meas, py::arg("state"),
          py::arg("params"), py::arg("t"));
    m.def("propagate_x_meas", &propagate_x_meas, py::arg("state"),
          py::arg("params"), py::arg("t"));
    m.def("measurement_duration", &measurement_duration, py::arg("lambda_"),
          py::arg("f"),
          "Time for the apparatus damping factor to reach f: -ln(f)/(2 lambda^2).");

    m.def(
        "dephasing_exponent",
        [](double t, double eta, double omega_c, double temperature) {
            SpectralDensity sd{eta, omega_c};
            sd.validate();
            return dephasing_exponent(t, sd,
                                      InverseTemperature::from_temperature(temperature));
        },
        py::arg("t"), py::arg("eta"), py::arg("omega_c") = 1.0,
        py::arg("temperature") = 0.0,
        "Ohmic pure-dephasing exponent Gamma(t) <= 0; exp(Gamma) multiplies "
        "the coherence.");

    py::class_<ExpectationLine>(m, "ExpectationLine")
        .def_readonly("a", &ExpectationLine::a)
        .def_readonly("c", &ExpectationLine::c);

    py::class_<SamplePoint>(m, "SamplePoint")
        .def(py::init([](double tau, double b_hat, double sigma_b) {
                 return SamplePoint{tau, b_hat, sigma_b};
             }),
             py::arg("tau"), py::arg("b_hat"), py::arg("sigma_b") = 0.0)
        .def_readonly("tau", &SamplePoint::tau)
        .def_readonly("b_hat", &SamplePoint::b_hat)
        .def_readonly("sigma_b", &SamplePoint::sigma_b);

    py::class_<SyntheticExperiment>(m, "SyntheticExperiment")
        .def_readonly("line", &SyntheticExperiment::line)
        .def_readonly("points", &SyntheticExperiment::points);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("lambda_sq", &FitResult::lambda_sq)
        .def_readonly("std_error", &FitResult::std_error)
        .def_readonly("n_points", &FitResult::n_points);

    m.def("b_of_tau", &b_of_tau, py::arg("lambda_"), py::arg("tau"));
    m.def("apply_weak_meas", &apply_weak_meas, py::arg("rho0"),
          py::arg("theta"), py::arg("b"));
    m.def("expected_sigma_z", &expected_sigma_z, py::arg("rho0"),
          py::arg("theta"), py::arg("b"));
    m.def("synthesize_experiment", &synthesize_experiment, py::arg("rho0"),
          py::arg("theta"), py::arg("lambda_"), py::arg("taus"),
          py::arg("shots"), py::arg("seed"));
    m.def("fit_lambda_squared", &fit_lambda_squared, py::arg("points"));
}
