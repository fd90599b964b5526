#pragma once

#include <string>
#include <vector>

#include "ftm/bath.hpp"
#include "ftm/noiseless.hpp"

namespace ftm {

// Second-order (in the system-bath coupling) master-equation solvers for the
// monitored qubit. The four scenarios pair a bath coupling channel with a
// measurement axis; each one reduces to closed-form factors plus, where
// needed, a small ODE with time-dependent coefficients built from bath
// correlation integrals.
enum class BathCoupling { Dephasing, Dissipative };
enum class MeasurementAxis { Z, X };

struct Scenario {
    BathCoupling bath = BathCoupling::Dephasing;
    MeasurementAxis axis = MeasurementAxis::Z;
};

struct HybridRun {
    ModelParams params;
    DensityMatrix rho0;  // Z basis
    double t_final = 10.0;
    int n_steps = 2000;
};

struct Diagnostics {
    // Trace is carried structurally (rho22 = 1 - rho11), so this reports the
    // accumulated asymmetry of any redundant bookkeeping, 0 when none exists.
    double max_trace_error = 0.0;
    // Most negative eigenvalue seen along the trajectory and when it occurs.
    // Slightly negative values flag the edge of the weak-coupling expansion.
    double min_eigenvalue = 0.0;
    double min_eigenvalue_time = 0.0;
    std::vector<std::string> warnings;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;  // Z basis
    Diagnostics diagnostics;
};

// Dephasing bath, sigma_z apparatus: populations frozen, coherence carries
// the closed-form attenuation exponent on top of the apparatus damping.
Trajectory solve_pd_z(const HybridRun& run);

// Dephasing bath, sigma_x apparatus: time-convolutionless coherence ODE with
// memory-integral coefficients; populations stay on the bath-free relaxation.
Trajectory solve_pd_x(const HybridRun& run);

// Dissipative bath, sigma_z apparatus: population rate equation with
// cumulative emission/absorption rates, coherence in closed form.
Trajectory solve_ad_z(const HybridRun& run);

// Dissipative bath, sigma_x apparatus: independent population and coherence
// ODEs whose coefficients grow with the apparatus rate; a step-size gate
// rejects runs outside the stable region instead of integrating garbage.
Trajectory solve_ad_x(const HybridRun& run);

Trajectory solve(const Scenario& sc, const HybridRun& run);

std::string scenario_name(const Scenario& sc);

} // namespace ftm
