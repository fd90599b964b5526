#pragma once

#include <utility>

#include "ftm/density_matrix.hpp"
#include "ftm/model.hpp"

namespace ftm {

// The closed solutions of the bath-free monitored qubit are organised around
// Omega = sqrt(lambda^4 - 4 omega0^2), taken as a complex square root so that
// the overdamped (real Omega), oscillatory (imaginary Omega) and degenerate
// (Omega ~ 0) regimes share one code path.
enum class OmegaRegime { Hyperbolic, Degenerate, Oscillatory };

struct OmegaBranch {
    cplx omega;       // principal sqrt of omega_sq
    double omega_sq;  // lambda^4 - 4 omega0^2, exactly real
    OmegaRegime regime;
};

OmegaBranch omega_branch(const ModelParams& p);

// C(t) = cosh(Omega t) and S(t) = sinh(Omega t)/Omega. Both are real for
// every regime because Omega^2 is real; S switches to a Taylor series when
// |Omega t| < 1e-6 so the degenerate branch stays smooth.
struct CoshSinhc {
    double c;
    double s;
};

CoshSinhc cosh_sinhc(const OmegaBranch& br, double t);

// Apparatus coupled along sigma_z: populations frozen, coherence damped at
// rate 2 lambda^2 and rotated by exp(-i 2 omega0 t). Input and output are in
// the Z basis.
DensityMatrix propagate_z_meas(const DensityMatrix& state,
                               const ModelParams& p, double t);

// Apparatus coupled along sigma_x, solution expressed in the Z basis:
// populations relax to 1/2 at rate 2 lambda^2 while the coherence mixes with
// its conjugate through C and S.
DensityMatrix propagate_x_meas(const DensityMatrix& state,
                               const ModelParams& p, double t);

// One-step branch amplitudes for the sequence expansion of the sigma_x
// apparatus: cplus = C - 2i omega0 S (complex), cminus = lambda^2 S (real).
// The conjugate branch amplitude is plainly conj(cplus) since C and S are
// real.
struct CFactors {
    cplx cplus;
    double cminus;
};

CFactors c_factors(const ModelParams& p, double dt);

// Upper-triangular branch matrices A+ and A- built from the c factors; the
// product of any branch string collapses to a scalar chain times the last
// matrix, which is what the sequence solver exploits.
std::pair<Mat2, Mat2> step_matrices(const ModelParams& p, double dt);

// Time for the apparatus coherence-damping factor to fall to f:
// t_M = -ln(f) / (2 lambda^2).
double measurement_duration(double lambda, double f);

} // namespace ftm
