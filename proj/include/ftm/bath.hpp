#pragma once

#include <cstdlib>
#include <vector>

#include "ftm/density_matrix.hpp"
#include "ftm/model.hpp"

namespace ftm {

// Ohmic spectral density with exponential cutoff:
// J(omega) = eta * omega * exp(-omega / omega_c).
struct SpectralDensity {
    double eta = 0.0;
    double omega_c = 1.0;

    void validate() const {
        if (!(eta >= 0.0)) throw DomainError("eta must be nonnegative");
        if (!(omega_c > 0.0)) throw DomainError("omega_c must be positive");
    }
};

double ohmic_j(const SpectralDensity& sd, double omega);

// coth(x) with the small-argument series below x = 1e-4 and saturation for
// large x. Used for the thermal factor coth(beta omega / 2).
double safe_coth(double x);

// Thermal occupation factors 1/(1 - e^{-x}) and 1/(e^x - 1) with series
// guards near x = 0; x = beta * omega.
double emission_occupation(double x);
double absorption_occupation(double x);

// Bath autocorrelation for a dephasing-type coupling, without the coupling
// strength eta:
//   integral_0^inf domega omega e^{-omega/omega_c}
//       [coth(beta omega / 2) cos(omega s) + i sin(omega s)].
// The sd argument supplies omega_c only. At zero temperature the real part
// has the closed form omega_c^2 (1 - omega_c^2 s^2)/(1 + omega_c^2 s^2)^2,
// which the tests pin against this quadrature.
cplx phase_kernel(double s, const SpectralDensity& sd,
                  const InverseTemperature& beta);

// Emission / absorption correlation functions for an exchange-type coupling,
// including eta through J:
//   emission(s)   = integral J(omega) e^{+i omega s} / (1 - e^{-beta omega})
//   absorption(s) = integral J(omega) e^{-i omega s} / (e^{beta omega} - 1)
// At zero temperature absorption vanishes identically and emission keeps only
// the vacuum part.
struct AmplitudeKernels {
    cplx emission;
    cplx absorption;
};

AmplitudeKernels amplitude_kernels(double s, const SpectralDensity& sd,
                                   const InverseTemperature& beta);

// Kernel samples on the uniform grid s_k = k dt, k = 0..n, computed once per
// solver run.
enum class KernelKind { Phase, AmplitudeEmission, AmplitudeAbsorption };

struct KernelTable {
    KernelKind kind;
    double dt = 0.0;
    std::vector<cplx> values;
};

KernelTable build_kernel_table(KernelKind kind, double dt, int n,
                               const SpectralDensity& sd,
                               const InverseTemperature& beta);

// Exponent of the coherence attenuation factor accumulated by a dephasing
// coupling up to time t:
//   -8 eta integral_0^inf (domega/omega) e^{-omega/omega_c}
//       coth(beta omega / 2) sin^2(omega t / 2).
// dephasing_exponent_direct always evaluates the quadrature;
// dephasing_exponent uses the gamma-function closed form at finite
// temperature and falls back to the quadrature at T = 0.
double dephasing_exponent_direct(double t, const SpectralDensity& sd,
                                 const InverseTemperature& beta);
double dephasing_exponent(double t, const SpectralDensity& sd,
                          const InverseTemperature& beta);

// Pair-interaction weights of the sequence expansion: symmetric Toeplitz,
// entry (m, n) depending only on |m - n|, so only the first column is stored.
// The trace weight of a branch string q is exp(sum_{m,n} q_m q_n W(m,n)).
struct WeightMatrix {
    int n = 0;
    double dt = 0.0;
    std::vector<double> col;

    double operator()(int m, int k) const { return col[std::abs(m - k)]; }
};

// The sin^2 factor inside the weight integral uses the step interval dt by
// default; TotalTime substitutes the full duration n dt for side-by-side
// comparison of the two readings.
enum class WeightConvention { StepInterval, TotalTime };

WeightMatrix splitting_weights(int n_steps, double dt,
                               const SpectralDensity& sd,
                               const InverseTemperature& beta,
                               WeightConvention conv = WeightConvention::StepInterval);

} // namespace ftm
