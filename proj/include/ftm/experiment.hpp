#pragma once

#include <cstdint>
#include <vector>

#include "ftm/density_matrix.hpp"

namespace ftm {

// Two-apparatus test of the finite-duration measurement hypothesis: a
// partial (weak) measurement along the tilted axis
// sigma_theta = cos(theta) sigma_z + sin(theta) sigma_x shrinks coherences in
// the tilted basis to a fraction b, then a projective sigma_z readout
// estimates <sigma_z>. The readout average is linear in b, so sweeping the
// exposure time tau traces out b(tau) = exp(-2 lambda^2 tau).

// Post-measurement state: (1+b)/2 rho + (1-b)/2 sigma_theta rho sigma_theta.
// b = 1 leaves the state alone, b = 0 is a full collapse along the tilt axis.
DensityMatrix apply_weak_meas(const DensityMatrix& rho0, double theta, double b);

double b_of_tau(double lambda, double tau);

// <sigma_z>(tau) = a + c * b(tau); both constants depend only on the initial
// state and the tilt.
struct ExpectationLine {
    double a = 0.0;
    double c = 0.0;
};

ExpectationLine expectation_line(const DensityMatrix& rho0, double theta);

double expected_sigma_z(const DensityMatrix& rho0, double theta, double b);

// Separation between the weak (b ~ 1) and fully collapsing (b = 0) readings;
// the experimental error budget has to stay below this. Equals |c|.
double discriminator_delta_z(const DensityMatrix& rho0, double theta);

// Invert the readout line for b; DomainError when the line is flat (c == 0),
// since then the readout carries no information about b.
double extract_b(double measured_sigma_z, const ExpectationLine& line);

struct SamplePoint {
    double tau = 0.0;
    double b_hat = 0.0;
    double sigma_b = 0.0;  // one-sigma uncertainty; 0 means exact
};

struct SyntheticExperiment {
    ExpectationLine line;
    std::vector<SamplePoint> points;
};

// Finite-shot simulation of the full chain at each exposure time: Bernoulli
// readout counts, binomial error bars, and the line inversion. The draw is
// reproducible from the seed across platforms.
SyntheticExperiment synthesize_experiment(const DensityMatrix& rho0,
                                          double theta, double lambda,
                                          const std::vector<double>& taus,
                                          std::int64_t shots,
                                          std::uint64_t seed);

struct FitResult {
    double lambda_sq = 0.0;
    double std_error = 0.0;
    int n_points = 0;
};

// Weighted least squares of -ln(b_hat) against 2 tau through the origin.
// Weights come from the propagated uncertainties; if any point is exact the
// fit degrades gracefully to the unweighted estimator with a residual-based
// error. FitError for unusable inputs (b_hat <= 0, fewer than two points,
// nonpositive or all-equal exposure times).
FitResult fit_lambda_squared(const std::vector<SamplePoint>& points);

} // namespace ftm
