#include "ftm/experiment.hpp"

#include <cmath>
#include <random>

#include "ftm/errors.hpp"

namespace ftm {

namespace {

void require_z_basis(const DensityMatrix& rho) {
    if (rho.basis != Basis::Z)
        throw BasisError("experiment model works in the Z readout basis");
}

void require_angle(double theta) {
    if (!std::isfinite(theta)) throw DomainError("theta must be finite");
}

Mat2 tilt_axis(double theta) {
    return std::cos(theta) * pauli_z() + std::sin(theta) * pauli_x();
}

// Uniform double in [0, 1) from the top 53 bits; fixed mapping so the same
// seed reproduces the same experiment on every platform.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

DensityMatrix apply_weak_meas(const DensityMatrix& rho0, double theta,
                              double b) {
    require_z_basis(rho0);
    require_angle(theta);
    if (!(b >= 0.0 && b <= 1.0))
        throw DomainError("coherence fraction b must lie in [0, 1]");
    const Mat2 axis = tilt_axis(theta);
    const Mat2 mixed = axis * rho0.matrix() * axis;
    const Mat2 out = cplx(0.5 * (1.0 + b)) * rho0.matrix() +
                     cplx(0.5 * (1.0 - b)) * mixed;
    return make_density(out(0, 0).real(), out(0, 1), Basis::Z);
}

double b_of_tau(double lambda, double tau) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw DomainError("lambda must be nonnegative and finite");
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw DomainError("tau must be nonnegative and finite");
    return std::exp(-2.0 * lambda * lambda * tau);
}

ExpectationLine expectation_line(const DensityMatrix& rho0, double theta) {
    require_z_basis(rho0);
    require_angle(theta);
    const double sz0 = 2.0 * rho0.rho11 - 1.0;
    const double sx0 = 2.0 * rho0.rho12.real();
    const double cth = std::cos(theta);
    const double sth = std::sin(theta);
    ExpectationLine line;
    line.a = cth * cth * sz0 + cth * sth * sx0;
    line.c = sth * sth * sz0 - cth * sth * sx0;
    return line;
}

double expected_sigma_z(const DensityMatrix& rho0, double theta, double b) {
    const ExpectationLine line = expectation_line(rho0, theta);
    return line.a + line.c * b;
}

double discriminator_delta_z(const DensityMatrix& rho0, double theta) {
    // theta = n*pi tilts along the readout axis itself, which is blind to b
    // for every state; a flat line from a special state still reports 0.
    if (std::remainder(theta, 3.14159265358979323846) == 0.0)
        throw DomainError("tilt theta = n*pi cannot discriminate b");
    return std::abs(expectation_line(rho0, theta).c);
}

double extract_b(double measured_sigma_z, const ExpectationLine& line) {
    if (line.c == 0.0)
        throw DomainError(
            "readout line is flat; this tilt and initial state cannot see b");
    return (measured_sigma_z - line.a) / line.c;
}

SyntheticExperiment synthesize_experiment(const DensityMatrix& rho0,
                                          double theta, double lambda,
                                          const std::vector<double>& taus,
                                          std::int64_t shots,
                                          std::uint64_t seed) {
    if (shots < 1) throw DomainError("shots must be at least 1");
    SyntheticExperiment out;
    out.line = expectation_line(rho0, theta);
    if (out.line.c == 0.0)
        throw DomainError(
            "readout line is flat; this tilt and initial state cannot see b");
    std::mt19937_64 rng(seed);
    out.points.reserve(taus.size());
    for (double tau : taus) {
        const double b = b_of_tau(lambda, tau);
        const double p_up = 0.5 * (1.0 + out.line.a + out.line.c * b);
        std::int64_t ups = 0;
        for (std::int64_t s = 0; s < shots; ++s)
            if (uniform01(rng) < p_up) ++ups;
        const double mean = (2.0 * ups - shots) / static_cast<double>(shots);
        // Binomial spread of a +-1 readout around its sample mean.
        const double var = std::max(0.0, 1.0 - mean * mean);
        const double sigma_m = std::sqrt(var / static_cast<double>(shots));
        SamplePoint pt;
        pt.tau = tau;
        pt.b_hat = (mean - out.line.a) / out.line.c;
        pt.sigma_b = sigma_m / std::abs(out.line.c);
        out.points.push_back(pt);
    }
    return out;
}

FitResult fit_lambda_squared(const std::vector<SamplePoint>& points) {
    if (points.size() < 2)
        throw FitError("need at least two exposure times to fit a decay rate");
    bool all_equal = true;
    bool weighted = true;
    for (const auto& pt : points) {
        if (!(pt.tau > 0.0) || !std::isfinite(pt.tau))
            throw FitError("exposure times must be positive and finite");
        if (!(pt.b_hat > 0.0))
            throw FitError(
                "a nonpositive coherence fraction has no decay-rate reading");
        if (pt.tau != points.front().tau) all_equal = false;
        if (pt.sigma_b == 0.0) weighted = false;
    }
    if (all_equal)
        throw FitError("all exposure times are equal; the rate is unconstrained");

    // Model: -ln b = (2 tau) * lambda^2, a line through the origin in
    // x = 2 tau. Log transform maps sigma_b into sigma_y = sigma_b / b_hat.
    double swxx = 0.0, swxy = 0.0;
    for (const auto& pt : points) {
        const double x = 2.0 * pt.tau;
        const double y = -std::log(pt.b_hat);
        const double w = weighted
                             ? 1.0 / ((pt.sigma_b / pt.b_hat) * (pt.sigma_b / pt.b_hat))
                             : 1.0;
        swxx += w * x * x;
        swxy += w * x * y;
    }
    FitResult res;
    res.n_points = static_cast<int>(points.size());
    res.lambda_sq = swxy / swxx;
    if (weighted) {
        res.std_error = 1.0 / std::sqrt(swxx);
    } else {
        // Exact inputs carry no stated error; report the scatter instead.
        double ss = 0.0;
        for (const auto& pt : points) {
            const double r = -std::log(pt.b_hat) - res.lambda_sq * 2.0 * pt.tau;
            ss += r * r;
        }
        const double dof = static_cast<double>(points.size()) - 1.0;
        res.std_error = std::sqrt(ss / dof / swxx);
    }
    return res;
}

} // namespace ftm
