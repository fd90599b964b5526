#include "ftm/noiseless.hpp"

#include <cmath>

namespace ftm {

OmegaBranch omega_branch(const ModelParams& p) {
    p.validate();
    double l2 = p.lambda * p.lambda;
    double a = 2.0 * p.omega0;
    OmegaBranch br;
    br.omega_sq = l2 * l2 - a * a;
    br.omega = std::sqrt(cplx(br.omega_sq, 0.0));
    double scale = std::max(l2, std::abs(a));
    if (std::abs(l2 - std::abs(a)) <= 1e-9 * scale || scale == 0.0)
        br.regime = OmegaRegime::Degenerate;
    else
        br.regime = br.omega_sq > 0.0 ? OmegaRegime::Hyperbolic
                                      : OmegaRegime::Oscillatory;
    return br;
}

CoshSinhc cosh_sinhc(const OmegaBranch& br, double t) {
    cplx x = br.omega * t;
    CoshSinhc r;
    // cosh of a purely real or purely imaginary argument has exactly zero
    // imaginary part, so taking the real part loses nothing.
    r.c = std::cosh(x).real();
    if (std::abs(x) < 1e-6) {
        double w = br.omega_sq * t * t;
        r.s = t * (1.0 + w / 6.0 + w * w / 120.0);
    } else {
        r.s = (std::sinh(x) / br.omega).real();
    }
    return r;
}

DensityMatrix propagate_z_meas(const DensityMatrix& state,
                               const ModelParams& p, double t) {
    p.validate();
    if (state.basis != Basis::Z)
        throw BasisError("propagate_z_meas expects a Z-basis state");
    if (!std::isfinite(t)) throw DomainError("t must be finite");
    double l2 = p.lambda * p.lambda;
    DensityMatrix out = state;
    out.rho12 = state.rho12 * std::exp(-2.0 * l2 * t) *
                std::exp(cplx(0.0, -2.0 * p.omega0 * t));
    return out;
}

DensityMatrix propagate_x_meas(const DensityMatrix& state,
                               const ModelParams& p, double t) {
    p.validate();
    if (state.basis != Basis::Z)
        throw BasisError("propagate_x_meas expects a Z-basis state");
    if (!std::isfinite(t)) throw DomainError("t must be finite");
    double l2 = p.lambda * p.lambda;
    auto br = omega_branch(p);
    auto cs = cosh_sinhc(br, t);
    cplx cp(cs.c, -2.0 * p.omega0 * cs.s);
    double cm = l2 * cs.s;
    DensityMatrix out;
    out.basis = Basis::Z;
    out.rho11 = 0.5 + 0.5 * (2.0 * state.rho11 - 1.0) * std::exp(-2.0 * l2 * t);
    out.rho12 = std::exp(-l2 * t) *
                (cp * state.rho12 + cm * std::conj(state.rho12));
    return out;
}

CFactors c_factors(const ModelParams& p, double dt) {
    p.validate();
    if (!std::isfinite(dt)) throw DomainError("dt must be finite");
    auto br = omega_branch(p);
    auto cs = cosh_sinhc(br, dt);
    return CFactors{cplx(cs.c, -2.0 * p.omega0 * cs.s),
                    p.lambda * p.lambda * cs.s};
}

std::pair<Mat2, Mat2> step_matrices(const ModelParams& p, double dt) {
    auto cf = c_factors(p, dt);
    Mat2 aplus{{cf.cplus, cplx(cf.cminus), cplx(0), cplx(0)}};
    Mat2 aminus{{cplx(0), cplx(0), cplx(cf.cminus), std::conj(cf.cplus)}};
    return {aplus, aminus};
}

double measurement_duration(double lambda, double f) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw DomainError("lambda must be positive");
    if (!(f > 0.0) || !(f < 1.0))
        throw DomainError("f must lie strictly between 0 and 1");
    return -std::log(f) / (2.0 * lambda * lambda);
}

} // namespace ftm
