#include "ftm/bath.hpp"

#include <cmath>

#include "ftm/quadrature.hpp"
#include "ftm/special.hpp"

namespace ftm {

double ohmic_j(const SpectralDensity& sd, double omega) {
    return sd.eta * omega * std::exp(-omega / sd.omega_c);
}

double safe_coth(double x) {
    if (x >= 20.0) return 1.0;
    if (x < 1e-4) return 1.0 / x + x / 3.0 - x * x * x / 45.0;
    return 1.0 / std::tanh(x);
}

double emission_occupation(double x) {
    if (x < 1e-4) return 1.0 / x + 0.5 + x / 12.0;
    if (x > 37.0) return 1.0;
    return 1.0 / (-std::expm1(-x));
}

double absorption_occupation(double x) {
    if (x < 1e-4) return 1.0 / x - 0.5 + x / 12.0;
    if (x > 37.0) return std::exp(-x);
    return 1.0 / std::expm1(x);
}

namespace {

// Upper integration limit: the cutoff suppresses the integrand by e^{-40}
// beyond this point.
double omega_max(const SpectralDensity& sd) { return 40.0 * sd.omega_c; }

double thermal_coth(double omega, const InverseTemperature& beta) {
    if (beta.is_zero_temperature()) return 1.0;
    return safe_coth(0.5 * beta.beta() * omega);
}

} // namespace

cplx phase_kernel(double s, const SpectralDensity& sd,
                  const InverseTemperature& beta) {
    sd.validate();
    auto f = [&](double w) -> cplx {
        double damp = w * std::exp(-w / sd.omega_c);
        return damp * cplx(thermal_coth(w, beta) * std::cos(w * s),
                           std::sin(w * s));
    };
    return gl_integrate_checked(f, 0.0, omega_max(sd),
                                panels_for(s, sd.omega_c));
}

AmplitudeKernels amplitude_kernels(double s, const SpectralDensity& sd,
                                   const InverseTemperature& beta) {
    sd.validate();
    AmplitudeKernels out;
    const double wmax = omega_max(sd);
    const int panels = panels_for(s, sd.omega_c);
    if (beta.is_zero_temperature()) {
        auto fe = [&](double w) -> cplx {
            return ohmic_j(sd, w) * cplx(std::cos(w * s), std::sin(w * s));
        };
        out.emission = gl_integrate_checked(fe, 0.0, wmax, panels);
        out.absorption = cplx(0.0, 0.0);
        return out;
    }
    const double b = beta.beta();
    auto fe = [&](double w) -> cplx {
        return ohmic_j(sd, w) * emission_occupation(b * w) *
               cplx(std::cos(w * s), std::sin(w * s));
    };
    auto fa = [&](double w) -> cplx {
        return ohmic_j(sd, w) * absorption_occupation(b * w) *
               cplx(std::cos(w * s), -std::sin(w * s));
    };
    out.emission = gl_integrate_checked(fe, 0.0, wmax, panels);
    out.absorption = gl_integrate_checked(fa, 0.0, wmax, panels);
    return out;
}

KernelTable build_kernel_table(KernelKind kind, double dt, int n,
                               const SpectralDensity& sd,
                               const InverseTemperature& beta) {
    if (!(dt > 0.0)) throw DomainError("kernel table needs dt > 0");
    if (n < 0) throw DomainError("kernel table needs n >= 0");
    KernelTable table;
    table.kind = kind;
    table.dt = dt;
    table.values.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        double s = k * dt;
        switch (kind) {
        case KernelKind::Phase:
            table.values[k] = phase_kernel(s, sd, beta);
            break;
        case KernelKind::AmplitudeEmission:
            table.values[k] = amplitude_kernels(s, sd, beta).emission;
            break;
        case KernelKind::AmplitudeAbsorption:
            table.values[k] = amplitude_kernels(s, sd, beta).absorption;
            break;
        }
    }
    return table;
}

double dephasing_exponent_direct(double t, const SpectralDensity& sd,
                                 const InverseTemperature& beta) {
    sd.validate();
    if (sd.eta == 0.0 || t == 0.0) return 0.0;
    auto f = [&](double w) -> cplx {
        double sh = std::sin(0.5 * w * t);
        return std::exp(-w / sd.omega_c) * thermal_coth(w, beta) * sh * sh / w;
    };
    cplx integral = gl_integrate_checked(f, 0.0, omega_max(sd),
                                         panels_for(t, sd.omega_c));
    return -8.0 * sd.eta * integral.real();
}

double dephasing_exponent(double t, const SpectralDensity& sd,
                          const InverseTemperature& beta) {
    sd.validate();
    if (sd.eta == 0.0 || t == 0.0) return 0.0;
    if (beta.is_zero_temperature())
        return dephasing_exponent_direct(t, sd, beta);
    const double b = beta.beta();
    const double x = 1.0 / (sd.omega_c * b);
    const double y = t / b;
    double lg_x = log_gamma_complex(cplx(x, 0.0)).real();
    double lg_x1 = log_gamma_complex(cplx(x + 1.0, 0.0)).real();
    double ln_bracket =
        2.0 * (log_gamma_complex(cplx(x, y)).real() - lg_x) +
        2.0 * (log_gamma_complex(cplx(x + 1.0, y)).real() - lg_x1);
    return 2.0 * sd.eta * ln_bracket;
}

WeightMatrix splitting_weights(int n_steps, double dt,
                               const SpectralDensity& sd,
                               const InverseTemperature& beta,
                               WeightConvention conv) {
    sd.validate();
    if (n_steps < 1) throw DomainError("weight matrix needs n_steps >= 1");
    if (!(dt > 0.0)) throw DomainError("weight matrix needs dt > 0");
    WeightMatrix w;
    w.n = n_steps;
    w.dt = dt;
    w.col.assign(n_steps, 0.0);
    if (sd.eta == 0.0) return w;

    if (beta.is_zero_temperature() && conv == WeightConvention::StepInterval) {
        // Closed form of the zero-temperature integral.
        const double u = 1.0 / (sd.omega_c * dt * sd.omega_c * dt);
        for (int k = 0; k < n_steps; ++k) {
            double up = u + double(k + 1) * double(k + 1);
            double um = u + double(k - 1) * double(k - 1);
            double u0 = u + double(k) * double(k);
            w.col[k] = -sd.eta * std::log(up * um / (u0 * u0));
        }
        return w;
    }

    const double d = conv == WeightConvention::StepInterval ? dt
                                                            : n_steps * dt;
    for (int k = 0; k < n_steps; ++k) {
        auto f = [&](double om) -> cplx {
            double sh = std::sin(0.5 * om * d);
            return std::exp(-om / sd.omega_c) * thermal_coth(om, beta) *
                   std::cos(k * om * dt) * sh * sh / om;
        };
        cplx integral =
            gl_integrate_checked(f, 0.0, omega_max(sd),
                                 panels_for(k * dt + d, sd.omega_c));
        w.col[k] = -8.0 * sd.eta * integral.real();
    }
    return w;
}

} // namespace ftm
