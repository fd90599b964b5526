#include "doctest.h"

#include <cmath>
#include <complex>

#include "ftm/bath.hpp"
#include "oracles.hpp"

using namespace ftm;

namespace {

bool close(cplx a, cplx b, double tol) {
    return std::abs(a - b) <= tol * (1.0 + std::abs(b));
}

} // namespace

TEST_CASE("safe_coth matches 1/tanh away from zero and saturates") {
    for (double x : {0.01, 0.5, 3.0, 19.0})
        CHECK(safe_coth(x) == doctest::Approx(1.0 / std::tanh(x)).epsilon(1e-13));
    CHECK(safe_coth(25.0) == 1.0);
    // Series region: coth(x) = 1/x + x/3 + O(x^3).
    double x = 1e-5;
    CHECK(safe_coth(x) == doctest::Approx(1.0 / x + x / 3.0).epsilon(1e-14));
}

TEST_CASE("occupation factors") {
    // 1/(1-e^{-x}) - 1/(e^x-1) = 1 for every x > 0, series branch included.
    for (double x : {1e-6, 1e-3, 0.2, 1.0, 10.0, 50.0})
        CHECK(emission_occupation(x) - absorption_occupation(x) ==
              doctest::Approx(1.0).epsilon(1e-12));
    CHECK(emission_occupation(0.5) ==
          doctest::Approx(1.0 / (1.0 - std::exp(-0.5))).epsilon(1e-13));
    CHECK(absorption_occupation(0.5) ==
          doctest::Approx(1.0 / std::expm1(0.5)).epsilon(1e-13));
    CHECK(emission_occupation(80.0) == 1.0);
}

TEST_CASE("ohmic spectral density") {
    SpectralDensity sd{0.4, 2.0};
    CHECK(ohmic_j(sd, 0.0) == 0.0);
    CHECK(ohmic_j(sd, 2.0) ==
          doctest::Approx(0.4 * 2.0 * std::exp(-1.0)).epsilon(1e-14));
    SpectralDensity sd2{0.8, 2.0};
    CHECK(ohmic_j(sd2, 1.3) == doctest::Approx(2.0 * ohmic_j(sd, 1.3)));
    CHECK_THROWS_AS((SpectralDensity{-0.1, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((SpectralDensity{0.1, 0.0}.validate()), DomainError);
}

TEST_CASE("phase kernel at zero temperature has the rational closed form") {
    for (double wc : {1.0, 2.5}) {
        SpectralDensity sd{1.0, wc};
        for (double s : {0.0, 0.3, 1.7, 5.0}) {
            cplx k = phase_kernel(s, sd, InverseTemperature::zero());
            double den = 1.0 + wc * wc * s * s;
            double re = wc * wc * (1.0 - wc * wc * s * s) / (den * den);
            double im = 2.0 * wc * wc * wc * s / (den * den);
            CHECK(close(k, cplx(re, im), 1e-9));
            // Same statement through the 1/z^2 form used by the oracle.
            CHECK(close(k, oracle::phase_kernel_zero_t(s, wc), 1e-9));
        }
    }
}

TEST_CASE("phase kernel at finite temperature matches the trigamma oracle") {
    SpectralDensity sd{1.0, 1.0};
    for (double beta : {0.5, 2.0, 5.0})
        for (double s : {0.0, 0.4, 2.1, 6.0}) {
            cplx k = phase_kernel(s, sd, InverseTemperature::finite(beta));
            CHECK(close(k, oracle::phase_kernel_thermal(s, 1.0, beta), 1e-8));
        }
    // The imaginary part carries no thermal factor at all.
    cplx hot = phase_kernel(1.3, sd, InverseTemperature::finite(0.5));
    cplx cold = phase_kernel(1.3, sd, InverseTemperature::zero());
    CHECK(hot.imag() == doctest::Approx(cold.imag()).epsilon(1e-9));
}

TEST_CASE("amplitude kernels match the trigamma oracles at finite temperature") {
    SpectralDensity sd{0.3, 1.5};
    for (double beta : {0.7, 3.0})
        for (double s : {0.0, 0.5, 2.4}) {
            auto k = amplitude_kernels(s, sd, InverseTemperature::finite(beta));
            CHECK(close(k.emission,
                        oracle::emission_kernel_thermal(s, 0.3, 1.5, beta), 1e-8));
            CHECK(close(k.absorption,
                        oracle::absorption_kernel_thermal(s, 0.3, 1.5, beta),
                        1e-8));
        }
}

TEST_CASE("amplitude kernels at zero temperature") {
    SpectralDensity sd{0.25, 2.0};
    for (double s : {0.0, 0.8, 3.1}) {
        auto k = amplitude_kernels(s, sd, InverseTemperature::zero());
        CHECK(k.absorption == cplx(0.0, 0.0));
        cplx z(1.0 / 2.0, -s);
        CHECK(close(k.emission, 0.25 / (z * z), 1e-9));
    }
}

TEST_CASE("equal-time sum rule: emission minus absorption integrates J") {
    // At s = 0 the difference is int J(w) dw = eta wc^2 at any temperature.
    SpectralDensity sd{0.6, 1.7};
    for (auto beta : {InverseTemperature::zero(), InverseTemperature::finite(0.8),
                      InverseTemperature::finite(4.0)}) {
        auto k = amplitude_kernels(0.0, sd, beta);
        cplx diff = k.emission - k.absorption;
        CHECK(diff.real() == doctest::Approx(0.6 * 1.7 * 1.7).epsilon(1e-9));
        CHECK(std::abs(diff.imag()) < 1e-10);
    }
}

TEST_CASE("kernel tables replay the pointwise kernels") {
    SpectralDensity sd{0.2, 1.0};
    auto beta = InverseTemperature::finite(1.5);
    auto table = build_kernel_table(KernelKind::Phase, 0.05, 8, sd, beta);
    REQUIRE(table.values.size() == 9);
    for (int k = 0; k <= 8; ++k)
        CHECK(std::abs(table.values[k] - phase_kernel(k * 0.05, sd, beta)) <
              1e-13);
    auto em = build_kernel_table(KernelKind::AmplitudeEmission, 0.1, 5, sd, beta);
    auto ab = build_kernel_table(KernelKind::AmplitudeAbsorption, 0.1, 5, sd,
                                 beta);
    for (int k = 0; k <= 5; ++k) {
        auto both = amplitude_kernels(k * 0.1, sd, beta);
        CHECK(std::abs(em.values[k] - both.emission) < 1e-13);
        CHECK(std::abs(ab.values[k] - both.absorption) < 1e-13);
    }
    CHECK_THROWS_AS(build_kernel_table(KernelKind::Phase, 0.0, 4, sd, beta),
                    DomainError);
    CHECK_THROWS_AS(build_kernel_table(KernelKind::Phase, 0.1, -1, sd, beta),
                    DomainError);
}

TEST_CASE("dephasing exponent, zero temperature log law") {
    for (double wc : {1.0, 3.0}) {
        SpectralDensity sd{0.35, wc};
        for (double t : {0.2, 1.0, 4.0, 12.0}) {
            double ref = -2.0 * 0.35 * std::log(1.0 + wc * wc * t * t);
            CHECK(dephasing_exponent(t, sd, InverseTemperature::zero()) ==
                  doctest::Approx(ref).epsilon(1e-8));
            CHECK(dephasing_exponent_direct(t, sd, InverseTemperature::zero()) ==
                  doctest::Approx(ref).epsilon(1e-8));
        }
    }
}

TEST_CASE("dephasing exponent, gamma route against quadrature route") {
    for (double beta : {0.5, 5.0})
        for (double eta : {0.1, 0.5}) {
            SpectralDensity sd{eta, 1.0};
            auto b = InverseTemperature::finite(beta);
            for (double t : {0.3, 1.0, 4.0, 10.0}) {
                double a = dephasing_exponent(t, sd, b);
                double q = dephasing_exponent_direct(t, sd, b);
                CHECK(std::abs(a - q) <= 1e-8 * (1.0 + std::abs(q)));
            }
        }
    // Exponent at zero time vanishes and the factor is monotone in t.
    SpectralDensity sd{0.2, 1.0};
    auto b = InverseTemperature::finite(2.0);
    CHECK(dephasing_exponent(0.0, sd, b) == 0.0);
    double prev = 0.0;
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        double g = dephasing_exponent(t, sd, b);
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("splitting weights, zero temperature closed form") {
    const double wc = 1.3, dt = 0.25, eta = 0.4;
    SpectralDensity sd{eta, wc};
    auto w = splitting_weights(6, dt, sd, InverseTemperature::zero());
    REQUIRE(int(w.col.size()) == 6);
    const double u = 1.0 / (wc * dt * wc * dt);
    for (int k = 0; k < 6; ++k) {
        double up = u + double(k + 1) * (k + 1);
        double um = u + double(k - 1) * (k - 1);
        double u0 = u + double(k) * k;
        CHECK(w.col[k] ==
              doctest::Approx(-eta * std::log(up * um / (u0 * u0)))
                  .epsilon(1e-12));
    }
    CHECK(w.col[0] ==
          doctest::Approx(-2.0 * eta * std::log(1.0 + wc * wc * dt * dt))
              .epsilon(1e-12));
    // Toeplitz accessor reads |m - k| off the stored column.
    CHECK(w(2, 5) == w(5, 2));
    CHECK(w(2, 5) == w.col[3]);
    CHECK(w(4, 4) == w.col[0]);
}

TEST_CASE("splitting weights column is a second difference of the exponent") {
    // col[k] = (Gamma_{k+1} + Gamma_{k-1} - 2 Gamma_k) / 2 with Gamma the
    // dephasing exponent on the step grid; holds at any temperature for the
    // per-step convention.
    const double dt = 0.3;
    SpectralDensity sd{0.25, 1.0};
    for (auto beta : {InverseTemperature::zero(), InverseTemperature::finite(1.2)}) {
        auto w = splitting_weights(8, dt, sd, beta);
        auto gamma = [&](int j) {
            return dephasing_exponent(std::abs(j) * dt, sd, beta);
        };
        for (int k = 0; k < 8; ++k) {
            double ref = 0.5 * (gamma(k + 1) + gamma(k - 1) - 2.0 * gamma(k));
            CHECK(std::abs(w.col[k] - ref) < 1e-8);
        }
    }
}

TEST_CASE("splitting weights, whole-duration convention against Simpson") {
    const int n = 6;
    const double dt = 0.2, eta = 0.3, wc = 1.0;
    SpectralDensity sd{eta, wc};
    for (auto beta : {InverseTemperature::zero(), InverseTemperature::finite(2.0)}) {
        auto w = splitting_weights(n, dt, sd, beta,
                                   WeightConvention::TotalTime);
        const double d = n * dt;
        for (int k = 0; k < n; ++k) {
            auto f = [&](double om) -> cplx {
                double coth = beta.is_zero_temperature()
                                  ? 1.0
                                  : safe_coth(0.5 * beta.beta() * om);
                double sh = std::sin(0.5 * om * d);
                return std::exp(-om / wc) * coth * std::cos(k * om * dt) * sh *
                       sh / om;
            };
            double ref =
                -8.0 * eta * oracle::simpson(f, 1e-12, 40.0 * wc, 100000).real();
            CHECK(std::abs(w.col[k] - ref) < 1e-7);
        }
    }
}

TEST_CASE("splitting weights argument guards") {
    SpectralDensity sd{0.1, 1.0};
    CHECK_THROWS_AS(splitting_weights(0, 0.1, sd, InverseTemperature::zero()),
                    DomainError);
    CHECK_THROWS_AS(splitting_weights(4, 0.0, sd, InverseTemperature::zero()),
                    DomainError);
    SpectralDensity off{0.0, 1.0};
    auto w = splitting_weights(5, 0.1, off, InverseTemperature::finite(1.0));
    for (double c : w.col) CHECK(c == 0.0);
}
