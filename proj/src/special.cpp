#include "ftm/special.hpp"

#include <array>
#include <cmath>

#include "ftm/errors.hpp"

namespace ftm {

namespace {
// Lanczos coefficients for g = 7.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
} // namespace

std::complex<double> log_gamma_complex(std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 &&
        z.real() == std::floor(z.real()))
        throw PoleError("log_gamma_complex pole at non-positive integer");

    if (z.real() < 0.5) {
        // log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        std::complex<double> s = std::sin(M_PI * z);
        return std::log(M_PI) - std::log(s) - log_gamma_complex(1.0 - z);
    }

    std::complex<double> zm = z - 1.0;
    std::complex<double> x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (zm + double(i));
    std::complex<double> t = zm + 7.5;
    return 0.5 * std::log(2.0 * M_PI) + (zm + 0.5) * std::log(t) - t +
           std::log(x);
}

} // namespace ftm
