#pragma once

#include <complex>

namespace ftm {

// Principal-branch log Gamma(z) via a g = 7, 9-term Lanczos approximation,
// with the reflection formula for Re z < 0.5. Accurate to better than 1e-12
// relative for Re z > 0. Throws PoleError at non-positive integers.
std::complex<double> log_gamma_complex(std::complex<double> z);

} // namespace ftm
