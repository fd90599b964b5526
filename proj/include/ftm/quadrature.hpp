#pragma once

#include <complex>
#include <functional>

namespace ftm {

// Composite 16-point Gauss-Legendre integration of a complex integrand over
// [a, b] split into `panels` equal panels. Panel counts are chosen by the
// caller to resolve the oscillation of the integrand (see panels_for).
std::complex<double> gl_integrate(const std::function<std::complex<double>(double)>& f,
                                  double a, double b, int panels);

// Same, but re-integrates with doubled panel count and requires the two
// results to agree to rel_tol; throws QuadratureError otherwise. Returns the
// finer result.
std::complex<double> gl_integrate_checked(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int panels, double rel_tol = 1e-9);

// Panel count for a frequency integral whose integrand oscillates like
// cos(omega * s) over a range of width ~40 omega_c.
int panels_for(double s, double omega_c);

} // namespace ftm
