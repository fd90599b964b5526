#include "ftm/quadrature.hpp"

#include <array>
#include <cmath>

#include "ftm/errors.hpp"

namespace ftm {
namespace {

constexpr int kNodes = 16;

struct GaussRule {
    std::array<double, kNodes> x;
    std::array<double, kNodes> w;
};

// Nodes and weights on [-1, 1] by Newton iteration on the Legendre
// recurrence; converges to machine precision in a handful of steps.
GaussRule build_rule() {
    GaussRule r;
    const int n = kNodes;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

const GaussRule& rule() {
    static const GaussRule r = build_rule();
    return r;
}

} // namespace

std::complex<double> gl_integrate(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int panels) {
    if (panels < 1) panels = 1;
    const GaussRule& r = rule();
    const double h = (b - a) / panels;
    std::complex<double> total(0.0, 0.0);
    for (int p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h;
        std::complex<double> acc(0.0, 0.0);
        for (int i = 0; i < kNodes; ++i)
            acc += r.w[i] * f(mid + 0.5 * h * r.x[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

std::complex<double> gl_integrate_checked(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    int panels, double rel_tol) {
    auto coarse = gl_integrate(f, a, b, panels);
    auto fine = gl_integrate(f, a, b, 2 * panels);
    double err = std::abs(fine - coarse);
    double scale = std::abs(fine);
    if (err > rel_tol * scale && err > 1e-14 * (1.0 + scale))
        throw QuadratureError("frequency integral did not converge to " +
                              std::to_string(rel_tol) + " (error " +
                              std::to_string(err) + ")");
    return fine;
}

int panels_for(double s, double omega_c) {
    double suggested = 4.0 * std::abs(s) * omega_c;
    int p = suggested < 16.0 ? 16 : static_cast<int>(std::ceil(suggested));
    return p;
}

} // namespace ftm
