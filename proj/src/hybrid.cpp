#include "ftm/hybrid.hpp"

#include <cmath>
#include <sstream>

#include "ftm/errors.hpp"
#include "ftm/quadrature.hpp"

namespace ftm {

namespace {

// A step is rejected once dt times the local coefficient growth rate passes
// this bound; beyond it RK4 amplifies instead of integrating.
constexpr double kGateLimit = 2.5;
constexpr double kWeakCouplingEta = 0.2;

struct TimeGrid {
    int n = 0;
    double h = 0.0;
    std::vector<double> t;
};

TimeGrid make_grid(const HybridRun& run, int min_steps) {
    run.params.validate();
    if (run.rho0.basis != Basis::Z)
        throw BasisError("hybrid solvers expect a Z-basis initial state");
    if (!(run.t_final > 0.0) || !std::isfinite(run.t_final))
        throw DomainError("t_final must be positive and finite");
    if (run.n_steps < min_steps)
        throw DomainError("n_steps must be at least " +
                          std::to_string(min_steps) + " for this scenario");
    TimeGrid g;
    g.n = run.n_steps;
    g.h = run.t_final / run.n_steps;
    g.t.resize(g.n + 1);
    for (int k = 0; k <= g.n; ++k) g.t[k] = run.t_final * k / g.n;
    return g;
}

// Prefix convolution out[k] = integral_0^{t_k} kern(t_k - s) f(s) ds on the
// shared node grid. Composite Simpson, with a 3/8 tail on odd prefixes and a
// trapezoid for the single-cell prefix, keeps the values O(h^4) everywhere
// past the first node.
std::vector<cplx> convolve_prefix(const std::vector<cplx>& kern,
                                  const std::vector<cplx>& f, double h) {
    const int n = static_cast<int>(f.size()) - 1;
    std::vector<cplx> out(n + 1, cplx(0.0, 0.0));
    for (int k = 1; k <= n; ++k) {
        auto tap = [&](int j) { return kern[k - j] * f[j]; };
        if (k == 1) {
            out[k] = 0.5 * h * (tap(0) + tap(1));
            continue;
        }
        cplx simpson(0.0, 0.0);
        const int m = (k % 2 == 0) ? k : k - 3;
        if (m > 0) {
            simpson = tap(0) + tap(m);
            for (int j = 1; j < m; j += 2) simpson += 4.0 * tap(j);
            for (int j = 2; j < m; j += 2) simpson += 2.0 * tap(j);
        }
        cplx acc = (h / 3.0) * simpson;
        if (k % 2 != 0)
            acc += (3.0 * h / 8.0) *
                   (tap(m) + 3.0 * tap(m + 1) + 3.0 * tap(m + 2) + tap(k));
        out[k] = acc;
    }
    return out;
}

// Running integral of a sampled function: Simpson pairs reaching back two
// cells, seeded by a one-sided cubic estimate for the first cell.
std::vector<double> cumulative_prefix(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size()) - 1;
    std::vector<double> out(n + 1, 0.0);
    if (n >= 2)
        out[1] = h * (5.0 * f[0] + 8.0 * f[1] - f[2]) / 12.0;
    else if (n == 1)
        out[1] = 0.5 * h * (f[0] + f[1]);
    for (int k = 2; k <= n; ++k)
        out[k] = out[k - 2] + h * (f[k - 2] + 4.0 * f[k - 1] + f[k]) / 3.0;
    return out;
}

// Midpoint values of a node grid by 4-point Lagrange interpolation; O(h^4)
// like everything else feeding the integrator. Needs at least 4 nodes.
template <class T>
std::vector<T> half_nodes(const std::vector<T>& g) {
    const int n = static_cast<int>(g.size()) - 1;
    std::vector<T> out(n);
    for (int k = 0; k < n; ++k) {
        if (k == 0)
            out[k] = (5.0 * g[0] + 15.0 * g[1] - 5.0 * g[2] + g[3]) / 16.0;
        else if (k == n - 1)
            out[k] = (g[n - 3] - 5.0 * g[n - 2] + 15.0 * g[n - 1] + 5.0 * g[n]) / 16.0;
        else
            out[k] = (-g[k - 1] + 9.0 * g[k] + 9.0 * g[k + 1] - g[k + 2]) / 16.0;
    }
    return out;
}

// dr/dt = c1(t) r + c2(t) conj(r); coefficients sampled at nodes and
// midpoints. The conjugate channel is implied by r21 = conj(r12), so one
// complex ODE carries the Hermitian pair exactly.
struct PairCoeffs {
    std::vector<cplx> c1, c2, c1h, c2h;
};

std::vector<cplx> rk4_pair(const PairCoeffs& c, cplx r0, double h) {
    const int n = static_cast<int>(c.c1.size()) - 1;
    auto f = [](cplx c1, cplx c2, cplx v) { return c1 * v + c2 * std::conj(v); };
    std::vector<cplx> r(n + 1);
    r[0] = r0;
    for (int k = 0; k < n; ++k) {
        const cplx k1 = f(c.c1[k], c.c2[k], r[k]);
        const cplx k2 = f(c.c1h[k], c.c2h[k], r[k] + 0.5 * h * k1);
        const cplx k3 = f(c.c1h[k], c.c2h[k], r[k] + 0.5 * h * k2);
        const cplx k4 = f(c.c1[k + 1], c.c2[k + 1], r[k] + h * k3);
        r[k + 1] = r[k] + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return r;
}

// dy/dt = a(t) y + b(t) for a real scalar.
struct AffineCoeffs {
    std::vector<double> a, b, ah, bh;
};

std::vector<double> rk4_affine(const AffineCoeffs& c, double y0, double h) {
    const int n = static_cast<int>(c.a.size()) - 1;
    std::vector<double> y(n + 1);
    y[0] = y0;
    for (int k = 0; k < n; ++k) {
        const double k1 = c.a[k] * y[k] + c.b[k];
        const double k2 = c.ah[k] * (y[k] + 0.5 * h * k1) + c.bh[k];
        const double k3 = c.ah[k] * (y[k] + 0.5 * h * k2) + c.bh[k];
        const double k4 = c.a[k + 1] * (y[k] + h * k3) + c.b[k + 1];
        y[k + 1] = y[k] + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

// Largest |eigenvalue| of the real 2x2 generator behind c1 r + c2 conj(r).
double pair_growth(cplx c1, cplx c2) {
    const double a = c1.real();
    const double det = std::norm(c1) - std::norm(c2);
    const double disc = a * a - det;
    if (disc >= 0.0) return std::abs(a) + std::sqrt(disc);
    return std::sqrt(det);  // complex pair; det > a^2 >= 0 here
}

[[noreturn]] void step_size_failure(double rate, double t, double h) {
    std::ostringstream os;
    os << "coefficient growth rate " << rate << " at t = " << t
       << " gives dt * rate = " << rate * h << " > " << kGateLimit
       << "; the second-order expansion is outside its validity window here"
          " (reduce t_final, or weaken lambda/eta)";
    throw StepSizeError(os.str());
}

// NaN-aware: a rate that overflowed upstream must also reject the run.
void check_rate(double rate, double t, double h) {
    if (!(rate * h <= kGateLimit)) step_size_failure(rate, t, h);
}

void gate_pair(const PairCoeffs& c, const TimeGrid& g) {
    for (int k = 0; k <= g.n; ++k)
        check_rate(pair_growth(c.c1[k], c.c2[k]), g.t[k], g.h);
    for (int k = 0; k < g.n; ++k)
        check_rate(pair_growth(c.c1h[k], c.c2h[k]), g.t[k] + 0.5 * g.h, g.h);
}

void gate_scalar(const std::vector<double>& a, const TimeGrid& g) {
    for (int k = 0; k < static_cast<int>(a.size()); ++k)
        check_rate(std::abs(a[k]), g.t[std::min(k, g.n)], g.h);
}

void base_warnings(const HybridRun& run, double h, Diagnostics& d) {
    const auto& p = run.params;
    if (p.eta > kWeakCouplingEta) {
        std::ostringstream os;
        os << "eta = " << p.eta << " is beyond the weak-coupling regime"
           << " (<= " << kWeakCouplingEta
           << "); the neglected terms scale like eta^2";
        d.warnings.push_back(os.str());
    }
    const double scale =
        std::max({p.lambda * p.lambda, std::abs(p.omega0), p.omega_c});
    if (h * scale > 0.05) {
        std::ostringstream os;
        os << "dt = " << h << " is coarse against the fastest model rate "
           << scale << "; increase n_steps";
        d.warnings.push_back(os.str());
    }
}

void finish_diagnostics(Trajectory& tr) {
    double best = 1.0;
    double when = 0.0;
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
        const double ev = min_eigenvalue(tr.states[k]);
        if (ev < best) {
            best = ev;
            when = tr.times[k];
        }
    }
    tr.diagnostics.min_eigenvalue = best;
    tr.diagnostics.min_eigenvalue_time = when;
}

// eta = 0 collapses every scenario onto the bath-free closed forms; evaluate
// those directly instead of integrating a zero-coefficient ODE.
Trajectory closed_noiseless(const HybridRun& run, MeasurementAxis axis) {
    const TimeGrid g = make_grid(run, 1);
    Trajectory tr;
    tr.times = g.t;
    tr.states.resize(g.n + 1);
    base_warnings(run, g.h, tr.diagnostics);
    for (int k = 0; k <= g.n; ++k)
        tr.states[k] = (axis == MeasurementAxis::Z)
                           ? propagate_z_meas(run.rho0, run.params, g.t[k])
                           : propagate_x_meas(run.rho0, run.params, g.t[k]);
    finish_diagnostics(tr);
    return tr;
}

cplx phi2(cplx x) {
    // (e^x - 1 - x) / x^2 with its series near 0.
    if (std::abs(x) < 1e-3) return 0.5 + x / 6.0 + x * x / 24.0 + x * x * x / 120.0;
    return (std::exp(x) - 1.0 - x) / (x * x);
}

// Closed-form coherence exponent of the dissipative-bath sigma_z run: the
// double time integral of the damped bath correlation collapses to
// t^2 phi2(z t) inside the frequency integral, z = 2 lambda^2 + i(2 omega0 - w).
cplx ad_z_exponent(double t, const ModelParams& p) {
    const double lam2 = p.lambda * p.lambda;
    const double wmax = 40.0 * p.omega_c;
    auto f = [&](double w) -> cplx {
        const double th = p.beta.is_zero_temperature()
                              ? 1.0
                              : safe_coth(0.5 * p.beta.beta() * w);
        const cplx zt = cplx(2.0 * lam2, 2.0 * p.omega0 - w) * t;
        return w * std::exp(-w / p.omega_c) * th * (t * t) * phi2(zt);
    };
    return -p.eta * gl_integrate(f, 0.0, wmax, panels_for(t, p.omega_c));
}

}  // namespace

Trajectory solve_pd_z(const HybridRun& run) {
    const TimeGrid g = make_grid(run, 1);
    const auto& p = run.params;
    const SpectralDensity sd{p.eta, p.omega_c};
    const double lam2 = p.lambda * p.lambda;
    Trajectory tr;
    tr.times = g.t;
    tr.states.resize(g.n + 1);
    base_warnings(run, g.h, tr.diagnostics);
    for (int k = 0; k <= g.n; ++k) {
        const double t = g.t[k];
        double gamma = 0.0;
        if (p.eta > 0.0 && t > 0.0) gamma = dephasing_exponent(t, sd, p.beta);
        DensityMatrix st;
        st.rho11 = run.rho0.rho11;
        st.rho12 = run.rho0.rho12 *
                   std::exp(cplx(gamma - 2.0 * lam2 * t, -2.0 * p.omega0 * t));
        tr.states[k] = st;
    }
    finish_diagnostics(tr);
    return tr;
}

Trajectory solve_pd_x(const HybridRun& run) {
    if (run.params.eta == 0.0) return closed_noiseless(run, MeasurementAxis::X);
    const TimeGrid g = make_grid(run, 4);
    const auto& p = run.params;
    const SpectralDensity sd{p.eta, p.omega_c};
    const OmegaBranch br = omega_branch(p);
    const double lam2 = p.lambda * p.lambda;
    const double alpha = 2.0 * p.omega0;
    const int n = g.n;
    const double h = g.h;

    const KernelTable ph = build_kernel_table(KernelKind::Phase, h, n, sd, p.beta);
    std::vector<double> kap(n + 1);
    for (int k = 0; k <= n; ++k) kap[k] = ph.values[k].real();

    Trajectory tr;
    tr.times = g.t;
    tr.states.resize(n + 1);
    base_warnings(run, h, tr.diagnostics);

    std::vector<cplx> r;
    if (p.omega0 == 0.0) {
        // The coherence channels decouple: the combinations C -+ lambda^2 S
        // collapse to exp(-+ lambda^2 t), so both coefficients are cumulative
        // integrals. Computing them directly avoids the huge-cancellation sum
        // of the generic convolution form, and keeps the protected channel
        // integrable at any t.
        std::vector<double> fp(n + 1);
        for (int k = 0; k <= n; ++k)
            fp[k] = kap[k] * std::exp(-2.0 * lam2 * g.t[k]);
        std::vector<double> gp = cumulative_prefix(fp, h);
        for (auto& v : gp) v *= -4.0 * p.eta;
        AffineCoeffs cx;
        cx.a = gp;
        cx.ah = half_nodes(gp);
        cx.b.assign(n + 1, 0.0);
        cx.bh.assign(n, 0.0);
        gate_scalar(cx.a, g);
        const std::vector<double> x = rk4_affine(cx, run.rho0.rho12.real(), h);

        std::vector<double> y(n + 1, 0.0);
        if (run.rho0.rho12.imag() != 0.0) {
            // The mirrored channel's rate integrand grows like exp(2 lambda^2 u);
            // it is only built when the initial state excites it, and the gate
            // rejects horizons where the secular growth has taken over.
            std::vector<double> fm(n + 1);
            for (int k = 0; k <= n; ++k)
                fm[k] = kap[k] * std::exp(2.0 * lam2 * g.t[k]);
            std::vector<double> gm = cumulative_prefix(fm, h);
            for (auto& v : gm) v *= -4.0 * p.eta;
            AffineCoeffs cy;
            cy.a = gm;
            cy.ah = half_nodes(gm);
            cy.b.assign(n + 1, 0.0);
            cy.bh.assign(n, 0.0);
            gate_scalar(cy.a, g);
            y = rk4_affine(cy, run.rho0.rho12.imag(), h);
        }
        r.resize(n + 1);
        for (int k = 0; k <= n; ++k) r[k] = cplx(x[k], y[k]);
    } else {
        std::vector<cplx> P(n + 1), Ps(n + 1), k2(n + 1);
        std::vector<cplx> kP(n + 1), kPs(n + 1), kk2(n + 1);
        for (int k = 0; k <= n; ++k) {
            const CoshSinhc cs = cosh_sinhc(br, g.t[k]);
            P[k] = cplx(cs.c, alpha * cs.s);
            Ps[k] = std::conj(P[k]);
            k2[k] = lam2 * cs.s;
            kP[k] = kap[k] * P[k];
            kPs[k] = kap[k] * Ps[k];
            kk2[k] = kap[k] * k2[k];
        }
        const auto A1 = convolve_prefix(kPs, Ps, h);
        const auto A2 = convolve_prefix(kk2, k2, h);
        const auto A3 = convolve_prefix(kk2, Ps, h);
        const auto A4 = convolve_prefix(kP, k2, h);
        const auto B1 = convolve_prefix(kPs, k2, h);
        const auto B2 = convolve_prefix(kk2, P, h);
        const auto B3 = convolve_prefix(kP, P, h);
        const auto A1h = half_nodes(A1), A2h = half_nodes(A2);
        const auto A3h = half_nodes(A3), A4h = half_nodes(A4);
        const auto B1h = half_nodes(B1), B2h = half_nodes(B2);
        const auto B3h = half_nodes(B3);

        PairCoeffs c;
        c.c1.resize(n + 1);
        c.c2.resize(n + 1);
        c.c1h.resize(n);
        c.c2h.resize(n);
        for (int k = 0; k <= n; ++k) {
            c.c1[k] = -4.0 * p.eta *
                      (P[k] * (A1[k] - A2[k]) + k2[k] * (A3[k] - A4[k]));
            c.c2[k] = -4.0 * p.eta *
                      (P[k] * (B1[k] - B2[k]) + k2[k] * (A2[k] - B3[k]));
        }
        for (int k = 0; k < n; ++k) {
            const CoshSinhc cs = cosh_sinhc(br, g.t[k] + 0.5 * h);
            const cplx Pm(cs.c, alpha * cs.s);
            const cplx k2m(lam2 * cs.s, 0.0);
            c.c1h[k] = -4.0 * p.eta *
                       (Pm * (A1h[k] - A2h[k]) + k2m * (A3h[k] - A4h[k]));
            c.c2h[k] = -4.0 * p.eta *
                       (Pm * (B1h[k] - B2h[k]) + k2m * (A2h[k] - B3h[k]));
        }
        gate_pair(c, g);
        r = rk4_pair(c, run.rho0.rho12, h);
    }

    const double d0 = 2.0 * run.rho0.rho11 - 1.0;
    for (int k = 0; k <= n; ++k) {
        const double t = g.t[k];
        const CoshSinhc cs = cosh_sinhc(br, t);
        const double damp = std::exp(-lam2 * t);
        const cplx b1 = damp * cplx(cs.c, -alpha * cs.s);
        const double b2 = lam2 * damp * cs.s;
        DensityMatrix st;
        st.rho11 = 0.5 + 0.5 * d0 * std::exp(-2.0 * lam2 * t);
        st.rho12 = b1 * r[k] + b2 * std::conj(r[k]);
        tr.states[k] = st;
    }
    finish_diagnostics(tr);
    return tr;
}

Trajectory solve_ad_z(const HybridRun& run) {
    if (run.params.eta == 0.0) return closed_noiseless(run, MeasurementAxis::Z);
    const TimeGrid g = make_grid(run, 4);
    const auto& p = run.params;
    const SpectralDensity sd{p.eta, p.omega_c};
    const double lam2 = p.lambda * p.lambda;
    const int n = g.n;
    const double h = g.h;

    const KernelTable em =
        build_kernel_table(KernelKind::AmplitudeEmission, h, n, sd, p.beta);
    const KernelTable ab =
        build_kernel_table(KernelKind::AmplitudeAbsorption, h, n, sd, p.beta);

    // Time-local gain/loss rates are running integrals of the damped, detuned
    // bath correlations.
    std::vector<double> gabs(n + 1), gem(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double t = g.t[k];
        const double damp = std::exp(-2.0 * lam2 * t);
        const cplx rot = std::exp(cplx(0.0, 2.0 * p.omega0 * t));
        gabs[k] = damp * (rot * ab.values[k]).real();
        gem[k] = damp * (std::conj(rot) * em.values[k]).real();
    }
    const std::vector<double> Gabs = cumulative_prefix(gabs, h);
    const std::vector<double> Gem = cumulative_prefix(gem, h);

    AffineCoeffs c;
    c.a.resize(n + 1);
    c.b.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        c.a[k] = -2.0 * (Gabs[k] + Gem[k]);
        c.b[k] = 2.0 * Gabs[k];
    }
    c.ah = half_nodes(c.a);
    c.bh = half_nodes(c.b);

    Trajectory tr;
    tr.times = g.t;
    tr.states.resize(n + 1);
    base_warnings(run, h, tr.diagnostics);
    gate_scalar(c.a, g);
    const std::vector<double> r11 = rk4_affine(c, run.rho0.rho11, h);

    for (int k = 0; k <= n; ++k) {
        const double t = g.t[k];
        DensityMatrix st;
        st.rho11 = r11[k];
        if (run.rho0.rho12 != cplx(0.0, 0.0) && 2.0 * lam2 * t <= 700.0) {
            const cplx ex = ad_z_exponent(t, p) +
                            cplx(-2.0 * lam2 * t, -2.0 * p.omega0 * t);
            st.rho12 = run.rho0.rho12 * std::exp(ex);
        } else {
            // Either no coherence to track, or the apparatus factor has
            // underflowed to zero anyway.
            st.rho12 = cplx(0.0, 0.0);
        }
        tr.states[k] = st;
    }
    finish_diagnostics(tr);
    return tr;
}

Trajectory solve_ad_x(const HybridRun& run) {
    if (run.params.eta == 0.0) return closed_noiseless(run, MeasurementAxis::X);
    const TimeGrid g = make_grid(run, 4);
    const auto& p = run.params;
    const SpectralDensity sd{p.eta, p.omega_c};
    const OmegaBranch br = omega_branch(p);
    const double lam2 = p.lambda * p.lambda;
    const double alpha = 2.0 * p.omega0;
    const int n = g.n;
    const double h = g.h;

    const KernelTable em =
        build_kernel_table(KernelKind::AmplitudeEmission, h, n, sd, p.beta);
    const KernelTable ab =
        build_kernel_table(KernelKind::AmplitudeAbsorption, h, n, sd, p.beta);

    std::vector<cplx> a1(n + 1), a2(n + 1), b1(n + 1), b2(n + 1);
    std::vector<cplx> kabs(n + 1), kem(n + 1), gv(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double t = g.t[k];
        const CoshSinhc cs = cosh_sinhc(br, t);
        const double damp = std::exp(-lam2 * t);
        const double damp2 = damp * damp;
        a1[k] = 0.5 * (1.0 + damp2);
        a2[k] = 0.5 * (1.0 - damp2);
        b1[k] = damp * cplx(cs.c, -alpha * cs.s);
        b2[k] = lam2 * damp * cs.s;
        kabs[k] = std::conj(b1[k]) * ab.values[k];
        kem[k] = b1[k] * em.values[k];
        gv[k] = damp2 * (std::conj(em.values[k]) + ab.values[k]);
    }

    // Population: rate equation whose gain/loss mix through the apparatus
    // relaxation factors a1/a2.
    const auto U1 = convolve_prefix(kabs, a2, h);
    const auto U2 = convolve_prefix(kem, a1, h);
    const auto U3 = convolve_prefix(kabs, a1, h);
    const auto U4 = convolve_prefix(kem, a2, h);
    const auto U1h = half_nodes(U1), U2h = half_nodes(U2);
    const auto U3h = half_nodes(U3), U4h = half_nodes(U4);

    AffineCoeffs pc;
    pc.a.resize(n + 1);
    pc.b.resize(n + 1);
    pc.ah.resize(n);
    pc.bh.resize(n);
    for (int k = 0; k <= n; ++k) {
        const double grow = std::exp(2.0 * lam2 * g.t[k]);
        const double p1 = 2.0 * grow * (U1[k] - U2[k]).real();
        const double p2 = 2.0 * grow * (U3[k] - U4[k]).real();
        pc.a[k] = p1 - p2;
        pc.b[k] = p2;
    }
    for (int k = 0; k < n; ++k) {
        const double grow = std::exp(2.0 * lam2 * (g.t[k] + 0.5 * h));
        const double p1 = 2.0 * grow * (U1h[k] - U2h[k]).real();
        const double p2 = 2.0 * grow * (U3h[k] - U4h[k]).real();
        pc.ah[k] = p1 - p2;
        pc.bh[k] = p2;
    }

    // Coherence: one complex pair ODE; the interaction-picture coefficients
    // carry exp(+lambda^2 t) envelopes that cancel only after the final
    // change back to the physical picture.
    const auto X1 = convolve_prefix(gv, b1, h);
    const auto X2 = convolve_prefix(gv, b2, h);
    const auto X1h = half_nodes(X1), X2h = half_nodes(X2);

    PairCoeffs cc;
    cc.c1.resize(n + 1);
    cc.c2.resize(n + 1);
    cc.c1h.resize(n);
    cc.c2h.resize(n);
    for (int k = 0; k <= n; ++k) {
        const CoshSinhc cs = cosh_sinhc(br, g.t[k]);
        const double grow = std::exp(lam2 * g.t[k]);
        const cplx b1m = grow * cplx(cs.c, alpha * cs.s);
        const cplx b2m = -lam2 * grow * cs.s;
        cc.c1[k] = -(b1m * X1[k] + b2m * std::conj(X2[k]));
        cc.c2[k] = -(b1m * X2[k] + b2m * std::conj(X1[k]));
    }
    for (int k = 0; k < n; ++k) {
        const CoshSinhc cs = cosh_sinhc(br, g.t[k] + 0.5 * h);
        const double grow = std::exp(lam2 * (g.t[k] + 0.5 * h));
        const cplx b1m = grow * cplx(cs.c, alpha * cs.s);
        const cplx b2m = -lam2 * grow * cs.s;
        cc.c1h[k] = -(b1m * X1h[k] + b2m * std::conj(X2h[k]));
        cc.c2h[k] = -(b1m * X2h[k] + b2m * std::conj(X1h[k]));
    }

    Trajectory tr;
    tr.times = g.t;
    tr.states.resize(n + 1);
    base_warnings(run, h, tr.diagnostics);
    gate_scalar(pc.a, g);
    gate_pair(cc, g);
    const std::vector<double> r11 = rk4_affine(pc, run.rho0.rho11, h);
    const std::vector<cplx> r12 = rk4_pair(cc, run.rho0.rho12, h);

    for (int k = 0; k <= n; ++k) {
        const double damp2 = std::exp(-2.0 * lam2 * g.t[k]);
        DensityMatrix st;
        st.rho11 = 0.5 + 0.5 * (2.0 * r11[k] - 1.0) * damp2;
        st.rho12 = b1[k] * r12[k] + b2[k].real() * std::conj(r12[k]);
        tr.states[k] = st;
    }
    finish_diagnostics(tr);
    return tr;
}

Trajectory solve(const Scenario& sc, const HybridRun& run) {
    if (sc.bath == BathCoupling::Dephasing)
        return sc.axis == MeasurementAxis::Z ? solve_pd_z(run) : solve_pd_x(run);
    return sc.axis == MeasurementAxis::Z ? solve_ad_z(run) : solve_ad_x(run);
}

std::string scenario_name(const Scenario& sc) {
    std::string out = sc.bath == BathCoupling::Dephasing ? "pd" : "ad";
    out += sc.axis == MeasurementAxis::Z ? "_z" : "_x";
    return out;
}

} // namespace ftm
