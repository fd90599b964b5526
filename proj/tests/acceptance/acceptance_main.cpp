// Release gates for the simulator. Each criterion prints exactly one
// PASS/FAIL line with its measured margin and pinned tolerance; the process
// exit status is the number of failed criteria. Gates that compare against
// quadrature or closed forms use routes independent of the library path under
// test wherever one exists.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ftm/hybrid.hpp"
#include "ftm/runner.hpp"
#include "../oracles.hpp"

using namespace ftm;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

const Scenario kAllScenarios[] = {
    {BathCoupling::Dephasing, MeasurementAxis::Z},
    {BathCoupling::Dephasing, MeasurementAxis::X},
    {BathCoupling::Dissipative, MeasurementAxis::Z},
    {BathCoupling::Dissipative, MeasurementAxis::X},
};

DensityMatrix noiseless_ref(const DensityMatrix& rho0, const ModelParams& p,
                            MeasurementAxis axis, double t) {
    return axis == MeasurementAxis::Z ? propagate_z_meas(rho0, p, t)
                                      : propagate_x_meas(rho0, p, t);
}

// 1. Decoupled bath: every solver route lands on the closed propagators.
Outcome c1_noiseless_limit() {
    constexpr double kTol = 1e-8;
    double worst = 0.0;
    const DensityMatrix rho0 = make_density(0.7, cplx(0.2, -0.1));
    for (double lambda : {0.5, 1.0, 2.0})
        for (double omega0 : {0.0, 1.0}) {
            HybridRun run;
            run.params.lambda = lambda;
            run.params.omega0 = omega0;
            run.params.eta = 0.0;
            run.rho0 = rho0;
            run.t_final = 10.0;
            run.n_steps = 1000;
            for (const Scenario& sc : kAllScenarios) {
                Trajectory tr = solve(sc, run);
                for (std::size_t k = 0; k < tr.states.size(); k += 50) {
                    DensityMatrix ref =
                        noiseless_ref(rho0, run.params, sc.axis, tr.times[k]);
                    worst = std::max(worst, max_abs_diff(tr.states[k], ref));
                }
            }
            SplittingRun sr;
            sr.params = run.params;
            sr.rho0 = rho0;
            sr.n_steps = 16;
            sr.dt = 10.0 / 16.0;
            for (const SplittingOutput& node : splitting_trajectory(sr)) {
                DensityMatrix ref = propagate_x_meas(rho0, run.params, node.t);
                worst = std::max(
                    worst, std::max(std::abs(node.rho11 - ref.rho11),
                                    std::abs(node.rho12 - ref.rho12)));
            }
        }
    return {worst <= kTol,
            fmt("max deviation from closed propagators %.3e (tol %.0e)", worst,
                kTol)};
}

// 2. Dephasing bath, z apparatus: frozen populations and a coherence modulus
// that matches a direct-quadrature evaluation of the attenuation exponent.
Outcome c2_pd_z_structure() {
    constexpr double kPopTol = 1e-12;
    constexpr double kRelTol = 1e-6;
    double worst_pop = 0.0, worst_rel = 0.0;
    for (double beta : {0.5, 5.0})
        for (double eta : {0.1, 0.5}) {
            HybridRun run;
            run.params.lambda = 1.0;
            run.params.omega0 = 0.5;
            run.params.eta = eta;
            run.params.beta = InverseTemperature::finite(beta);
            run.rho0 = make_density(0.7, cplx(0.25, -0.1));
            run.t_final = 5.0;
            run.n_steps = 500;
            Trajectory tr = solve_pd_z(run);
            SpectralDensity sd{eta, run.params.omega_c};
            const double m0 = std::abs(run.rho0.rho12);
            const double l2 = run.params.lambda * run.params.lambda;
            for (int k : {100, 250, 500}) {
                worst_pop = std::max(
                    worst_pop, std::abs(tr.states[k].rho11 - run.rho0.rho11));
                double t = tr.times[k];
                double ref =
                    m0 *
                    std::exp(dephasing_exponent_direct(t, sd, run.params.beta) -
                             2.0 * l2 * t);
                worst_rel = std::max(
                    worst_rel, std::abs(std::abs(tr.states[k].rho12) - ref) / ref);
            }
        }
    return {worst_pop <= kPopTol && worst_rel <= kRelTol,
            fmt("population drift %.3e (tol %.0e), coherence modulus rel err "
                "%.3e (tol %.0e)",
                worst_pop, kPopTol, worst_rel, kRelTol)};
}

// 3. Single-step thermal weight against plain Simpson quadrature, and the
// finite-beta weight column converging onto the zero-temperature closed form.
Outcome c3_thermal_weight() {
    constexpr double kTolSingle = 1e-9;
    constexpr double kTolZeroT = 1e-5;
    const double dt = 0.3, eta = 0.25, wc = 1.0, beta = 2.0;
    auto w1 = splitting_weights(1, dt, {eta, wc}, InverseTemperature::finite(beta));
    auto integrand = [&](double om) -> cplx {
        double sh = std::sin(0.5 * om * dt);
        return std::exp(-om / wc) * safe_coth(0.5 * beta * om) * sh * sh / om;
    };
    double expo_ref =
        -8.0 * eta * oracle::simpson(integrand, 1e-12, 40.0 * wc, 200000).real();
    double d_single = std::abs(std::exp(w1.col[0]) - std::exp(expo_ref));

    auto wz = splitting_weights(8, 0.25, {eta, wc}, InverseTemperature::zero());
    auto wb = splitting_weights(8, 0.25, {eta, wc},
                                InverseTemperature::finite(1e6 / wc));
    double d_cold = 0.0;
    for (int k = 0; k < 8; ++k)
        d_cold = std::max(d_cold, std::abs(wz.col[k] - wb.col[k]));
    return {d_single <= kTolSingle && d_cold <= kTolZeroT,
            fmt("single-step weight vs quadrature %.3e (tol %.0e), beta=1e6 "
                "column vs T=0 closed form %.3e (tol %.0e)",
                d_single, kTolSingle, d_cold, kTolZeroT)};
}

double cross_solver_gap(double eta) {
    SplittingRun sr;
    sr.params.lambda = 1.0;
    sr.params.eta = eta;
    sr.rho0 = make_density(0.5, cplx(0.5, 0.0));
    sr.n_steps = 16;
    sr.dt = 1.0 / 16.0;
    auto nodes = splitting_trajectory(sr);

    HybridRun run;
    run.params = sr.params;
    run.rho0 = sr.rho0;
    run.t_final = 1.0;
    run.n_steps = 1600;
    Trajectory tr = solve_pd_x(run);

    double gap = 0.0;
    for (int k = 0; k <= 16; ++k)
        gap = std::max(gap,
                       std::abs(tr.states[100 * k].rho12 - nodes[k].rho12));
    return gap;
}

// 4. The second-order route tracks the exact branch sum at weak coupling and
// degrades monotonically when the coupling is pushed.
Outcome c4_cross_solver() {
    constexpr double kTol = 0.01;
    double weak = cross_solver_gap(0.05);
    double strong = cross_solver_gap(0.5);
    return {weak < kTol && strong > weak,
            fmt("|rho12| gap %.3e at eta=0.05 (tol %.0e), %.3e at eta=0.5 "
                "(must exceed the weak-coupling gap)",
                weak, kTol, strong)};
}

// 5. Stronger monitoring protects the measured-axis population. The initial
// state is the +x eigenstate; the deviation is read in the measured (x)
// basis, where the bath-driven population transfer actually shows up.
Outcome c5_lambda_protection() {
    constexpr double kSlack = 1e-12;
    bool ok = true;
    std::string parts;
    for (const Scenario sc : {kAllScenarios[1], kAllScenarios[3]}) {
        double prev = -1.0;
        std::vector<double> devs;
        for (double lambda : {0.5, 1.0, 2.0}) {
            HybridRun run;
            run.params.lambda = lambda;
            run.params.eta = 0.25;
            run.rho0 = make_density(0.5, cplx(0.5, 0.0));
            run.t_final = 1.0;
            run.n_steps = 1000;
            Trajectory tr = solve(sc, run);
            double dev = std::abs(to_x_basis(tr.states.back()).rho11 - 1.0);
            devs.push_back(dev);
            if (prev >= 0.0 && dev > prev + kSlack) ok = false;
            prev = dev;
        }
        parts += fmt("%s%s: %.3e >= %.3e >= %.3e", parts.empty() ? "" : "; ",
                     scenario_name(sc).c_str(), devs[0], devs[1], devs[2]);
    }
    return {ok, parts + " across lambda = 0.5, 1, 2"};
}

// 6. Degenerate levels at finite temperature: relaxation from the excited
// state ends near 1/2, and the balanced state should hold 1/2 throughout.
Outcome c6_thermal_equilibrium() {
    constexpr double kBandLo = 0.45, kBandHi = 0.55;
    constexpr double kHoldTol = 1e-3;
    HybridRun run;
    run.params.lambda = 0.0;
    run.params.eta = 0.1;
    run.params.beta = InverseTemperature::finite(1.0);
    run.rho0 = make_density(1.0, cplx(0.0, 0.0));
    run.t_final = 30.0;
    run.n_steps = 3000;
    Trajectory relax = solve_ad_z(run);
    double final_pop = relax.states.back().rho11;

    run.rho0 = make_density(0.5, cplx(0.0, 0.0));
    Trajectory hold = solve_ad_z(run);
    double worst_hold = 0.0;
    for (const DensityMatrix& s : hold.states)
        worst_hold = std::max(worst_hold, std::abs(s.rho11 - 0.5));

    bool pass = final_pop >= kBandLo && final_pop <= kBandHi &&
                worst_hold <= kHoldTol;
    return {pass,
            fmt("rho11(30) = %.4f from the excited state (band [%.2f, %.2f]); "
                "balanced start drifts up to %.3e (tol %.0e)",
                final_pop, kBandLo, kBandHi, worst_hold, kHoldTol)};
}

// 7. Finite-time-measurement protection of a decaying level: at a time where
// the unmonitored qubit has lost most of its excitation, the strongly
// monitored one has kept nearly all of it.
Outcome c7_zeno_protection() {
    constexpr double kDecayed = 0.6, kRetained = 0.9;
    auto populations = [](double lambda) {
        HybridRun run;
        run.params.lambda = lambda;
        run.params.omega0 = 1.0;
        run.params.eta = 0.25;
        run.params.beta = InverseTemperature::finite(1.0);
        run.rho0 = make_density(1.0, cplx(0.0, 0.0));
        run.t_final = 5.0;
        run.n_steps = 1000;
        return solve_ad_z(run);
    };
    Trajectory idle = populations(0.0);
    Trajectory watched = populations(3.0);
    for (std::size_t k = 0; k < idle.states.size(); ++k)
        if (idle.states[k].rho11 < kDecayed &&
            watched.states[k].rho11 > kRetained)
            return {true, fmt("at t = %.2f: rho11 = %.3f unmonitored vs %.3f "
                              "at lambda = 3 (thresholds %.1f / %.1f)",
                              idle.times[k], idle.states[k].rho11,
                              watched.states[k].rho11, kDecayed, kRetained)};
    return {false,
            fmt("no time with unmonitored rho11 < %.1f and monitored rho11 > "
                "%.1f; endpoints %.3f vs %.3f",
                kDecayed, kRetained, idle.states.back().rho11,
                watched.states.back().rho11)};
}

// 8. The duration formula inverts the coherence damping factor.
Outcome c8_measurement_duration() {
    constexpr double kTol = 1e-12;
    std::mt19937 rng(4242u);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    const DensityMatrix rho0 = make_density(0.5, cplx(0.3, 0.1));
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        ModelParams p;
        p.lambda = uni(0.3, 2.0);
        p.omega0 = uni(0.0, 1.0);
        double f = uni(0.02, 0.98);
        double t = measurement_duration(p.lambda, f);
        double ratio = std::abs(propagate_z_meas(rho0, p, t).rho12) /
                       std::abs(rho0.rho12);
        worst = std::max(worst, std::abs(ratio - f));
    }
    return {worst <= kTol,
            fmt("worst |coherence ratio - f| = %.3e over 20 random pairs "
                "(tol %.0e)",
                worst, kTol)};
}

// 9. Weak-measurement chain: perpendicular tilt readout law, the damping
// factor from the z apparatus, and the rate fit with and without shot noise.
Outcome c9_experiment_chain() {
    constexpr double kLineTol = 1e-14;
    constexpr double kCoreTol = 1e-12;
    constexpr double kFitTol = 1e-10;
    std::mt19937 rng(99u);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    double worst_line = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        double r = uni(0.0, 0.99), ct = uni(-1.0, 1.0), ph = uni(0.0, 2.0 * kPi);
        double st = std::sqrt(1.0 - ct * ct);
        DensityMatrix rho = make_density(
            0.5 * (1.0 + r * ct),
            0.5 * r * st * cplx(std::cos(ph), -std::sin(ph)));
        double b = uni(0.0, 1.0);
        double sz0 = 2.0 * rho.rho11 - 1.0;
        worst_line = std::max(
            worst_line,
            std::abs(expected_sigma_z(rho, 0.5 * kPi, b) - b * sz0));
    }

    // b realised by the apparatus Lindbladian itself.
    double worst_core = 0.0;
    const DensityMatrix plus = make_density(0.5, cplx(0.5, 0.0));
    for (double tau : default_tau_grid()) {
        ModelParams p;
        p.lambda = 1.2;
        double b_core =
            std::abs(propagate_z_meas(plus, p, tau).rho12) / 0.5;
        worst_core =
            std::max(worst_core, std::abs(b_core - b_of_tau(1.2, tau)));
    }

    std::vector<SamplePoint> exact;
    for (double tau : default_tau_grid())
        exact.push_back({tau, b_of_tau(1.2, tau), 0.0});
    FitResult clean = fit_lambda_squared(exact);
    double clean_err = std::abs(clean.lambda_sq - 1.44);

    auto syn = synthesize_experiment(make_density(1.0, cplx(0.0, 0.0)),
                                     0.5 * kPi, 1.2, default_tau_grid(), 10000,
                                     20240817u);
    FitResult noisy = fit_lambda_squared(syn.points);
    double noisy_err = std::abs(noisy.lambda_sq - 1.44);

    bool pass = worst_line <= kLineTol && worst_core <= kCoreTol &&
                clean_err <= kFitTol && noisy_err <= 3.0 * noisy.std_error;
    return {pass,
            fmt("readout line %.1e (tol %.0e), apparatus b %.1e (tol %.0e), "
                "noiseless fit %.1e (tol %.0e), seeded fit %.4f +/- %.4f vs "
                "1.44",
                worst_line, kLineTol, worst_core, kCoreTol, clean_err, kFitTol,
                noisy.lambda_sq, noisy.std_error)};
}

double richardson_order(const Scenario& sc, const HybridRun& base) {
    auto at = [&](int n) {
        HybridRun run = base;
        run.n_steps = n;
        return solve(sc, run).states.back();
    };
    DensityMatrix a = at(250), b = at(500), c = at(1000);
    double e1 = max_abs_diff(a, b);
    double e2 = max_abs_diff(b, c);
    if (e2 == 0.0) return 10.0;  // below rounding, better than any target
    return std::log2(e1 / e2);
}

// 10. Trajectory samples stay physical, and the step-size dependence of each
// ODE-backed scenario shows at least fourth-order-minus-slack convergence.
// The z-apparatus dephasing route is nodewise closed-form, so its gate is
// exact grid consistency instead of an order.
Outcome c10_numerical_hygiene() {
    constexpr double kStructTol = 1e-10;
    constexpr double kOrderMin = 3.5;
    constexpr double kGridTol = 1e-12;

    double worst_struct = 0.0;
    for (const Scenario& sc : kAllScenarios) {
        HybridRun run;
        run.params.lambda = 1.0;
        run.params.omega0 = 0.4;
        run.params.eta = 0.15;
        run.params.beta = InverseTemperature::finite(2.0);
        run.rho0 = make_density(0.7, cplx(0.2, -0.1));
        run.t_final = sc == kAllScenarios[3] ? 1.0 : 4.0;
        run.n_steps = 500;
        for (const DensityMatrix& s : solve(sc, run).states) {
            Mat2 m = s.matrix();
            worst_struct =
                std::max({worst_struct, std::abs(m.trace() - cplx(1.0, 0.0)),
                          std::abs(m(0, 1) - std::conj(m(1, 0)))});
        }
    }
    // The branch-sum route accumulates rho21 independently; Hermiticity there
    // is a real check, not bookkeeping.
    SplittingRun sr;
    sr.params.lambda = 1.0;
    sr.params.eta = 0.25;
    sr.params.beta = InverseTemperature::finite(1.5);
    sr.rho0 = make_density(0.6, cplx(0.3, -0.15));
    sr.n_steps = 12;
    sr.dt = 0.1;
    for (const SplittingOutput& node : splitting_trajectory(sr))
        worst_struct = std::max(worst_struct,
                                std::abs(node.rho21 - std::conj(node.rho12)));

    HybridRun ode;
    ode.params.lambda = 1.0;
    ode.params.omega0 = 0.5;
    ode.params.eta = 0.1;
    ode.params.beta = InverseTemperature::finite(2.0);
    ode.rho0 = make_density(0.7, cplx(0.2, -0.1));
    ode.t_final = 4.0;
    double worst_order = 100.0;
    std::string orders;
    for (const Scenario& sc :
         {kAllScenarios[1], kAllScenarios[2], kAllScenarios[3]}) {
        HybridRun run = ode;
        if (sc == kAllScenarios[3]) {
            run.t_final = 1.0;
            run.params.eta = 0.25;
        }
        double order = richardson_order(sc, run);
        orders += fmt("%s %.2f ", scenario_name(sc).c_str(), order);
        worst_order = std::min(worst_order, order);
    }

    HybridRun grid;
    grid.params.lambda = 1.0;
    grid.params.omega0 = 0.5;
    grid.params.eta = 0.3;
    grid.params.beta = InverseTemperature::finite(1.0);
    grid.rho0 = make_density(0.7, cplx(0.25, -0.1));
    grid.t_final = 5.0;
    grid.n_steps = 250;
    Trajectory coarse = solve_pd_z(grid);
    grid.n_steps = 500;
    Trajectory fine = solve_pd_z(grid);
    double grid_dev = 0.0;
    for (int k = 0; k <= 250; ++k)
        grid_dev = std::max(grid_dev,
                            max_abs_diff(coarse.states[k], fine.states[2 * k]));

    bool pass = worst_struct <= kStructTol && worst_order >= kOrderMin &&
                grid_dev <= kGridTol;
    return {pass,
            fmt("trace/Hermiticity %.1e (tol %.0e); orders %s(min %.1f); pd_z "
                "grid consistency %.1e (tol %.0e)",
                worst_struct, kStructTol, orders.c_str(), kOrderMin, grid_dev,
                kGridTol)};
}

std::map<std::string, std::string> snapshot_dir(const std::string& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        out[entry.path().string()] = os.str();
    }
    return out;
}

// 11. Repeated identical CLI invocations produce byte-identical files.
Outcome c11_cli_determinism() {
#ifndef FTMSIM_CLI_PATH
    return {false, "CLI path not compiled in"};
#else
    const std::string scratch = "acceptance_scratch";
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    RunConfig rc;
    rc.params.lambda = 1.0;
    rc.params.eta = 0.05;
    rc.rho0 = make_density(0.5, cplx(0.5, 0.0));
    rc.t_final = 1.0;
    rc.n_steps = 160;
    rc.solver = SolverChoice::Both;
    rc.splitting_n = 8;
    rc.sweep.lambda = {0.8, 1.2};
    rc.output.dir = scratch + "/traj";
    rc.output.prefix = "det";
    const std::string run_cfg = scratch + "/run.cfg";
    std::ofstream(run_cfg) << serialize_config(rc);

    RunConfig ec;
    ec.scenario = {BathCoupling::Dephasing, MeasurementAxis::Z};
    ec.params.lambda = 1.2;
    ec.rho0 = make_density(1.0, cplx(0.0, 0.0));
    ec.experiment.shots = 5000;
    ec.output.dir = scratch + "/exp";
    ec.output.prefix = "det";
    const std::string exp_cfg = scratch + "/exp.cfg";
    std::ofstream(exp_cfg) << serialize_config(ec);

    auto invoke = [](const std::string& sub, const std::string& cfg) {
        std::string cmd = std::string("\"") + FTMSIM_CLI_PATH + "\" " + sub +
                          " \"" + cfg + "\" > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    for (const auto& [sub, cfg, dir] :
         {std::tuple{std::string("run"), run_cfg, rc.output.dir},
          {std::string("experiment"), exp_cfg, ec.output.dir}}) {
        if (invoke(sub, cfg) != 0)
            return {false, "CLI " + sub + " exited nonzero on first call"};
        auto first = snapshot_dir(dir);
        if (invoke(sub, cfg) != 0)
            return {false, "CLI " + sub + " exited nonzero on second call"};
        auto second = snapshot_dir(dir);
        if (first.empty() || first != second)
            return {false, "CLI " + sub + " output differed between calls"};
    }
    auto files = snapshot_dir(scratch);
    return {true, fmt("%zu files byte-identical across repeated run and "
                      "experiment invocations",
                      files.size() - 2)};  // minus the two config files
#endif
}

} // namespace

int main() {
    struct Gate {
        int id;
        const char* name;
        double budget_s;  // 0 means no pinned budget
        Outcome (*fn)();
    };
    const Gate gates[] = {
        {1, "noiseless limit", 5.0, c1_noiseless_limit},
        {2, "pd_z structure", 10.0, c2_pd_z_structure},
        {3, "thermal weight", 5.0, c3_thermal_weight},
        {4, "cross-solver agreement", 60.0, c4_cross_solver},
        {5, "lambda protection", 30.0, c5_lambda_protection},
        {6, "thermal equilibrium", 30.0, c6_thermal_equilibrium},
        {7, "zeno protection", 30.0, c7_zeno_protection},
        {8, "measurement duration", 1.0, c8_measurement_duration},
        {9, "experiment chain", 10.0, c9_experiment_chain},
        {10, "numerical hygiene", 60.0, c10_numerical_hygiene},
        {11, "cli determinism", 0.0, c11_cli_determinism},
    };
    int failures = 0;
    for (const Gate& g : gates) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = g.fn();
        } catch (const std::exception& e) {
            out = {false, std::string("unexpected exception: ") + e.what()};
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        bool in_budget = g.budget_s == 0.0 || secs < g.budget_s;
        bool pass = out.pass && in_budget;
        if (!pass) ++failures;
        std::printf("[%s] criterion %2d %-24s (%6.2fs%s): %s\n",
                    pass ? "PASS" : "FAIL", g.id, g.name, secs,
                    in_budget ? "" : ", OVER BUDGET", out.detail.c_str());
    }
    std::printf("%d/11 criteria passed\n", 11 - failures);
    return failures;
}
