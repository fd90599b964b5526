#include "ftm/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "json.hpp"

#include "ftm/hybrid.hpp"
#include "ftm/version.hpp"

namespace ftm {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string run_tag(std::size_t idx) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04zu", idx);
    return buf;
}

std::string run_context(std::size_t idx, const ModelParams& p) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "run %04zu (lambda=%g, eta=%g, omega0=%g, temperature=%g): ",
                  idx, p.lambda, p.eta, p.omega0, p.beta.temperature());
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("cannot write " + path);
}

fs::path ensure_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
    return p;
}

std::string trajectory_csv(const std::vector<double>& times,
                           const std::vector<DensityMatrix>& states,
                           Basis out_basis, const char* solver) {
    std::string csv = "t,rho11,re_rho12,im_rho12,abs_rho12,basis,solver\n";
    char row[256];
    for (std::size_t k = 0; k < times.size(); ++k) {
        DensityMatrix st = states[k];
        if (out_basis == Basis::X) st = to_x_basis(st);
        std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g,%.17g,%.17g,%s,%s\n",
                      times[k], st.rho11, st.rho12.real(), st.rho12.imag(),
                      std::abs(st.rho12), out_basis == Basis::X ? "x" : "z",
                      solver);
        csv += row;
    }
    return csv;
}

json model_json(const ModelParams& p) {
    json j;
    j["lambda"] = p.lambda;
    j["eta"] = p.eta;
    j["omega0"] = p.omega0;
    j["omega_c"] = p.omega_c;
    j["temperature"] = p.beta.temperature();
    if (p.beta.is_zero_temperature())
        j["beta"] = nullptr;
    else
        j["beta"] = p.beta.beta();
    return j;
}

json rho_json(const DensityMatrix& r) {
    json j;
    j["rho11"] = r.rho11;
    j["re_rho12"] = r.rho12.real();
    j["im_rho12"] = r.rho12.imag();
    j["basis"] = r.basis == Basis::Z ? "z" : "x";
    return j;
}

json diag_json(const Diagnostics& d) {
    json j;
    j["max_trace_error"] = d.max_trace_error;
    j["min_eigenvalue"] = d.min_eigenvalue;
    j["min_eigenvalue_time"] = d.min_eigenvalue_time;
    j["positivity_ok"] = d.min_eigenvalue >= -1e-8;
    j["warnings"] = d.warnings;
    return j;
}

// Sidecar skeleton shared by every trajectory file. No timestamps or host
// details: identical configs must produce identical bytes.
json meta_common(const RunConfig& run, const char* solver) {
    json j;
    j["version"] = version;
    j["solver"] = solver;
    j["scenario"] = scenario_name(run.scenario);
    j["model"] = model_json(run.params);
    j["rho0"] = rho_json(run.rho0);
    j["output_basis"] = run.output.basis == Basis::Z ? "z" : "x";
    if (run.f) {
        json tm;
        tm["f"] = *run.f;
        if (run.params.lambda > 0.0)
            tm["value"] = measurement_duration(run.params.lambda, *run.f);
        else
            tm["value"] = nullptr;
        j["t_m"] = tm;
    }
    return j;
}

void emit_hybrid(const RunConfig& run, const std::string& stem,
                 Trajectory* keep) {
    Trajectory tr = solve(run.scenario,
                          HybridRun{run.params, run.rho0, run.t_final, run.n_steps});

    write_file(stem + ".csv",
               trajectory_csv(tr.times, tr.states, run.output.basis, "hybrid"));

    json meta = meta_common(run, "hybrid");
    meta["grid"] = {{"t_final", run.t_final}, {"n_steps", run.n_steps}};
    meta["diagnostics"] = diag_json(tr.diagnostics);
    write_file(stem + ".meta.json", meta.dump(2) + "\n");

    if (keep) *keep = std::move(tr);
}

void emit_splitting(const RunConfig& run, const std::string& stem,
                    std::vector<SplittingOutput>* keep) {
    SplittingRun sr{run.params, run.rho0, run.splitting_n,
                    run.t_final / run.splitting_n, run.convention,
                    SumStrategy::GrayCode};
    std::vector<SplittingOutput> traj = splitting_trajectory(sr);

    std::vector<double> times(traj.size());
    std::vector<DensityMatrix> states(traj.size());
    double herm = 0.0;
    Diagnostics diag;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        times[k] = traj[k].t;
        states[k] = DensityMatrix{traj[k].rho11, traj[k].rho12, Basis::Z};
        herm = std::max(herm, std::abs(traj[k].rho12 - std::conj(traj[k].rho21)));
        double ev = min_eigenvalue(states[k]);
        if (ev < diag.min_eigenvalue) {
            diag.min_eigenvalue = ev;
            diag.min_eigenvalue_time = traj[k].t;
        }
    }

    write_file(stem + ".csv",
               trajectory_csv(times, states, run.output.basis, "splitting"));

    json meta = meta_common(run, "splitting");
    meta["grid"] = {{"t_final", run.splitting_n * sr.dt},
                    {"n_steps", run.splitting_n},
                    {"dt", sr.dt}};
    meta["weight_convention"] = run.convention == WeightConvention::StepInterval
                                    ? "step_interval"
                                    : "total_time";
    meta["diagnostics"] = diag_json(diag);
    meta["diagnostics"]["hermiticity_error"] = herm;
    write_file(stem + ".meta.json", meta.dump(2) + "\n");

    if (keep) *keep = std::move(traj);
}

struct Failure {
    bool config = false;
    std::string msg;
    bool set = false;
};

// Fixed-size pool over the expanded runs. Failures are collected per index
// and the lowest-index one is reported, so the outcome does not depend on
// scheduling.
template <class Body>
void run_pool(const std::vector<RunConfig>& runs, Body&& body) {
    std::size_t n = runs.size();
    std::vector<Failure> fails(n);
    auto guarded = [&](std::size_t i) {
        try {
            body(i);
        } catch (const ParseError& e) {
            fails[i] = {true, e.what(), true};
        } catch (const ValidationError& e) {
            fails[i] = {true, e.what(), true};
        } catch (const UnsupportedScenario& e) {
            fails[i] = {true, e.what(), true};
        } catch (const DomainError& e) {
            fails[i] = {true, e.what(), true};
        } catch (const std::exception& e) {
            fails[i] = {false, e.what(), true};
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = std::min<std::size_t>(hw ? hw : 1, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) guarded(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n;
                     i = next.fetch_add(1))
                    guarded(i);
            });
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < n; ++i)
        if (fails[i].set)
            throw RunError(run_context(i, runs[i].params) + fails[i].msg,
                           fails[i].config);
}

bool is_pd_x(const Scenario& sc) {
    return sc.bath == BathCoupling::Dephasing && sc.axis == MeasurementAxis::X;
}

} // namespace

RunArtifacts run_scenarios(const RunConfig& c) {
    validate_config(c);
    bool want_hybrid = c.solver != SolverChoice::Splitting;
    bool want_split = c.solver != SolverChoice::Hybrid;
    if (want_split && !is_pd_x(c.scenario))
        throw UnsupportedScenario(
            "the splitting solver covers only interaction = pd with component = x");

    std::vector<RunConfig> runs = expand_sweep(c);
    fs::path dir = ensure_dir(c.output.dir);

    RunArtifacts art;
    std::vector<std::string> stems_h(runs.size()), stems_s(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::string base = (dir / (c.output.prefix + "_" + run_tag(i))).string();
        if (want_hybrid) {
            stems_h[i] = base + "_hybrid";
            art.csv_paths.push_back(stems_h[i] + ".csv");
        }
        if (want_split) {
            stems_s[i] = base + "_splitting";
            art.csv_paths.push_back(stems_s[i] + ".csv");
        }
    }

    run_pool(runs, [&](std::size_t i) {
        if (want_hybrid) emit_hybrid(runs[i], stems_h[i], nullptr);
        if (want_split) emit_splitting(runs[i], stems_s[i], nullptr);
    });
    return art;
}

CompareReport run_compare(const RunConfig& c) {
    validate_config(c);
    if (c.solver != SolverChoice::Both)
        throw ValidationError("solver", "compare requires solver = both");
    if (!is_pd_x(c.scenario))
        throw UnsupportedScenario(
            "compare covers only interaction = pd with component = x");
    if (c.n_steps % c.splitting_n != 0)
        throw ValidationError(
            "n_steps", "must be a multiple of splitting_n for a shared grid");

    std::vector<RunConfig> runs = expand_sweep(c);
    fs::path dir = ensure_dir(c.output.dir);

    CompareReport rep;
    std::vector<std::string> stems_h(runs.size()), stems_s(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::string base = (dir / (c.output.prefix + "_" + run_tag(i))).string();
        stems_h[i] = base + "_hybrid";
        stems_s[i] = base + "_splitting";
        rep.csv_paths.push_back(stems_h[i] + ".csv");
        rep.csv_paths.push_back(stems_s[i] + ".csv");
    }

    std::vector<Trajectory> hybrids(runs.size());
    std::vector<std::vector<SplittingOutput>> splits(runs.size());
    run_pool(runs, [&](std::size_t i) {
        emit_hybrid(runs[i], stems_h[i], &hybrids[i]);
        emit_splitting(runs[i], stems_s[i], &splits[i]);
    });

    int stride = c.n_steps / c.splitting_n;
    std::string table =
        "run,lambda,eta,omega0,temperature,max_rho11_diff,rms_rho11_diff,"
        "max_abs_rho12_diff,rms_abs_rho12_diff\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        CompareRow row;
        row.run_index = i;
        row.params = runs[i].params;
        double sum_p = 0.0, sum_c = 0.0;
        std::size_t nodes = splits[i].size();
        for (std::size_t k = 0; k < nodes; ++k) {
            const DensityMatrix& h = hybrids[i].states[k * static_cast<std::size_t>(stride)];
            const SplittingOutput& s = splits[i][k];
            double dp = std::abs(h.rho11 - s.rho11);
            double dc = std::abs(std::abs(h.rho12) - std::abs(s.rho12));
            row.max_rho11_diff = std::max(row.max_rho11_diff, dp);
            row.max_abs_rho12_diff = std::max(row.max_abs_rho12_diff, dc);
            sum_p += dp * dp;
            sum_c += dc * dc;
        }
        row.rms_rho11_diff = std::sqrt(sum_p / static_cast<double>(nodes));
        row.rms_abs_rho12_diff = std::sqrt(sum_c / static_cast<double>(nodes));
        rep.rows.push_back(row);

        table += run_tag(i) + "," + fmt17(row.params.lambda) + "," +
                 fmt17(row.params.eta) + "," + fmt17(row.params.omega0) + "," +
                 fmt17(row.params.beta.temperature()) + "," +
                 fmt17(row.max_rho11_diff) + "," + fmt17(row.rms_rho11_diff) +
                 "," + fmt17(row.max_abs_rho12_diff) + "," +
                 fmt17(row.rms_abs_rho12_diff) + "\n";

        char line[256];
        std::snprintf(line, sizeof line,
                      "run %04zu: lambda=%g eta=%g omega0=%g T=%g | rho11 max "
                      "%.3e rms %.3e | |rho12| max %.3e rms %.3e",
                      i, row.params.lambda, row.params.eta, row.params.omega0,
                      row.params.beta.temperature(), row.max_rho11_diff,
                      row.rms_rho11_diff, row.max_abs_rho12_diff,
                      row.rms_abs_rho12_diff);
        rep.text += line;
        rep.text += "\n";
    }

    rep.report_path = (dir / (c.output.prefix + "_compare.csv")).string();
    write_file(rep.report_path, table);
    return rep;
}

ExperimentArtifacts run_experiment(const RunConfig& c) {
    validate_config(c);
    if (c.sweep.any())
        throw ValidationError("sweep", "experiment mode does not sweep");

    SyntheticExperiment syn = synthesize_experiment(
        c.rho0, c.experiment.theta, c.params.lambda, c.experiment.taus,
        c.experiment.shots, c.experiment.seed);
    FitResult fit = fit_lambda_squared(syn.points);

    fs::path dir = ensure_dir(c.output.dir);
    ExperimentArtifacts art;
    art.line = syn.line;
    art.fit = fit;
    art.csv_path = (dir / (c.output.prefix + "_experiment.csv")).string();

    std::string csv = "tau,b_hat,sigma\n";
    char row[128];
    for (const SamplePoint& p : syn.points) {
        std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g\n", p.tau, p.b_hat,
                      p.sigma_b);
        csv += row;
    }
    write_file(art.csv_path, csv);

    json meta;
    meta["version"] = version;
    meta["model"] = model_json(c.params);
    meta["rho0"] = rho_json(c.rho0);
    meta["experiment"] = {{"theta", c.experiment.theta},
                          {"shots", c.experiment.shots},
                          {"seed", c.experiment.seed},
                          {"n_tau", c.experiment.taus.size()}};
    meta["line"] = {{"a", syn.line.a}, {"c", syn.line.c}};
    meta["delta_z"] = std::abs(syn.line.c);
    meta["fit"] = {{"lambda_sq", fit.lambda_sq},
                   {"std_error", fit.std_error},
                   {"n_points", fit.n_points}};
    write_file(art.csv_path.substr(0, art.csv_path.size() - 4) + ".meta.json",
               meta.dump(2) + "\n");

    char line[160];
    std::snprintf(line, sizeof line,
                  "lambda_sq = %.10g +/- %.3g from %d points (configured "
                  "lambda_sq = %.10g)",
                  fit.lambda_sq, fit.std_error, fit.n_points,
                  c.params.lambda * c.params.lambda);
    art.text = line;
    return art;
}

} // namespace ftm
