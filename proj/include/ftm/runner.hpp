#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ftm/config.hpp"
#include "ftm/experiment.hpp"
#include "ftm/splitting.hpp"

namespace ftm {

// Failure of one run inside a sweep, tagged with whether the cause was a
// configuration problem (bad field, unsupported combination) or a runtime
// one (solver gate, I/O); the distinction drives the CLI exit code.
class RunError : public Error {
public:
    RunError(const std::string& what, bool config_family)
        : Error(what), config_(config_family) {}
    bool config_family() const { return config_; }

private:
    bool config_;
};

struct RunArtifacts {
    // Trajectory CSVs in deterministic order: run index major, hybrid before
    // splitting. Every CSV has a .meta.json sidecar next to it.
    std::vector<std::string> csv_paths;
};

struct CompareRow {
    std::size_t run_index = 0;
    ModelParams params;
    double max_rho11_diff = 0.0;
    double rms_rho11_diff = 0.0;
    double max_abs_rho12_diff = 0.0;
    double rms_abs_rho12_diff = 0.0;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    std::vector<std::string> csv_paths;
    std::string report_path;
    std::string text;  // one summary line per run
};

struct ExperimentArtifacts {
    std::string csv_path;
    ExpectationLine line;
    FitResult fit;
    std::string text;  // one-line fit summary
};

// Expands the sweep and writes one trajectory CSV (plus sidecar) per
// (run, solver). Independent runs execute concurrently; each file's bytes
// depend only on the config. UnsupportedScenario when a splitting solve is
// requested outside the dephasing bath / x apparatus case.
RunArtifacts run_scenarios(const RunConfig& c);

// Hybrid vs splitting on the shared node set (the hybrid grid sampled at the
// splitting nodes); emits both CSV sets and a <prefix>_compare.csv table.
// Requires solver = both, a dephasing/x scenario, and n_steps divisible by
// splitting_n.
CompareReport run_compare(const RunConfig& c);

// Synthesizes the weak-measurement data set and fits lambda^2; emits
// <prefix>_experiment.csv with columns tau, b_hat, sigma plus a sidecar
// carrying the fit.
ExperimentArtifacts run_experiment(const RunConfig& c);

} // namespace ftm
