#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftm/bath.hpp"
#include "ftm/density_matrix.hpp"
#include "ftm/hybrid.hpp"
#include "ftm/model.hpp"

namespace ftm {

enum class SolverChoice { Hybrid, Splitting, Both };

// Values to substitute for the matching model parameter, one run per element
// of the cross product. An empty axis means the base value is used.
struct SweepAxes {
    std::vector<double> lambda;
    std::vector<double> eta;
    std::vector<double> omega0;
    std::vector<double> temperature;

    std::size_t product() const;
    bool any() const;
    bool operator==(const SweepAxes&) const = default;
};

// 50 equally spaced measurement durations over [0.1, 1.0].
std::vector<double> default_tau_grid();

// Weak-measurement synthesis block: tilt angle, shot budget, RNG seed and
// the resolved tau grid (an explicit list once parsing is done, whether the
// file gave taus directly or as min/max/count).
struct ExperimentSetup {
    double theta = 1.5707963267948966;
    long long shots = 10000;
    std::uint64_t seed = 1;
    std::vector<double> taus = default_tau_grid();
    bool operator==(const ExperimentSetup&) const = default;
};

struct OutputSpec {
    std::string dir = "out";
    std::string prefix = "run";
    Basis basis = Basis::Z;
    bool operator==(const OutputSpec&) const = default;
};

inline bool operator==(const Scenario& a, const Scenario& b) {
    return a.bath == b.bath && a.axis == b.axis;
}

inline bool operator==(const DensityMatrix& a, const DensityMatrix& b) {
    return a.rho11 == b.rho11 && a.rho12 == b.rho12 && a.basis == b.basis;
}

inline bool operator==(const ModelParams& a, const ModelParams& b) {
    return a.lambda == b.lambda && a.eta == b.eta && a.omega0 == b.omega0 &&
           a.omega_c == b.omega_c && a.beta == b.beta;
}

// One fully resolved run definition. rho0 is stored in the Z basis; output
// basis conversion happens at emission time only.
struct RunConfig {
    Scenario scenario{BathCoupling::Dephasing, MeasurementAxis::X};
    ModelParams params{};
    DensityMatrix rho0{};
    double t_final = 10.0;
    int n_steps = 2000;
    SolverChoice solver = SolverChoice::Hybrid;
    int splitting_n = 16;
    WeightConvention convention = WeightConvention::StepInterval;
    std::optional<double> f;
    SweepAxes sweep;
    ExperimentSetup experiment;
    OutputSpec output;

    bool operator==(const RunConfig& o) const;
};

// Parses the plain-text key = value format (sections [model], [scenario],
// [sweep], [output], [experiment]; '#' or ';' comments). Unknown sections,
// unknown or duplicate keys and malformed numbers raise ParseError with the
// line number; well-formed values that violate a domain rule raise
// ValidationError naming the field. The returned config is fully validated.
RunConfig parse_config(const std::string& text);

// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

// Re-checks every domain rule on an already-built config.
void validate_config(const RunConfig& c);

// Cross product of the sweep axes in fixed axis order (lambda, eta, omega0,
// temperature), each axis iterated in file order, last axis fastest. Every
// returned config has an empty sweep and passes validate_config. The product
// is capped at 10^4.
std::vector<RunConfig> expand_sweep(const RunConfig& c);

} // namespace ftm
