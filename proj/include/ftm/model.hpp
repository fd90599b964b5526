#pragma once

#include <cmath>

#include "ftm/errors.hpp"

namespace ftm {

// Inverse temperature with an explicit zero-temperature sentinel. Zero
// temperature is a distinct analytic limit (coth -> 1, thermal occupation
// -> 0), not a large-beta approximation, so it is carried as a flag instead
// of a huge number.
class InverseTemperature {
public:
    static InverseTemperature zero() { return InverseTemperature(0.0, true); }

    static InverseTemperature finite(double beta) {
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw DomainError("beta must be positive and finite");
        return InverseTemperature(beta, false);
    }

    // T = 0 maps to the sentinel, T > 0 to beta = 1/T.
    static InverseTemperature from_temperature(double temperature) {
        if (!(temperature >= 0.0) || !std::isfinite(temperature))
            throw DomainError("temperature must be nonnegative and finite");
        if (temperature == 0.0) return zero();
        return finite(1.0 / temperature);
    }

    bool is_zero_temperature() const { return zero_; }

    double beta() const {
        if (zero_)
            throw DomainError("beta is undefined at zero temperature");
        return beta_;
    }

    double temperature() const { return zero_ ? 0.0 : 1.0 / beta_; }

    bool operator==(const InverseTemperature& o) const {
        return zero_ == o.zero_ && beta_ == o.beta_;
    }

private:
    InverseTemperature(double beta, bool zero) : beta_(beta), zero_(zero) {}
    double beta_;
    bool zero_;
};

// Physical inputs shared by every solver: measurement strength lambda,
// system-bath coupling eta, level splitting omega0 (H = omega0 sigma_z),
// Ohmic cutoff omega_c, and the bath temperature.
struct ModelParams {
    double lambda = 1.0;
    double eta = 0.0;
    double omega0 = 0.0;
    double omega_c = 1.0;
    InverseTemperature beta = InverseTemperature::zero();

    void validate() const {
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw DomainError("lambda must be nonnegative and finite");
        if (!(eta >= 0.0) || !std::isfinite(eta))
            throw DomainError("eta must be nonnegative and finite");
        if (!std::isfinite(omega0))
            throw DomainError("omega0 must be finite");
        if (!(omega_c > 0.0) || !std::isfinite(omega_c))
            throw DomainError("omega_c must be positive and finite");
    }
};

} // namespace ftm
