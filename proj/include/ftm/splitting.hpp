#pragma once

#include <vector>

#include "ftm/bath.hpp"
#include "ftm/noiseless.hpp"

namespace ftm {

// Exact route for the sigma_x apparatus with a dephasing bath: the coherence
// at t = n_steps * dt is a weighted sum over all 2^N branch strings
// q in {-1, +1}^N, each contributing a thermal weight exp(q^T W q) times a
// scalar chain of c factors.
enum class SumStrategy { BruteForce, GrayCode };

struct SplittingRun {
    ModelParams params;
    DensityMatrix rho0;  // Z basis
    int n_steps = 16;
    double dt = 0.0625;
    WeightConvention convention = WeightConvention::StepInterval;
    SumStrategy strategy = SumStrategy::GrayCode;
};

struct SplittingOutput {
    double t = 0.0;
    double rho11 = 0.0;
    cplx rho12{0.0, 0.0};
    // Accumulated independently of rho12; equals conj(rho12) up to rounding
    // for a Hermitian initial state.
    cplx rho21{0.0, 0.0};
};

// Aggregated branch sum: returns the two components of
// sum_q exp(q^T W q) * prod(c factors along q) * A_{q_N} (rho12_0, rho21_0),
// i.e. the coherence pair before the overall exp(-lambda^2 t) prefactor.
// Enumeration walks a Gray code over the strings so each step is an O(N)
// weight update and an O(1) c-chain update; BruteForce recomputes every
// string from scratch and exists as the cross-check.
std::pair<cplx, cplx> sequence_sum(const WeightMatrix& weights,
                                   const CFactors& cf, cplx rho12_0,
                                   SumStrategy strategy);

// State at the final time n_steps * dt, in the Z basis.
SplittingOutput solve_pd_x_exact(const SplittingRun& run);

// States at every prefix time k * dt, k = 0..n_steps, reusing one weight
// matrix. Entry 0 is the initial state.
std::vector<SplittingOutput> splitting_trajectory(const SplittingRun& run);

} // namespace ftm
