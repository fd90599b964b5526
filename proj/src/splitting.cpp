#include "ftm/splitting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <thread>

#include "ftm/errors.hpp"

namespace ftm {

namespace {

constexpr int kMaxSteps = 24;

// Compensated complex accumulator; kept branch-free so -O2 does not fold the
// correction away.
struct KahanSum {
    cplx sum{0.0, 0.0};
    cplx comp{0.0, 0.0};
    void add(cplx v) {
        const cplx y = v - comp;
        const cplx t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

// Per-string bookkeeping for one contiguous block of the Gray walk.
struct WalkState {
    std::vector<int> q;        // current string, entries +-1
    std::vector<double> s;     // s[k] = sum_{m != k} q[m] * W(m, k)
    double wsum = 0.0;         // q^T W q
    int pp = 0, mm = 0, pm = 0;  // adjacent-pair counts by type
};

void init_walk(WalkState& ws, std::uint64_t index, const WeightMatrix& w) {
    const int n = w.n;
    const std::uint64_t gray = index ^ (index >> 1);
    ws.q.resize(n);
    for (int j = 0; j < n; ++j) ws.q[j] = ((gray >> j) & 1u) ? -1 : 1;
    ws.s.assign(n, 0.0);
    ws.wsum = 0.0;
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            if (m != k) acc += ws.q[m] * w(m, k);
        }
        ws.s[k] = acc;
        ws.wsum += ws.q[k] * (acc + ws.q[k] * w(k, k));
    }
    ws.pp = ws.mm = ws.pm = 0;
    for (int k = 0; k + 1 < n; ++k) {
        const int a = ws.q[k], b = ws.q[k + 1];
        if (a > 0 && b > 0)
            ++ws.pp;
        else if (a < 0 && b < 0)
            ++ws.mm;
        else
            ++ws.pm;
    }
}

void count_pair(WalkState& ws, int a, int b, int delta) {
    if (a > 0 && b > 0)
        ws.pp += delta;
    else if (a < 0 && b < 0)
        ws.mm += delta;
    else
        ws.pm += delta;
}

// Flip entry k of the string, keeping wsum, s and the pair counts current.
void flip(WalkState& ws, int k, const WeightMatrix& w) {
    const int n = w.n;
    const int old = ws.q[k];
    ws.wsum += -4.0 * old * ws.s[k];
    for (int j = 0; j < n; ++j) {
        if (j != k) ws.s[j] -= 2.0 * old * w(j, k);
    }
    if (k > 0) count_pair(ws, ws.q[k - 1], old, -1);
    if (k + 1 < n) count_pair(ws, old, ws.q[k + 1], -1);
    ws.q[k] = -old;
    if (k > 0) count_pair(ws, ws.q[k - 1], ws.q[k], +1);
    if (k + 1 < n) count_pair(ws, ws.q[k], ws.q[k + 1], +1);
}

// Powers of the c factors up to exponent n-1, so a string's c-chain is two
// complex multiplies regardless of length.
struct PowerTables {
    std::vector<cplx> cp;     // cplus^k
    std::vector<double> cm;   // cminus^k
    explicit PowerTables(const CFactors& cf, int n) {
        cp.resize(n);
        cm.resize(n);
        cp[0] = cplx(1.0, 0.0);
        cm[0] = 1.0;
        for (int k = 1; k < n; ++k) {
            cp[k] = cp[k - 1] * cf.cplus;
            cm[k] = cm[k - 1] * cf.cminus;
        }
    }
};

// Four accumulator classes indexed by (sign of q_N, parity of sign flips
// along the string). The class decides which initial-coherence component the
// string acts on and which output component it lands in.
struct ClassSums {
    KahanSum acc[4];
    void add(int cls, cplx v) { acc[cls].add(v); }
};

int class_of(const WalkState& ws) {
    const int n = static_cast<int>(ws.q.size());
    const int parity = (ws.q[0] * ws.q[n - 1]) > 0 ? 0 : 1;
    const int qn_neg = ws.q[n - 1] < 0 ? 1 : 0;
    return (qn_neg << 1) | parity;
}

cplx chain_value(const WalkState& ws, const PowerTables& pt) {
    // pp pairs give cplus, mm pairs conj(cplus), mixed pairs the real cminus.
    return pt.cp[ws.pp] * std::conj(pt.cp[ws.mm]) * pt.cm[ws.pm];
}

void accumulate_gray(ClassSums& cs, std::uint64_t begin, std::uint64_t end,
                     const WeightMatrix& w, const PowerTables& pt) {
    WalkState ws;
    init_walk(ws, begin, w);
    for (std::uint64_t i = begin; i < end; ++i) {
        cs.add(class_of(ws), std::exp(ws.wsum) * chain_value(ws, pt));
        if (i + 1 < end) {
            const int k = std::countr_zero(i + 1);
            flip(ws, k, w);
        }
    }
}

void accumulate_brute(ClassSums& cs, std::uint64_t begin, std::uint64_t end,
                      const WeightMatrix& w, const PowerTables& pt) {
    const int n = w.n;
    std::vector<int> q(n);
    for (std::uint64_t i = begin; i < end; ++i) {
        const std::uint64_t gray = i ^ (i >> 1);
        for (int j = 0; j < n; ++j) q[j] = ((gray >> j) & 1u) ? -1 : 1;
        double wsum = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) wsum += q[a] * q[b] * w(a, b);
        int pp = 0, mm = 0, pm = 0;
        for (int k = 0; k + 1 < n; ++k) {
            if (q[k] > 0 && q[k + 1] > 0)
                ++pp;
            else if (q[k] < 0 && q[k + 1] < 0)
                ++mm;
            else
                ++pm;
        }
        const int parity = (q[0] * q[n - 1]) > 0 ? 0 : 1;
        const int cls = ((q[n - 1] < 0 ? 1 : 0) << 1) | parity;
        const cplx chain = pt.cp[pp] * std::conj(pt.cp[mm]) * pt.cm[pm];
        cs.add(cls, std::exp(wsum) * chain);
    }
}

} // namespace

std::pair<cplx, cplx> sequence_sum(const WeightMatrix& weights,
                                   const CFactors& cf, cplx rho12_0,
                                   SumStrategy strategy) {
    const int n = weights.n;
    if (n < 1) throw DomainError("sequence sum needs at least one step");
    if (n > kMaxSteps)
        throw CapError("sequence enumeration capped at 24 steps (2^N terms)");

    const std::uint64_t total = std::uint64_t(1) << n;
    const PowerTables pt(cf, n);

    // Fixed segmentation keeps the reduction order, and therefore the result
    // bits, independent of how many threads actually run.
    const std::uint64_t segments = std::min<std::uint64_t>(total, 64);
    const std::uint64_t seg_len = total / segments;
    std::vector<ClassSums> partial(segments);

    auto work = [&](std::uint64_t s0, std::uint64_t s1) {
        for (std::uint64_t s = s0; s < s1; ++s) {
            const std::uint64_t b = s * seg_len;
            if (strategy == SumStrategy::GrayCode)
                accumulate_gray(partial[s], b, b + seg_len, weights, pt);
            else
                accumulate_brute(partial[s], b, b + seg_len, weights, pt);
        }
    };

    unsigned nthreads = std::thread::hardware_concurrency();
    if (nthreads == 0) nthreads = 1;
    nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(segments));
    if (total < 128 || nthreads <= 1) {
        work(0, segments);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (segments + nthreads - 1) / nthreads;
        for (unsigned tvalue = 0; tvalue < nthreads; ++tvalue) {
            const std::uint64_t s0 = tvalue * chunk;
            const std::uint64_t s1 = std::min<std::uint64_t>(segments, s0 + chunk);
            if (s0 >= s1) break;
            pool.emplace_back(work, s0, s1);
        }
        for (auto& th : pool) th.join();
    }

    ClassSums total_sums;
    for (std::uint64_t s = 0; s < segments; ++s)
        for (int c = 0; c < 4; ++c) total_sums.acc[c].add(partial[s].acc[c].sum);

    const cplx rho21_0 = std::conj(rho12_0);
    const cplx top = cf.cplus * rho12_0 + cf.cminus * rho21_0;
    const cplx bot = cf.cminus * rho12_0 + std::conj(cf.cplus) * rho21_0;
    // Class layout: 0 = (+, even), 1 = (+, odd), 2 = (-, even), 3 = (-, odd).
    const cplx comp12 = total_sums.acc[0].sum * top + total_sums.acc[3].sum * bot;
    const cplx comp21 = total_sums.acc[1].sum * top + total_sums.acc[2].sum * bot;
    return {comp12, comp21};
}

namespace {

SplittingOutput assemble(const SplittingRun& run, const WeightMatrix& weights,
                         int k) {
    const double lam2 = run.params.lambda * run.params.lambda;
    const double t = k * run.dt;
    SplittingOutput out;
    out.t = t;
    // Populations never couple to the dephasing bath; they relax exactly as
    // in the noiseless channel.
    out.rho11 = 0.5 + 0.5 * (2.0 * run.rho0.rho11 - 1.0) * std::exp(-2.0 * lam2 * t);
    if (k == 0) {
        out.rho12 = run.rho0.rho12;
        out.rho21 = std::conj(run.rho0.rho12);
        return out;
    }
    WeightMatrix sub;
    sub.n = k;
    sub.dt = weights.dt;
    sub.col.assign(weights.col.begin(), weights.col.begin() + k);
    const CFactors cf = c_factors(run.params, run.dt);
    const auto [c12, c21] =
        sequence_sum(sub, cf, run.rho0.rho12, run.strategy);
    const double damp = std::exp(-lam2 * t);
    out.rho12 = damp * c12;
    out.rho21 = damp * c21;
    return out;
}

WeightMatrix weights_for(const SplittingRun& run) {
    run.params.validate();
    if (run.rho0.basis != Basis::Z)
        throw BasisError("splitting solver expects a Z-basis initial state");
    if (run.n_steps < 1) throw DomainError("n_steps must be at least 1");
    if (run.n_steps > kMaxSteps)
        throw CapError("sequence enumeration capped at 24 steps (2^N terms)");
    if (!(run.dt > 0.0) || !std::isfinite(run.dt))
        throw DomainError("dt must be positive and finite");
    const SpectralDensity sd{run.params.eta, run.params.omega_c};
    return splitting_weights(run.n_steps, run.dt, sd, run.params.beta,
                             run.convention);
}

} // namespace

SplittingOutput solve_pd_x_exact(const SplittingRun& run) {
    const WeightMatrix weights = weights_for(run);
    return assemble(run, weights, run.n_steps);
}

std::vector<SplittingOutput> splitting_trajectory(const SplittingRun& run) {
    WeightMatrix weights = weights_for(run);
    std::vector<SplittingOutput> out;
    out.reserve(run.n_steps + 1);
    for (int k = 0; k <= run.n_steps; ++k) {
        // StepInterval weights depend only on dt, so the prefix problem is a
        // leading slice of one matrix; TotalTime ties the kernel to the full
        // duration k * dt and needs a fresh matrix per prefix.
        if (run.convention == WeightConvention::TotalTime && k >= 1) {
            const SpectralDensity sd{run.params.eta, run.params.omega_c};
            weights = splitting_weights(k, run.dt, sd, run.params.beta,
                                        run.convention);
        }
        out.push_back(assemble(run, weights, k));
    }
    return out;
}

} // namespace ftm
