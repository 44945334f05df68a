#pragma once

// Discrete-time samplers: ULA, anchored Euler-Maruyama, and the random
// time-change scheme, plus their Gaussian-smoothing variants. All three
// share one step kernel so that algebraically identical cases (U = U0,
// coupled noise) agree bit for bit.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "alang/potential.hpp"
#include "alang/rng.hpp"
#include "alang/smoothing.hpp"

namespace alang {

// Drift b(x) = -grad U0(x) e^{U-U0} and diffusion sigma(x) = e^{(U-U0)/2},
// with the exponent clamped to +-exponent_clamp before exponentiation
// (transient iterates can overflow even when the stationary gap is bounded).
struct AnchorPair {
    Potential U;
    Potential U0;
    double exponent_clamp = 30.0;

    struct Eval {
        double sigma = 1.0;
        double gap = 0.0;  // clamped U - U0
        bool clamped = false;
    };

    // Writes b into `drift`; returns sigma and the clamp flag.
    Eval eval(std::span<const double> x, std::span<double> drift) const {
        Eval ev;
        double gap = U.value(x) - U0.value(x);
        if (gap > exponent_clamp) { gap = exponent_clamp; ev.clamped = true; }
        if (gap < -exponent_clamp) { gap = -exponent_clamp; ev.clamped = true; }
        ev.gap = gap;
        U0.grad(x, drift);
        const double eg = std::exp(gap);
        for (double& v : drift) v = -v * eg;
        ev.sigma = std::exp(0.5 * gap);
        return ev;
    }
};

// x' = x + eta * drift + sqrt(2 eta) * sigma * xi. Shared by every sampler.
inline void step_kernel(std::span<const double> x, std::span<const double> drift,
                        double sigma, std::span<const double> xi, double eta,
                        std::span<double> out) {
    const double noise = std::sqrt(2.0 * eta) * sigma;
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = x[i] + eta * drift[i] + noise * xi[i];
}

// One ULA step on the gradient field grad_u0.
inline void ula_step(const Potential& u0, std::span<const double> x, double eta,
                     std::span<const double> xi, std::span<double> out,
                     std::span<double> scratch) {
    u0.grad(x, scratch);
    for (double& v : scratch) v = -v;
    step_kernel(x, scratch, 1.0, xi, eta, out);
}

// One Euler-Maruyama step of the anchored SDE; returns the evaluation so
// callers can track clamping.
inline AnchorPair::Eval anchored_step(const AnchorPair& pair, std::span<const double> x,
                                      double eta, std::span<const double> xi,
                                      std::span<double> out, std::span<double> scratch) {
    const auto ev = pair.eval(x, scratch);
    step_kernel(x, scratch, ev.sigma, xi, eta, out);
    return ev;
}

struct ChainState {
    std::vector<double> x;
    long k = 0;
    double ell = 0.0;  // time-change clock, nondecreasing, 0 at k = 0
    RngStream rng;
};

// Random time-change step: advance the clock by eta e^{U-U0}, then take a
// U0-Langevin step of that size.
inline AnchorPair::Eval time_change_step(ChainState& state, const AnchorPair& pair,
                                         double eta, std::span<const double> xi,
                                         std::span<double> scratch) {
    AnchorPair::Eval ev;
    double gap = pair.U.value(state.x) - pair.U0.value(state.x);
    if (gap > pair.exponent_clamp) { gap = pair.exponent_clamp; ev.clamped = true; }
    if (gap < -pair.exponent_clamp) { gap = -pair.exponent_clamp; ev.clamped = true; }
    ev.gap = gap;
    const double dl = eta * std::exp(gap);
    ev.sigma = 1.0;
    pair.U0.grad(state.x, scratch);
    for (double& v : scratch) v = -v;
    std::vector<double> next(state.x.size());
    step_kernel(state.x, scratch, 1.0, xi, dl, next);
    state.x = std::move(next);
    state.ell += dl;
    ++state.k;
    return ev;
}

enum class SamplerKind { ula, anchored, timechange };

SamplerKind sampler_kind_from_string(const std::string& name);
std::string to_string(SamplerKind kind);

struct SamplerConfig {
    double eta = 0.1;
    long n_steps = 1000;
    std::optional<SmoothingSpec> smoothing;
    long record_every = 1;
};

struct SampleSetMeta {
    std::string sampler;
    std::uint64_t seed = 0;
    long steps = 0;
    double eta = 0.0;
    double mu = 0.0;
    int n_mc = 0;
};

// n x d matrix of recorded states with provenance.
struct SampleSet {
    std::vector<double> data;  // row-major
    long n = 0;
    int d = 1;
    SampleSetMeta meta;

    std::span<const double> row(long i) const {
        return {data.data() + i * d, static_cast<std::size_t>(d)};
    }
    std::vector<double> column(int j) const {
        std::vector<double> c(n);
        for (long i = 0; i < n; ++i) c[i] = data[i * d + j];
        return c;
    }
};

struct ChainDiagnostics {
    long clamp_count = 0;
    double mean_sigma = 1.0;
    double final_ell = 0.0;
    double wall_seconds = 0.0;
};

// Raised when an iterate stops being finite; unadjusted schemes have no
// rejection step, so divergence must surface loudly.
struct NumericAbort : std::runtime_error {
    long step;
    std::vector<double> last_finite;
    NumericAbort(long step_, std::vector<double> last)
        : std::runtime_error("non-finite iterate at step " + std::to_string(step_)),
          step(step_), last_finite(std::move(last)) {}
};

struct ChainResult {
    SampleSet samples;
    ChainDiagnostics diag;
};

// Runs a single chain of n_steps, recording every record_every-th state
// (x0 is always recorded first).
ChainResult run_chain(SamplerKind kind, const SamplerConfig& config, const AnchorPair& pair,
                      std::span<const double> x0, RngStream rng);

// Algorithm "anchored Langevin with Gaussian smoothing": each step draws
// fresh value and gradient batches for the penalty, forms
// Utilde0 = f + m0||x||^2 + (1/N) sum g(x + mu xi) and the matching
// gradient estimate, and applies the anchored update with exponent
// U(x) - Utilde0(x) (U uses the exact penalty value).
ChainResult algorithm1_run(const CompositePotential& u, const SamplerConfig& config,
                           std::span<const double> x0, RngStream rng);

// Same estimators driven through the random time-change scheme. The
// gradient batch smooths g (not the full U), which the coupling with
// algorithm1_run requires.
ChainResult algorithm2_run(const CompositePotential& u, const SamplerConfig& config,
                           std::span<const double> x0, RngStream rng);

inline bool all_finite(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace alang
