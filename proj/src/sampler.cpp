#include "alang/sampler.hpp"

#include <chrono>

namespace alang {

SamplerKind sampler_kind_from_string(const std::string& name) {
    if (name == "ula") return SamplerKind::ula;
    if (name == "anchored") return SamplerKind::anchored;
    if (name == "timechange") return SamplerKind::timechange;
    throw std::invalid_argument("unknown sampler: " + name);
}

std::string to_string(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::ula: return "ula";
        case SamplerKind::anchored: return "anchored";
        case SamplerKind::timechange: return "timechange";
    }
    return "?";
}

namespace {

void record(SampleSet& set, std::span<const double> x) {
    set.data.insert(set.data.end(), x.begin(), x.end());
    ++set.n;
}

}  // namespace

ChainResult run_chain(SamplerKind kind, const SamplerConfig& config, const AnchorPair& pair,
                      std::span<const double> x0, RngStream rng) {
    if (!(config.eta > 0.0)) throw std::invalid_argument("run_chain: eta must be positive");
    if (config.n_steps < 0) throw std::invalid_argument("run_chain: n_steps must be >= 0");
    const auto t0 = std::chrono::steady_clock::now();
    const int d = static_cast<int>(x0.size());

    ChainResult res;
    res.samples.d = d;
    res.samples.meta.sampler = to_string(kind);
    res.samples.meta.seed = rng.seed();
    res.samples.meta.steps = config.n_steps;
    res.samples.meta.eta = config.eta;

    ChainState state;
    state.x.assign(x0.begin(), x0.end());
    state.rng = rng;

    std::vector<double> xi(d), next(d), scratch(d);
    double sigma_sum = 0.0;
    record(res.samples, state.x);

    for (long k = 0; k < config.n_steps; ++k) {
        standard_normal_vector(state.rng, xi);
        AnchorPair::Eval ev;
        switch (kind) {
            case SamplerKind::ula:
                ula_step(pair.U0, state.x, config.eta, xi, next, scratch);
                state.x.swap(next);
                ++state.k;
                break;
            case SamplerKind::anchored:
                ev = anchored_step(pair, state.x, config.eta, xi, next, scratch);
                state.x.swap(next);
                ++state.k;
                break;
            case SamplerKind::timechange:
                ev = time_change_step(state, pair, config.eta, xi, scratch);
                break;
        }
        if (ev.clamped) ++res.diag.clamp_count;
        sigma_sum += ev.sigma;
        if (!all_finite(state.x)) {
            std::vector<double> last(res.samples.data.end() - d, res.samples.data.end());
            throw NumericAbort(k + 1, std::move(last));
        }
        if ((k + 1) % config.record_every == 0) record(res.samples, state.x);
    }
    res.diag.mean_sigma = config.n_steps > 0 ? sigma_sum / config.n_steps : 1.0;
    res.diag.final_ell = state.ell;
    res.diag.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

namespace {

// Shared body of the two Gaussian-smoothing algorithms. `time_change`
// selects the clock-based update; under shared noise the two are the same
// map up to floating-point association.
ChainResult run_smoothed(const CompositePotential& u, const SamplerConfig& config,
                         std::span<const double> x0, RngStream rng, bool time_change) {
    if (!config.smoothing) throw std::invalid_argument("smoothing spec required");
    const SmoothingSpec spec = *config.smoothing;
    if (!(spec.mu > 0.0) || spec.n_mc < 1)
        throw std::invalid_argument("smoothing spec: mu > 0 and N >= 1 required");
    const auto t0 = std::chrono::steady_clock::now();
    const int d = static_cast<int>(x0.size());

    ChainResult res;
    res.samples.d = d;
    res.samples.meta.sampler = time_change ? "timechange" : "anchored";
    res.samples.meta.seed = rng.seed();
    res.samples.meta.steps = config.n_steps;
    res.samples.meta.eta = config.eta;
    res.samples.meta.mu = spec.mu;
    res.samples.meta.n_mc = spec.n_mc;

    ChainState state;
    state.x.assign(x0.begin(), x0.end());
    state.rng = rng;

    std::vector<double> xi(d), next(d), drift(d), gsmooth(d);
    SmoothingWorkspace ws;
    auto g = [&u](std::span<const double> p) { return u.g.value(p); };

    double sigma_sum = 0.0;
    res.samples.data.insert(res.samples.data.end(), state.x.begin(), state.x.end());
    res.samples.n = 1;

    for (long k = 0; k < config.n_steps; ++k) {
        // Fresh batches each step, value and gradient independent.
        const double g_tilde = mc_smoothed_value(g, state.x, spec, state.rng, ws);
        mc_smoothed_grad(g, state.x, spec, state.rng, gsmooth, ws);
        u.smooth_grad(state.x, drift);
        for (int i = 0; i < d; ++i) drift[i] += gsmooth[i];
        // f + m0||x||^2 cancels in U - Utilde0, leaving g(x) - gtilde(x).
        double gap = u.g.value(state.x) - g_tilde;
        bool clamped = false;
        if (gap > 30.0) { gap = 30.0; clamped = true; }
        if (gap < -30.0) { gap = -30.0; clamped = true; }

        standard_normal_vector(state.rng, xi);
        if (time_change) {
            const double dl = config.eta * std::exp(gap);
            for (int i = 0; i < d; ++i) drift[i] = -drift[i];
            step_kernel(state.x, drift, 1.0, xi, dl, next);
            state.ell += dl;
            sigma_sum += 1.0;
        } else {
            const double eg = std::exp(gap);
            for (int i = 0; i < d; ++i) drift[i] = -drift[i] * eg;
            const double sigma = std::exp(0.5 * gap);
            step_kernel(state.x, drift, sigma, xi, config.eta, next);
            sigma_sum += sigma;
        }
        state.x.swap(next);
        ++state.k;
        if (clamped) ++res.diag.clamp_count;
        if (!all_finite(state.x)) {
            std::vector<double> last(res.samples.data.end() - d, res.samples.data.end());
            throw NumericAbort(k + 1, std::move(last));
        }
        if ((k + 1) % config.record_every == 0) {
            res.samples.data.insert(res.samples.data.end(), state.x.begin(), state.x.end());
            ++res.samples.n;
        }
    }
    res.diag.mean_sigma = config.n_steps > 0 ? sigma_sum / config.n_steps : 1.0;
    res.diag.final_ell = state.ell;
    res.diag.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace

ChainResult algorithm1_run(const CompositePotential& u, const SamplerConfig& config,
                           std::span<const double> x0, RngStream rng) {
    return run_smoothed(u, config, x0, rng, /*time_change=*/false);
}

ChainResult algorithm2_run(const CompositePotential& u, const SamplerConfig& config,
                           std::span<const double> x0, RngStream rng) {
    return run_smoothed(u, config, x0, rng, /*time_change=*/true);
}

}  // namespace alang
