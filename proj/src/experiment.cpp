#include "alang/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "alang/metrics.hpp"
#include "alang/parallel.hpp"
#include "alang/special.hpp"

namespace alang {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kVersion = "alang 0.1.0";

double clamp_gap(double gap, bool& clamped) {
    if (gap > 30.0) { clamped = true; return 30.0; }
    if (gap < -30.0) { clamped = true; return -30.0; }
    return gap;
}

// ---- particle-cloud kernels --------------------------------------------
//
// The Laplace and heavy-tailed experiments evolve one Langevin particle per
// data point and score the whole cloud per iteration, so the cloud is
// advanced one step at a time with the metric computed in between. Each
// (repeat, chain) pair owns an RNG stream; the reductions below only touch
// per-chain slots, so thread scheduling cannot change results.

// One smoothed step of a d = 1 chain. G is the scalar nonsmooth target.
// Draws stay sequential on the chain's stream; the two accumulators only
// fix the (deterministic) summation order while letting the adds overlap.
template <class G>
inline bool smoothed_step_1d(SamplerKind kind, double& x, RngStream& rng, double eta,
                             double mu, int n_mc, const G& g) {
    double grad_acc = 0.0;
    double value_acc = 0.0;
    const bool needs_value = kind != SamplerKind::ula;
    if (needs_value) {
        double v0 = 0.0, v1 = 0.0;
        int i = 0;
        for (; i + 1 < n_mc; i += 2) {
            v0 += g(x + mu * rng.next_normal());
            v1 += g(x + mu * rng.next_normal());
        }
        if (i < n_mc) v0 += g(x + mu * rng.next_normal());
        value_acc = v0 + v1;
    }
    {
        double g0 = 0.0, g1 = 0.0;
        int i = 0;
        for (; i + 1 < n_mc; i += 2) {
            const double za = rng.next_normal();
            const double zb = rng.next_normal();
            g0 += za * g(x + mu * za);
            g1 += zb * g(x + mu * zb);
        }
        if (i < n_mc) {
            const double z = rng.next_normal();
            g0 += z * g(x + mu * z);
        }
        grad_acc = g0 + g1;
    }
    const double grad = grad_acc / (mu * n_mc);
    const double xi = rng.next_normal();
    bool clamped = false;
    switch (kind) {
        case SamplerKind::ula:
            x += -eta * grad + std::sqrt(2.0 * eta) * xi;
            break;
        case SamplerKind::anchored: {
            const double gap = clamp_gap(g(x) - value_acc / n_mc, clamped);
            const double eg = std::exp(gap);
            x += -eta * grad * eg + std::sqrt(2.0 * eta) * std::exp(0.5 * gap) * xi;
            break;
        }
        case SamplerKind::timechange: {
            const double gap = clamp_gap(g(x) - value_acc / n_mc, clamped);
            const double dl = eta * std::exp(gap);
            x += -dl * grad + std::sqrt(2.0 * dl) * xi;
            break;
        }
    }
    return clamped;
}

// Two d = 1 chains advanced in lockstep. Each chain consumes its own
// stream in the same order as smoothed_step_1d; interleaving only gives the
// core two independent dependency chains to overlap.
template <class G>
inline int smoothed_step_1d_pair(SamplerKind kind, double& xa, double& xb, RngStream& ra,
                                 RngStream& rb, double eta, double mu, int n_mc, const G& g) {
    double va = 0.0, vb = 0.0;
    if (kind != SamplerKind::ula) {
        for (int i = 0; i < n_mc; ++i) {
            va += g(xa + mu * ra.next_normal());
            vb += g(xb + mu * rb.next_normal());
        }
    }
    double ga = 0.0, gb = 0.0;
    for (int i = 0; i < n_mc; ++i) {
        const double za = ra.next_normal();
        const double zb = rb.next_normal();
        ga += za * g(xa + mu * za);
        gb += zb * g(xb + mu * zb);
    }
    const double noise = std::sqrt(2.0 * eta);
    int clamps = 0;
    auto finish = [&](double& x, RngStream& rng, double grad_acc, double value_acc) {
        const double grad = grad_acc / (mu * n_mc);
        const double xi = rng.next_normal();
        switch (kind) {
            case SamplerKind::ula:
                x += -eta * grad + noise * xi;
                break;
            case SamplerKind::anchored: {
                bool clamped = false;
                const double gap = clamp_gap(g(x) - value_acc / n_mc, clamped);
                clamps += clamped;
                x += -eta * grad * std::exp(gap) + noise * std::exp(0.5 * gap) * xi;
                break;
            }
            case SamplerKind::timechange: {
                bool clamped = false;
                const double gap = clamp_gap(g(x) - value_acc / n_mc, clamped);
                clamps += clamped;
                const double dl = eta * std::exp(gap);
                x += -dl * grad + std::sqrt(2.0 * dl) * xi;
                break;
            }
        }
    };
    finish(xa, ra, ga, va);
    finish(xb, rb, gb, vb);
    return clamps;
}

// General-d smoothed step; g takes a point span.
template <class G>
inline bool smoothed_step_nd(SamplerKind kind, std::span<double> x, RngStream& rng, double eta,
                             double mu, int n_mc, const G& g, std::vector<double>& pt,
                             std::vector<double>& xi, std::vector<double>& grad) {
    const std::size_t d = x.size();
    pt.resize(d); xi.resize(d); grad.assign(d, 0.0);
    double value_acc = 0.0;
    const bool needs_value = kind != SamplerKind::ula;
    if (needs_value) {
        for (int i = 0; i < n_mc; ++i) {
            for (std::size_t j = 0; j < d; ++j) pt[j] = x[j] + mu * rng.next_normal();
            value_acc += g(std::span<const double>(pt));
        }
    }
    for (int i = 0; i < n_mc; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            xi[j] = rng.next_normal();
            pt[j] = x[j] + mu * xi[j];
        }
        const double gv = g(std::span<const double>(pt));
        for (std::size_t j = 0; j < d; ++j) grad[j] += xi[j] * gv;
    }
    const double gscale = 1.0 / (mu * n_mc);
    for (std::size_t j = 0; j < d; ++j) grad[j] *= gscale;
    for (std::size_t j = 0; j < d; ++j) xi[j] = rng.next_normal();

    bool clamped = false;
    double drift_scale = -eta, noise_scale = std::sqrt(2.0 * eta);
    if (kind == SamplerKind::anchored) {
        const double gap = clamp_gap(g(x) - value_acc / n_mc, clamped);
        drift_scale = -eta * std::exp(gap);
        noise_scale = std::sqrt(2.0 * eta) * std::exp(0.5 * gap);
    } else if (kind == SamplerKind::timechange) {
        const double gap = clamp_gap(g(x) - value_acc / n_mc, clamped);
        const double dl = eta * std::exp(gap);
        drift_scale = -dl;
        noise_scale = std::sqrt(2.0 * dl);
    }
    for (std::size_t j = 0; j < d; ++j) x[j] += drift_scale * grad[j] + noise_scale * xi[j];
    return clamped;
}

// RMS of an already-sorted sample against precomputed quantiles over the
// kept index set; the same contraction as w2_1d_trimmed_pre without the
// per-call copy and sort.
double w2_from_sorted(const std::vector<double>& sorted, const std::vector<long>& kept,
                      const std::vector<double>& q_kept) {
    double acc = 0.0;
    for (std::size_t m = 0; m < kept.size(); ++m) {
        const double diff = sorted[kept[m] - 1] - q_kept[m];
        acc += diff * diff;
    }
    return std::sqrt(acc / kept.size());
}

struct CloudSeries {
    std::vector<std::vector<double>> per_repeat;
    std::vector<double> crossings;
    long clamp_count = 0;
};

void aggregate_series(const CloudSeries& cloud, ExperimentResult& result, long record_every) {
    const int repeats = static_cast<int>(cloud.per_repeat.size());
    std::size_t len = std::numeric_limits<std::size_t>::max();
    for (const auto& s : cloud.per_repeat) len = std::min(len, s.size());
    if (len == std::numeric_limits<std::size_t>::max()) len = 0;

    result.repeat_series = cloud.per_repeat;
    result.mean_series.assign(len, 0.0);
    result.stderr_series.assign(len, 0.0);
    for (std::size_t t = 0; t < len; ++t) {
        double mean = 0.0;
        for (const auto& s : cloud.per_repeat) mean += s[t];
        mean /= repeats;
        double var = 0.0;
        for (const auto& s : cloud.per_repeat) var += (s[t] - mean) * (s[t] - mean);
        result.mean_series[t] = mean;
        result.stderr_series[t] = repeats > 1 ? std::sqrt(var / (repeats - 1) / repeats) : 0.0;
    }
    result.iters_to_threshold = cloud.crossings;
    double sum = 0.0;
    bool any_inf = false;
    for (double c : cloud.crossings) {
        if (std::isinf(c)) any_inf = true;
        sum += c;
    }
    result.mean_iters_to_threshold =
        cloud.crossings.empty() ? kInf : (any_inf ? kInf : sum / cloud.crossings.size());
    result.final_metric = len > 0 ? result.mean_series[len - 1] : kInf;
    result.record_every = record_every;
    result.version = kVersion;
}

// Drives one repeat of a cloud experiment; advance(i) moves the i-th task
// (one chain, or a pair of chains) one step, coord(c, j) reads chain c's
// j-th coordinate for the metric.
template <class Advance>
std::vector<double> run_cloud_repeat(const ExperimentSpec& spec, int threads, long n_tasks,
                                     const Advance& advance,
                                     const std::function<double(long, int)>& coord,
                                     const std::vector<std::vector<double>>& q_kept,
                                     const std::vector<long>& kept, double& crossing) {
    const long n = spec.n_chains;
    const int d = spec.d;
    std::vector<double> series;
    crossing = kInf;
    std::vector<double> sort_buf(n);
    for (long t = 1; t <= spec.n_steps; ++t) {
        parallel_for(n_tasks, threads, advance);
        if (t % spec.record_every != 0) continue;
        double metric;
        if (d == 1) {
            for (long c = 0; c < n; ++c) sort_buf[c] = coord(c, 0);
            std::sort(sort_buf.begin(), sort_buf.end());
            metric = w2_from_sorted(sort_buf, kept, q_kept[0]);
        } else {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) {
                for (long c = 0; c < n; ++c) sort_buf[c] = coord(c, j);
                std::sort(sort_buf.begin(), sort_buf.end());
                const double w = w2_from_sorted(sort_buf, kept, q_kept[j]);
                acc += w * w;
            }
            metric = std::sqrt(acc / d);
        }
        series.push_back(metric);
        if (spec.threshold_w2 && std::isinf(crossing) && metric < *spec.threshold_w2)
            crossing = static_cast<double>(t);
        if (spec.stop_on_threshold && !std::isinf(crossing)) break;
    }
    return series;
}

}  // namespace

double iterations_to_threshold(const std::vector<double>& series, double eps,
                               long record_every) {
    for (std::size_t t = 0; t < series.size(); ++t)
        if (series[t] < eps) return static_cast<double>((t + 1) * record_every);
    return kInf;
}

double heavy_tail_cdf(double iota, double x) {
    if (iota == 2.0) {
        return 0.5 + (std::atan(x) + x / (1.0 + x * x)) / std::numbers::pi;
    }
    // (1+t^2)^{-iota} integrated via t = tan(theta): cos^{2 iota - 2}(theta).
    const double z = std::sqrt(std::numbers::pi) * std::tgamma(iota - 0.5) / std::tgamma(iota);
    auto integrand = [iota](double th) { return std::pow(std::cos(th), 2.0 * iota - 2.0); };
    const double half = integrate(integrand, 0.0, std::atan(std::fabs(x)), 16) / z;
    return x >= 0.0 ? 0.5 + half : 0.5 - half;
}

ExperimentResult run_laplace_experiment(const ExperimentSpec& spec) {
    if (spec.kind != ExperimentKind::laplace1d && spec.kind != ExperimentKind::laplace_md)
        throw std::invalid_argument("run_laplace_experiment: wrong kind");
    const auto t0 = std::chrono::steady_clock::now();
    const int threads = spec.threads > 0 ? spec.threads : default_threads();
    const int d = spec.d;
    const long n = spec.n_chains;

    // Marginal scales: unit-variance Laplace marginals, b_j = 1/sqrt(2).
    const double b_marg = 1.0 / std::numbers::sqrt2;
    const auto kept = w2_trim_kept_indices(n, spec.trim);
    if (kept.empty()) throw std::domain_error("laplace experiment: trim leaves no samples");
    std::vector<std::vector<double>> q_kept(d);
    for (int j = 0; j < d; ++j) {
        q_kept[j].resize(kept.size());
        for (std::size_t m = 0; m < kept.size(); ++m)
            q_kept[j][m] = laplace_quantile(static_cast<double>(kept[m]) / n, 0.0, b_marg);
    }

    Potential mv_target;  // general-d nonsmooth potential, d >= 2 only
    if (d >= 2) {
        std::vector<double> sigma(d * d, 0.0);
        for (int i = 0; i < d; ++i) sigma[i * d + i] = 1.0;
        if (d >= 2) { sigma[0 * d + 1] = spec.rho; sigma[1 * d + 0] = spec.rho; }
        mv_target = multivariate_laplace_potential(sigma, d);
    }

    ExperimentResult result;
    result.spec = spec;
    result.metric_name = d == 1 ? "w2" : "sliced_w2";
    CloudSeries cloud;
    cloud.per_repeat.resize(spec.n_repeats);
    cloud.crossings.resize(spec.n_repeats);

    for (int r = 0; r < spec.n_repeats; ++r) {
        std::vector<RngStream> rngs;
        rngs.reserve(n);
        std::vector<double> pos(n * d);
        for (long c = 0; c < n; ++c) {
            rngs.emplace_back(spec.seed, stream_id_for(r, c));
            for (int j = 0; j < d; ++j) pos[c * d + j] = spec.prior.sample(rngs.back());
        }
        std::vector<long> clamps(n, 0);
        std::function<void(long)> advance;
        long n_tasks = n;
        if (d == 1) {
            const double lam = 1.0 / b_marg;  // U(x) = sqrt(2)|x|
            n_tasks = (n + 1) / 2;
            advance = [&, lam, n](long p) {
                auto g1 = [lam](double t) { return lam * std::fabs(t); };
                const long c = 2 * p;
                if (c + 1 < n) {
                    // local copies keep the rng state register-resident
                    RngStream ra = rngs[c], rb = rngs[c + 1];
                    double xa = pos[c], xb = pos[c + 1];
                    clamps[c] += smoothed_step_1d_pair(spec.sampler, xa, xb, ra, rb, spec.eta,
                                                       spec.mu, spec.n_mc, g1);
                    pos[c] = xa;
                    pos[c + 1] = xb;
                    rngs[c] = ra;
                    rngs[c + 1] = rb;
                } else {
                    if (smoothed_step_1d(spec.sampler, pos[c], rngs[c], spec.eta, spec.mu,
                                         spec.n_mc, g1))
                        ++clamps[c];
                }
            };
        } else {
            advance = [&](long c) {
                thread_local std::vector<double> pt, xi, grad;
                auto g = [&](std::span<const double> p) { return mv_target.value(p); };
                std::span<double> x(pos.data() + c * d, static_cast<std::size_t>(d));
                if (smoothed_step_nd(spec.sampler, x, rngs[c], spec.eta, spec.mu, spec.n_mc,
                                     g, pt, xi, grad))
                    ++clamps[c];
            };
        }
        auto coord = [&pos, d](long c, int j) { return pos[c * d + j]; };
        cloud.per_repeat[r] = run_cloud_repeat(spec, threads, n_tasks, advance, coord, q_kept,
                                               kept, cloud.crossings[r]);
        for (long c = 0; c < n; ++c) cloud.clamp_count += clamps[c];
    }
    aggregate_series(cloud, result, spec.record_every);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

ExperimentResult run_heavytail_experiment(const ExperimentSpec& spec) {
    if (spec.kind != ExperimentKind::heavytail)
        throw std::invalid_argument("run_heavytail_experiment: wrong kind");
    const auto t0 = std::chrono::steady_clock::now();
    const int threads = spec.threads > 0 ? spec.threads : default_threads();
    const long n = spec.n_chains;
    const double iota = spec.iota, beta = spec.beta;

    const auto kept = w2_trim_kept_indices(n, spec.trim);
    std::vector<std::vector<double>> q_kept(1);
    q_kept[0].resize(kept.size());
    auto cdf = [iota](double x) { return heavy_tail_cdf(iota, x); };
    for (std::size_t m = 0; m < kept.size(); ++m)
        q_kept[0][m] = numeric_quantile(cdf, static_cast<double>(kept[m]) / n, {-1e9, 1e9});

    ExperimentResult result;
    result.spec = spec;
    result.metric_name = "w2";
    CloudSeries cloud;
    cloud.per_repeat.resize(spec.n_repeats);
    cloud.crossings.resize(spec.n_repeats);

    for (int r = 0; r < spec.n_repeats; ++r) {
        std::vector<RngStream> rngs;
        rngs.reserve(n);
        std::vector<double> pos(n);
        for (long c = 0; c < n; ++c) {
            rngs.emplace_back(spec.seed, stream_id_for(r, c));
            pos[c] = spec.prior.sample(rngs.back());
        }
        std::vector<long> clamps(n, 0);
        auto advance = [&](long c) {
            double& x = pos[c];
            RngStream& rng = rngs[c];
            const double q = 1.0 + x * x;
            const double xi = rng.next_normal();
            switch (spec.sampler) {
                case SamplerKind::ula: {
                    // ULA on the target potential itself (it is smooth).
                    x += -spec.eta * 2.0 * iota * x / q +
                         std::sqrt(2.0 * spec.eta) * xi;
                    break;
                }
                case SamplerKind::anchored: {
                    bool clamped = false;
                    const double gap = clamp_gap((iota - beta) * std::log(q), clamped);
                    if (clamped) ++clamps[c];
                    const double eg = std::exp(gap);
                    x += -spec.eta * (2.0 * beta * x / q) * eg +
                         std::sqrt(2.0 * spec.eta) * std::exp(0.5 * gap) * xi;
                    break;
                }
                case SamplerKind::timechange: {
                    bool clamped = false;
                    const double gap = clamp_gap((iota - beta) * std::log(q), clamped);
                    if (clamped) ++clamps[c];
                    const double dl = spec.eta * std::exp(gap);
                    x += -dl * (2.0 * beta * x / q) + std::sqrt(2.0 * dl) * xi;
                    break;
                }
            }
        };
        auto coord = [&pos](long c, int) { return pos[c]; };
        cloud.per_repeat[r] = run_cloud_repeat(spec, threads, n, advance, coord, q_kept, kept,
                                               cloud.crossings[r]);
        for (long c = 0; c < n; ++c) cloud.clamp_count += clamps[c];
    }
    aggregate_series(cloud, result, spec.record_every);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

// ---- logistic regression ------------------------------------------------

namespace {

inline double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// One fused pass: z = X w, residual r = sigmoid(z) - y, grad_f = X'r / n,
// accuracy of the thresholded prediction.
void logistic_pass(const Dataset& data, std::span<const double> w, std::vector<double>& grad_f,
                   double& accuracy) {
    const int n = data.n, d = data.d;
    grad_f.assign(d, 0.0);
    long correct = 0;
    for (int i = 0; i < n; ++i) {
        const double* row = &data.X[i * d];
        double z = 0.0;
        for (int j = 0; j < d; ++j) z += row[j] * w[j];
        if ((z >= 0.0) == (data.y[i] == 1.0)) ++correct;
        const double r = sigmoid(z) - data.y[i];
        for (int j = 0; j < d; ++j) grad_f[j] += r * row[j];
    }
    for (int j = 0; j < d; ++j) grad_f[j] /= n;
    accuracy = static_cast<double>(correct) / n;
}

}  // namespace

ExperimentResult run_logistic_experiment(const ExperimentSpec& spec, const Dataset& data) {
    if (spec.kind != ExperimentKind::logistic_det && spec.kind != ExperimentKind::logistic_gauss)
        throw std::invalid_argument("run_logistic_experiment: wrong kind");
    const auto t0 = std::chrono::steady_clock::now();
    const int threads = spec.threads > 0 ? spec.threads : default_threads();
    const int d = data.d;
    const bool gauss = spec.kind == ExperimentKind::logistic_gauss;
    const Penalty pen = make_penalty(penalty_kind_from_string(spec.penalty), spec.lambda, spec.a);
    const Potential pen_eps = gauss ? Potential{} : smoothed_penalty(pen, spec.epsilon);
    const long n_rec = spec.n_steps / spec.record_every;

    CloudSeries cloud;
    cloud.per_repeat.assign(spec.n_repeats, std::vector<double>());
    std::vector<long> clamps(spec.n_repeats, 0);

    parallel_for(spec.n_repeats, threads, [&](long r) {
        RngStream rng(spec.seed, stream_id_for(r, 0));
        std::vector<double> w(d), grad_f(d), grad_pen(d), xi(d);
        SmoothingWorkspace ws;
        for (int j = 0; j < d; ++j) w[j] = spec.prior.sample(rng);
        auto& series = cloud.per_repeat[r];
        series.reserve(n_rec);
        const SmoothingSpec sm{spec.mu, spec.n_mc, true, false};
        auto gfn = [&pen](std::span<const double> p) { return pen.value(p); };
        for (long t = 1; t <= spec.n_steps; ++t) {
            double acc;
            logistic_pass(data, w, grad_f, acc);
            double gap;
            if (gauss) {
                const double g_tilde = mc_smoothed_value(gfn, w, sm, rng, ws);
                mc_smoothed_grad(gfn, w, sm, rng, grad_pen, ws);
                gap = pen.value(w) - g_tilde;
            } else {
                pen_eps.grad(w, grad_pen);
                gap = pen.value(w) - pen_eps.value(w);
            }
            bool clamped = false;
            gap = clamp_gap(gap, clamped);
            if (clamped) ++clamps[r];
            for (int j = 0; j < d; ++j)
                grad_f[j] += 2.0 * spec.m0 * w[j] + grad_pen[j];

            standard_normal_vector(rng, xi);
            double drift_scale = -spec.eta, noise = std::sqrt(2.0 * spec.eta);
            if (spec.sampler == SamplerKind::anchored) {
                drift_scale = -spec.eta * std::exp(gap);
                noise = std::sqrt(2.0 * spec.eta) * std::exp(0.5 * gap);
            } else if (spec.sampler == SamplerKind::timechange) {
                const double dl = spec.eta * std::exp(gap);
                drift_scale = -dl;
                noise = std::sqrt(2.0 * dl);
            }
            for (int j = 0; j < d; ++j) w[j] += drift_scale * grad_f[j] + noise * xi[j];
            if (t % spec.record_every == 0) {
                double post_acc;
                logistic_pass(data, w, grad_f, post_acc);  // accuracy of the new iterate
                series.push_back(post_acc);
            }
        }
    }, 1);

    ExperimentResult result;
    result.spec = spec;
    result.metric_name = "accuracy";
    cloud.crossings.assign(spec.n_repeats, kInf);
    aggregate_series(cloud, result, spec.record_every);
    result.iters_to_threshold.clear();
    result.mean_iters_to_threshold = kInf;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

// ---- two-layer ReLU network ----------------------------------------------

namespace {

struct NnForward {
    double loss = 0.0;
    double accuracy = 0.0;
};

// h = relu(X w1'), p = sigmoid(h w2); mean binary cross entropy.
NnForward nn_forward(const Dataset& data, std::span<const double> w1, std::span<const double> w2,
                     int nh, std::vector<double>* hidden_out,
                     std::vector<double>* residual_out) {
    const int n = data.n, d = data.d;
    NnForward out;
    if (hidden_out) hidden_out->assign(static_cast<std::size_t>(n) * nh, 0.0);
    if (residual_out) residual_out->assign(n, 0.0);
    long correct = 0;
    double loss = 0.0;
    std::vector<double> h(nh);
    for (int i = 0; i < n; ++i) {
        const double* row = &data.X[i * d];
        double z = 0.0;
        for (int j = 0; j < nh; ++j) {
            const double* wj = &w1[j * d];
            double a = 0.0;
            for (int k = 0; k < d; ++k) a += row[k] * wj[k];
            h[j] = a > 0.0 ? a : 0.0;
            z += h[j] * w2[j];
        }
        if (hidden_out)
            std::copy(h.begin(), h.end(), hidden_out->begin() + static_cast<std::size_t>(i) * nh);
        const double y = data.y[i];
        // BCE in softplus form: log(1+e^z) - y z
        loss += (z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) - y * z;
        const double s = sigmoid(z);
        if (residual_out) (*residual_out)[i] = s - y;
        if ((z >= 0.0) == (y == 1.0)) ++correct;
    }
    out.loss = loss / n;
    out.accuracy = static_cast<double>(correct) / n;
    return out;
}

}  // namespace

NnEval nn_loss_accuracy(const Dataset& data, std::span<const double> w1,
                        std::span<const double> w2, int hidden) {
    const NnForward f = nn_forward(data, w1, w2, hidden, nullptr, nullptr);
    return {f.loss, f.accuracy};
}

void nn_second_layer_grad(const Dataset& data, std::span<const double> w1,
                          std::span<const double> w2, int hidden, std::span<double> out) {
    std::vector<double> hidden_act, residual;
    nn_forward(data, w1, w2, hidden, &hidden_act, &residual);
    for (int j = 0; j < hidden; ++j) {
        double a = 0.0;
        for (int i = 0; i < data.n; ++i)
            a += residual[i] * hidden_act[static_cast<std::size_t>(i) * hidden + j];
        out[j] = a / data.n;
    }
}

ExperimentResult run_nn_experiment(const ExperimentSpec& spec, const Dataset& data) {
    if (spec.kind != ExperimentKind::neuralnet)
        throw std::invalid_argument("run_nn_experiment: wrong kind");
    const auto t0 = std::chrono::steady_clock::now();
    const int threads = spec.threads > 0 ? spec.threads : default_threads();
    const int d = data.d, nh = spec.hidden, n = data.n;
    const int dim1 = nh * d;
    const long n_rec = spec.n_steps / spec.record_every;

    CloudSeries cloud;
    cloud.per_repeat.assign(spec.n_repeats, std::vector<double>());
    std::vector<std::vector<double>> loss_series(spec.n_repeats);

    parallel_for(spec.n_repeats, threads, [&](long r) {
        RngStream rng(spec.seed, stream_id_for(r, 0));
        std::vector<double> w1(dim1), w2(nh);
        for (double& v : w1) v = spec.prior.sample(rng);
        for (double& v : w2) v = spec.prior.sample(rng);

        std::vector<double> hidden, residual, pt(dim1), xi1(dim1), grad1(dim1), grad2(nh), xi2(nh);
        auto& acc_series = cloud.per_repeat[r];
        acc_series.reserve(n_rec);
        loss_series[r].reserve(n_rec);

        auto loss_at = [&](std::span<const double> w1p) {
            return nn_forward(data, w1p, w2, nh, nullptr, nullptr).loss;
        };

        NnForward cur = nn_forward(data, w1, w2, nh, &hidden, &residual);
        for (long t = 1; t <= spec.n_steps; ++t) {
            // first layer: Gaussian-smoothed loss as a function of w1
            double value_acc = 0.0;
            const bool needs_value = spec.sampler != SamplerKind::ula;
            if (needs_value) {
                for (int i = 0; i < spec.n_mc; ++i) {
                    for (int j = 0; j < dim1; ++j) pt[j] = w1[j] + spec.mu * rng.next_normal();
                    value_acc += loss_at(pt);
                }
            }
            std::fill(grad1.begin(), grad1.end(), 0.0);
            for (int i = 0; i < spec.n_mc; ++i) {
                for (int j = 0; j < dim1; ++j) {
                    xi1[j] = rng.next_normal();
                    pt[j] = w1[j] + spec.mu * xi1[j];
                }
                const double lv = loss_at(pt);
                for (int j = 0; j < dim1; ++j) grad1[j] += xi1[j] * lv;
            }
            const double gscale = 1.0 / (spec.mu * spec.n_mc);
            for (int j = 0; j < dim1; ++j) grad1[j] *= gscale;

            double drift_scale = -spec.eta, noise = std::sqrt(2.0 * spec.eta);
            if (needs_value) {
                bool clamped = false;
                const double gap = clamp_gap(cur.loss - value_acc / spec.n_mc, clamped);
                if (spec.sampler == SamplerKind::anchored) {
                    drift_scale = -spec.eta * std::exp(gap);
                    noise = std::sqrt(2.0 * spec.eta) * std::exp(0.5 * gap);
                } else {
                    const double dl = spec.eta * std::exp(gap);
                    drift_scale = -dl;
                    noise = std::sqrt(2.0 * dl);
                }
            }

            // second layer: exact gradient, plain ULA
            for (int j = 0; j < nh; ++j) {
                double a = 0.0;
                for (int i = 0; i < n; ++i) a += residual[i] * hidden[static_cast<std::size_t>(i) * nh + j];
                grad2[j] = a / n;
            }

            for (int j = 0; j < dim1; ++j) xi1[j] = rng.next_normal();
            for (int j = 0; j < nh; ++j) xi2[j] = rng.next_normal();
            for (int j = 0; j < dim1; ++j) w1[j] += drift_scale * grad1[j] + noise * xi1[j];
            const double noise2 = std::sqrt(2.0 * spec.eta);
            for (int j = 0; j < nh; ++j) w2[j] += -spec.eta * grad2[j] + noise2 * xi2[j];

            cur = nn_forward(data, w1, w2, nh, &hidden, &residual);
            if (t % spec.record_every == 0) {
                acc_series.push_back(cur.accuracy);
                loss_series[r].push_back(cur.loss);
            }
        }
    }, 1);

    ExperimentResult result;
    result.spec = spec;
    result.metric_name = "accuracy";
    cloud.crossings.assign(spec.n_repeats, kInf);
    aggregate_series(cloud, result, spec.record_every);
    result.iters_to_threshold.clear();
    result.mean_iters_to_threshold = kInf;
    result.aux_name = "loss";
    std::size_t len = result.mean_series.size();
    result.aux_mean_series.assign(len, 0.0);
    for (std::size_t t = 0; t < len; ++t) {
        double m = 0.0;
        for (const auto& s : loss_series) m += s[t];
        result.aux_mean_series[t] = m / spec.n_repeats;
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    switch (spec.kind) {
        case ExperimentKind::laplace1d:
        case ExperimentKind::laplace_md:
            return run_laplace_experiment(spec);
        case ExperimentKind::heavytail:
            return run_heavytail_experiment(spec);
        case ExperimentKind::logistic_det:
        case ExperimentKind::logistic_gauss: {
            const Dataset data = load_dataset(
                spec.dataset_path, dataset_format_from_string(spec.dataset_format),
                spec.standardize);
            return run_logistic_experiment(spec, data);
        }
        case ExperimentKind::neuralnet: {
            const Dataset data = load_dataset(
                spec.dataset_path, dataset_format_from_string(spec.dataset_format),
                spec.standardize);
            return run_nn_experiment(spec, data);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace alang
