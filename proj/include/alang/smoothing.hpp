#pragma once

// Gaussian smoothing of nonsmooth functions: Monte Carlo value and gradient
// estimators, the closed-form smoothed l1 penalty, and the uniform
// smoothing-gap bound K*mu*sqrt(d).

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "alang/rng.hpp"
#include "alang/special.hpp"

namespace alang {

struct SmoothingSpec {
    double mu = 1.0;        // smoothing scale, > 0
    int n_mc = 1;           // Monte Carlo batch size, >= 1
    bool independent_batches = true;  // fresh xi and xi-hat per call
    bool control_variate = false;     // subtract g(x) inside the grad estimator
};

struct SmoothingWorkspace {
    std::vector<double> point;
    void resize(std::size_t d) { if (point.size() != d) point.resize(d); }
};

// (1/N) sum g(x + mu xi_i); unbiased for E[g(x + mu xi)].
template <class G>
double mc_smoothed_value(G&& g, std::span<const double> x, const SmoothingSpec& spec,
                         RngStream& rng, SmoothingWorkspace& ws) {
    const std::size_t d = x.size();
    ws.resize(d);
    double acc = 0.0;
    for (int i = 0; i < spec.n_mc; ++i) {
        for (std::size_t j = 0; j < d; ++j) ws.point[j] = x[j] + spec.mu * rng.next_normal();
        acc += g(std::span<const double>(ws.point));
    }
    return acc / spec.n_mc;
}

// (1/(mu N)) sum xi_i g(x + mu xi_i); unbiased for the smoothed gradient.
// With control_variate set, g(x) is subtracted inside the sum (same mean,
// lower variance for small mu).
template <class G>
void mc_smoothed_grad(G&& g, std::span<const double> x, const SmoothingSpec& spec,
                      RngStream& rng, std::span<double> out, SmoothingWorkspace& ws) {
    const std::size_t d = x.size();
    ws.resize(d);
    for (std::size_t j = 0; j < d; ++j) out[j] = 0.0;
    const double base = spec.control_variate ? g(x) : 0.0;
    if (d == 1) {
        // dominant case in the Laplace experiments; keep the loop tight
        double acc = 0.0;
        const double x0 = x[0], mu = spec.mu;
        for (int i = 0; i < spec.n_mc; ++i) {
            const double z = rng.next_normal();
            ws.point[0] = x0 + mu * z;
            acc += z * (g(std::span<const double>(ws.point)) - base);
        }
        out[0] = acc / (mu * spec.n_mc);
        return;
    }
    std::vector<double> xi(d);
    for (int i = 0; i < spec.n_mc; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            xi[j] = rng.next_normal();
            ws.point[j] = x[j] + spec.mu * xi[j];
        }
        const double gv = g(std::span<const double>(ws.point)) - base;
        for (std::size_t j = 0; j < d; ++j) out[j] += xi[j] * gv;
    }
    const double scale = 1.0 / (spec.mu * spec.n_mc);
    for (std::size_t j = 0; j < d; ++j) out[j] *= scale;
}

// Smoothed l1 penalty in closed form (folded normal mean per coordinate):
//   g0(x) = lambda * sum_i [ mu sqrt(2/pi) e^{-x_i^2/(2 mu^2)}
//                            + x_i (1 - 2 Phi(-x_i/mu)) ]
// with gradient lambda * erf(x_i / (mu sqrt(2))).
inline double l1_smoothed_value(std::span<const double> x, double mu, double lambda) {
    const double c = mu * std::sqrt(2.0 / std::numbers::pi);
    double s = 0.0;
    for (double t : x) {
        s += c * std::exp(-t * t / (2.0 * mu * mu)) + t * erf(t / (mu * std::numbers::sqrt2));
    }
    return lambda * s;
}

inline void l1_smoothed_grad(std::span<const double> x, double mu, double lambda,
                             std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = lambda * erf(x[i] / (mu * std::numbers::sqrt2));
}

inline double l1_smoothed_grad1(double t, double mu, double lambda) {
    return lambda * erf(t / (mu * std::numbers::sqrt2));
}

struct ValueGrad {
    double value;
    std::vector<double> grad;
};

inline ValueGrad l1_gaussian_closed_form(std::span<const double> x, double mu, double lambda) {
    ValueGrad vg;
    vg.value = l1_smoothed_value(x, mu, lambda);
    vg.grad.resize(x.size());
    l1_smoothed_grad(x, mu, lambda, vg.grad);
    return vg;
}

// |g(x) - g0(x)| <= K mu sqrt(d) for K-Lipschitz g.
inline double smoothing_gap_bound(double K, double mu, double d) {
    return K * mu * std::sqrt(d);
}

}  // namespace alang
