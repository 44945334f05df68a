#include "alang/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace alang {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kE = std::numbers::e;
}  // namespace

W2Bound theoretical_eta_max_and_C(const W2BoundInputs& in) {
    if (!(in.alpha >= 0.0) || !(in.alpha < in.m))
        throw std::domain_error("theoretical_eta_max_and_C: requires 0 <= alpha < m");
    if (!(in.L >= in.m))
        throw std::domain_error("theoretical_eta_max_and_C: requires L >= m");
    const double m = in.m, L = in.L, alpha = in.alpha;
    const double beta = m - alpha;
    const double s = 1.0 + 4.0 * alpha;

    const double t1 = 1.0 / (L * L + 4.0 * alpha);
    const double t2 = 1.0 / (4.0 * beta);
    const double t3 = std::pow(std::sqrt(beta) / (20.0 * kSqrt2 * s), 2.0);
    const double t4 =
        std::pow(beta / (8.0 * kSqrt2 * (2.0 * L * std::sqrt(s) + 20.0 * L * s)), 2.0);

    const double reach = in.x_star_norm + in.sigma_xstar_hs;
    const double c1 = 3.0 * L * std::sqrt(s) * reach;
    const double c2 = 7.0 * s * reach;
    const double c3 = std::sqrt(4.0 * in.e_x0_sq + 6.0 * in.e_pi_sq);

    W2Bound out;
    out.eta_max = std::min(std::min(t1, t2), std::min(t3, t4));
    out.C = (2.0 * c1 + 8.0 * L * c2 +
             2.0 * kSqrt2 * c3 * (2.0 * L * std::sqrt(s) + 20.0 * L * s)) / beta +
            (2.0 * c2 + 10.0 * kSqrt2 * s * c3) / std::sqrt(beta);
    out.rate = beta;
    return out;
}

double w2_bound_curve(const W2Bound& bound, double w2_init, double eta, long k) {
    return kSqrt2 * std::exp(-bound.rate * k * eta) * w2_init +
           kSqrt2 * bound.C * std::sqrt(eta);
}

namespace {

double a1_const(const ComplexityConstants& c, double mu) {
    return 4.0 * (1.0 + kE) * (2.0 * mu * mu * c.L_f * c.L_f + 8.0 * c.K * c.K * c.d);
}

double a2_const(const ComplexityConstants& c, double mu) {
    return 4.0 * (1.0 + kE) *
           (2.0 * mu * mu * c.L_f * c.L_f * c.x_star_f_norm * c.x_star_f_norm +
            13.0 * mu * mu * c.K * c.K * c.d * c.d +
            8.0 * c.g_at_zero * c.g_at_zero * c.d);
}

// The uniform second-moment constant entering the Monte Carlo error bound;
// depends on N through an N^{-1/4} term, so callers run this to a fixed
// point.
double a_const(const ComplexityConstants& c, double mu, double eta, double n_mc) {
    const double a1 = a1_const(c, mu);
    const double a2 = a2_const(c, mu);
    const double xs2 = c.x_star_norm * c.x_star_norm;
    const double bracket =
        (4.0 * mu * mu * c.L_f * c.L_f + 8.0 * c.K * c.K * c.d) * xs2 +
        2.0 * mu * mu * c.L_f * c.L_f * c.x_star_f_norm * c.x_star_f_norm +
        2.0 * c.K * c.K * mu * mu * 3.0 * c.d * c.d +
        4.0 * c.g_at_zero * c.g_at_zero * c.d;
    return 2.0 * a1 * xs2 + 2.0 * a1 * c.e_x0_minus_xstar_sq +
           (4.0 * a1 / c.m) * std::exp(3.0 * c.K * mu * std::sqrt((double)c.d)) * c.d +
           (4.0 * a1 / c.m) * (std::sqrt(2.0 * a1) / (mu * std::pow(n_mc, 0.25))) *
               (xs2 + a2 / (2.0 * a1)) +
           (2.0 * a1 * eta / c.m) * (2.0 * std::exp(6.0 * c.K * mu * std::sqrt((double)c.d)) /
                                     (mu * mu)) * bracket +
           a2;
}

constexpr double b_const() { return (1.0 + 0.5 * kE) / 3.0; }

// Exponent in the eta cap; implemented exactly as displayed, with
// mu*sqrt(mu)*d inside.
double eta_cap_smoothing(const ComplexityConstants& c, double mu) {
    const double denom = 4.0 * std::exp(6.0 * c.K * mu * std::sqrt(mu) * c.d) *
                         (4.0 * mu * mu * c.L_f * c.L_f + 8.0 * c.K * c.K * c.d);
    return c.m * mu * mu / denom;
}

double n_requirement(const ComplexityConstants& c, double epsilon, double mu, double eta,
                     long k, double n_current) {
    const double beta = c.m - c.alpha;
    (void)beta;
    const double rho = 1.0 + 4.0 * c.L * c.L + 4.0 * c.d * c.alpha;
    const double a = a_const(c, mu, eta, n_current);
    const double numer = ((4.0 / (mu * mu)) * (2.0 * eta + 2.0) * a + 16.0 * c.d * b_const()) *
                         (std::exp(eta * k * rho) - 1.0);
    const double denom = epsilon * (1.0 + 2.0 * c.L * c.L + 4.0 * c.d * c.alpha);
    const double n1 = numer / denom;
    const double a1 = a1_const(c, mu);
    const double n_floor = std::pow(4.0 * std::sqrt(2.0 * a1) / (c.m * mu), 4.0);
    return std::max(n1 * n1, n_floor);
}

}  // namespace

HyperParameters select_hyperparameters(double epsilon, const ComplexityConstants& c) {
    if (!(epsilon > 0.0)) throw std::domain_error("select_hyperparameters: epsilon must be > 0");
    if (!(c.K > 0.0) || c.d < 1)
        throw std::domain_error("select_hyperparameters: mu inequality infeasible (K, d)");
    const double beta = c.m - c.alpha;
    if (!(beta > 0.0))
        throw std::domain_error("select_hyperparameters: k*eta inequality infeasible (m <= alpha)");
    if (!(c.C > 0.0))
        throw std::domain_error("select_hyperparameters: eta inequality infeasible (C <= 0)");

    HyperParameters h;
    h.mu = 1.0 / (6.0 * c.K * std::sqrt((double)c.d));
    const double eta_acc = std::pow(epsilon / (4.0 * kSqrt2 * c.C), 2.0);
    h.eta = std::min(eta_acc, eta_cap_smoothing(c, h.mu));
    if (!(h.eta > 0.0))
        throw std::domain_error("select_hyperparameters: eta inequality infeasible");

    const double keta_min = std::log(2.0 * kSqrt2 * c.w2_init / epsilon) / beta;
    h.k = keta_min > 0.0 ? static_cast<long>(std::ceil(keta_min / h.eta)) : 1;
    if (h.k < 1) h.k = 1;

    const double a1 = a1_const(c, h.mu);
    double n = std::pow(4.0 * std::sqrt(2.0 * a1) / (c.m * h.mu), 4.0);
    for (int it = 0; it < 200; ++it) {
        const double next = n_requirement(c, epsilon, h.mu, h.eta, h.k, n);
        if (!std::isfinite(next))
            throw std::domain_error("select_hyperparameters: N inequality infeasible (overflow)");
        if (std::fabs(next - n) <= 1e-9 * std::max(1.0, n)) { n = next; break; }
        n = next;
    }
    h.n_mc = n;
    return h;
}

std::vector<double> hyperparameter_slacks(double epsilon, const ComplexityConstants& c,
                                          const HyperParameters& h) {
    const double beta = c.m - c.alpha;
    std::vector<double> slack(4);
    slack[0] = 1.0 / (6.0 * c.K * std::sqrt((double)c.d)) - h.mu;
    slack[1] = h.k * h.eta - std::log(2.0 * kSqrt2 * c.w2_init / epsilon) / beta;
    slack[2] = std::min(std::pow(epsilon / (4.0 * kSqrt2 * c.C), 2.0),
                        eta_cap_smoothing(c, h.mu)) - h.eta;
    slack[3] = h.n_mc - n_requirement(c, epsilon, h.mu, h.eta, h.k, h.n_mc);
    return slack;
}

}  // namespace alang
