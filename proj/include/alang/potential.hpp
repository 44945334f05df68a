#pragma once

// Target potentials U and reference potentials U0. A Potential bundles a
// value function, an optional exact gradient, and the constants (K, m, L)
// the bound calculator consumes. Potentials are immutable once built and
// safe to share across threads.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace alang {

struct PotentialMetadata {
    std::optional<double> lipschitz_K;       // Lipschitz constant of the nonsmooth part
    std::optional<double> strong_convexity;  // m
    std::optional<double> smoothness;        // L
};

struct Potential {
    int dim = 1;
    std::function<double(std::span<const double>)> value;
    // Writes the gradient into `out` (size dim); empty when no exact gradient.
    std::function<void(std::span<const double>, std::span<double>)> grad;
    PotentialMetadata meta;

    bool has_grad() const { return static_cast<bool>(grad); }
};

enum class PenaltyKind { L1, SCAD, MCP };

// Folded sparsity penalties; value(x) sums the per-coordinate profile, with
// lambda already included (g(0) = 0 for all three kinds).
struct Penalty {
    PenaltyKind kind = PenaltyKind::L1;
    double lambda = 1.0;
    double a = 10.0;  // SCAD/MCP only, must be > 1

    double coord_value(double t) const;
    double value(std::span<const double> x) const;
};

Penalty make_penalty(PenaltyKind kind, double lambda, double a = 10.0);
PenaltyKind penalty_kind_from_string(const std::string& name);

double penalty_value(const Penalty& p, std::span<const double> x);

// U(x) = f(x) + m0*||x||^2 + g(x) with smooth f and nonsmooth g.
struct CompositePotential {
    Potential f;
    Penalty g;
    double m0 = 0.0;
    int dim = 1;

    double value(std::span<const double> x) const;
    // Value and gradient of the smooth part f + m0||x||^2.
    double smooth_value(std::span<const double> x) const;
    void smooth_grad(std::span<const double> x, std::span<double> out) const;
};

// ---- factories -------------------------------------------------------

// U(x) = |x - loc| / b. No additive constant: U(0) = 0.
Potential laplace1d_potential(double b, double loc = 0.0);

// Negative log density of the centered symmetric multivariate Laplace with
// covariance-like matrix Sigma (normalization constants included). For
// d = 2 the K0 form is used; the general-d Bessel form is also exposed for
// cross-checking.
Potential multivariate_laplace_potential(const std::vector<double>& sigma, int d);
Potential multivariate_laplace_potential_general(const std::vector<double>& sigma, int d);

// U(x) = iota * log(1 + ||x||^2) with exact gradient. Warns (stderr) when
// iota <= 1 + d/2, where the density is no longer integrable; pass
// warn_nonintegrable = false when building reference potentials, which do
// not need to integrate.
Potential heavy_tail_potential(double iota, int d, bool warn_nonintegrable = true);

// Anchoring inputs for the d-dimensional Student-t target.
struct StudentTPair {
    Potential U;      // ((d+nu)/2) log q
    Potential U0;     // beta log q, beta = (d+nu)/2 - 1
    std::function<double(std::span<const double>)> q;
    std::function<void(std::span<const double>, std::span<double>)> grad_q;
    double beta = 0.0;
    bool condition_ok = false;  // d + nu > 2 + d * kappa(Sigma)
};

StudentTPair student_t_pair(double nu, const std::vector<double>& mu,
                            const std::vector<double>& sigma, int d);

// Mean negative log-likelihood of logistic regression without bias, with
// exact gradient; numerically stable for large |x' X_i|.
Potential logistic_loss(const std::vector<double>& X, const std::vector<double>& y,
                        int n, int d);

// Deterministic smoothing g_eps of a penalty: C^1 value and exact gradient.
Potential smoothed_penalty(const Penalty& p, double eps);

// Per-coordinate smoothed value/derivative (exposed for tests).
double smoothed_penalty_coord(const Penalty& p, double eps, double t);
double smoothed_penalty_coord_deriv(const Penalty& p, double eps, double t);

double squared_norm(std::span<const double> x);

}  // namespace alang
