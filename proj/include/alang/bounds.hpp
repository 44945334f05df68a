#pragma once

// Step-size cap, Wasserstein bound constants, and the accuracy-driven
// hyperparameter selection for the Gaussian-smoothing scheme.

#include <string>
#include <vector>

namespace alang {

struct W2BoundInputs {
    double m = 1.0;            // strong monotonicity of the drift
    double L = 1.0;            // Lipschitz constant of the drift
    double alpha = 0.0;        // squared-HS Lipschitz constant of sigma I_d, alpha < m
    double x_star_norm = 0.0;  // ||x*||, x* the minimizer of U0
    double sigma_xstar_hs = 1.0;  // ||sigma(x*) I_d||_HS = |sigma(x*)| sqrt(d)
    double e_x0_sq = 0.0;      // E ||X0||^2
    double e_pi_sq = 0.0;      // E_pi ||X||^2
};

struct W2Bound {
    double eta_max = 0.0;
    double C = 0.0;
    double rate = 0.0;  // m - alpha
};

// eta_max is a four-way min, C the displayed constant; rate = m - alpha.
W2Bound theoretical_eta_max_and_C(const W2BoundInputs& in);

// sqrt(2) e^{-(m-alpha) k eta} W2(nu0, pi) + sqrt(2) C sqrt(eta)
double w2_bound_curve(const W2Bound& bound, double w2_init, double eta, long k);

struct ComplexityConstants {
    double K = 1.0;       // Lipschitz constant of g
    int d = 1;
    double m = 1.0;       // strong monotonicity (rate beta = m - alpha)
    double L = 1.0;
    double alpha = 0.0;
    double L_f = 1.0;     // smoothness of f
    double C = 1.0;       // constant from the W2 bound
    double w2_init = 1.0; // W2(nu0, pi)
    double x_star_norm = 0.0;    // minimizer of U0
    double x_star_f_norm = 0.0;  // minimizer of f
    double e_x0_minus_xstar_sq = 1.0;  // E ||x0 - x*||^2
    double g_at_zero = 0.0;
};

struct HyperParameters {
    double mu = 0.0;
    long k = 0;
    double eta = 0.0;
    double n_mc = 0.0;  // N lower bound (can be astronomically large)
};

// Picks the largest mu and eta and the smallest k and N satisfying the
// four accuracy inequalities; throws with the name of the inequality that
// cannot be met when the constants are infeasible.
HyperParameters select_hyperparameters(double epsilon, const ComplexityConstants& c);

// Direct-substitution check used by tests: returns the residual slack of
// each of the four inequalities (all must be >= 0).
std::vector<double> hyperparameter_slacks(double epsilon, const ComplexityConstants& c,
                                          const HyperParameters& h);

}  // namespace alang
