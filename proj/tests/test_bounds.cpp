#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "alang/bounds.hpp"

using namespace alang;

TEST_CASE("eta_max terms at alpha = 0") {
    // with alpha = 0 the first two candidates are 1/L^2 and 1/(4m)
    W2BoundInputs in;
    in.m = 0.2;
    in.L = 0.5;
    in.alpha = 0.0;
    const auto bound = theoretical_eta_max_and_C(in);
    const double t1 = 1.0 / (0.5 * 0.5);
    const double t2 = 1.0 / (4.0 * 0.2);
    CHECK(bound.eta_max <= t1);
    CHECK(bound.eta_max <= t2);
    CHECK(bound.rate == doctest::Approx(0.2));
}

TEST_CASE("hand-evaluated case (m=1, L=2, alpha=0.1)") {
    W2BoundInputs in;
    in.m = 1.0;
    in.L = 2.0;
    in.alpha = 0.1;
    in.x_star_norm = 0.3;
    in.sigma_xstar_hs = 1.2;
    in.e_x0_sq = 4.0;
    in.e_pi_sq = 1.5;
    const auto bound = theoretical_eta_max_and_C(in);

    // independent spreadsheet-style evaluation of the four candidates
    const double beta = 1.0 - 0.1;
    const double s = 1.0 + 4.0 * 0.1;  // 1.4
    const double cand1 = 1.0 / (2.0 * 2.0 + 4.0 * 0.1);
    const double cand2 = 1.0 / (4.0 * beta);
    const double cand3 =
        (std::sqrt(beta) / (20.0 * std::sqrt(2.0) * s)) * (std::sqrt(beta) / (20.0 * std::sqrt(2.0) * s));
    const double inner = 2.0 * 2.0 * std::sqrt(s) + 20.0 * 2.0 * s;
    const double cand4 = (beta / (8.0 * std::sqrt(2.0) * inner)) * (beta / (8.0 * std::sqrt(2.0) * inner));
    double want = cand1;
    if (cand2 < want) want = cand2;
    if (cand3 < want) want = cand3;
    if (cand4 < want) want = cand4;
    CHECK(std::fabs(bound.eta_max - want) <= 1e-12);

    const double reach = 0.3 + 1.2;
    const double c1 = 3.0 * 2.0 * std::sqrt(s) * reach;
    const double c2 = 7.0 * s * reach;
    const double c3 = std::sqrt(4.0 * 4.0 + 6.0 * 1.5);
    const double c_want = (2.0 * c1 + 8.0 * 2.0 * c2 + 2.0 * std::sqrt(2.0) * c3 * inner) / beta +
                          (2.0 * c2 + 10.0 * std::sqrt(2.0) * s * c3) / std::sqrt(beta);
    CHECK(std::fabs(bound.C - c_want) <= 1e-12 * c_want);
}

TEST_CASE("C depends affinely on the initial-moment constant") {
    W2BoundInputs in;
    in.m = 1.0;
    in.L = 2.0;
    in.alpha = 0.1;
    in.x_star_norm = 0.0;
    in.sigma_xstar_hs = 0.0;
    // reach = 0, so C is proportional to C3 = sqrt(4 E||X0||^2 + 6 E_pi||X||^2)
    in.e_x0_sq = 1.0;
    in.e_pi_sq = 1.0;
    const double c_base = theoretical_eta_max_and_C(in).C;
    in.e_x0_sq = 4.0;
    in.e_pi_sq = 4.0;  // doubles C3
    const double c_doubled = theoretical_eta_max_and_C(in).C;
    in.e_x0_sq = 9.0;
    in.e_pi_sq = 9.0;  // triples C3
    const double c_tripled = theoretical_eta_max_and_C(in).C;
    CHECK(c_doubled == doctest::Approx(2.0 * c_base).epsilon(1e-12));
    CHECK(c_tripled - c_doubled == doctest::Approx(c_doubled - c_base).epsilon(1e-12));
}

TEST_CASE("bound curve shape") {
    W2BoundInputs in;
    in.m = 1.0;
    in.L = 1.0;
    in.alpha = 0.0;
    in.e_x0_sq = 1.0;
    in.e_pi_sq = 1.0;
    const auto bound = theoretical_eta_max_and_C(in);
    const double eta = bound.eta_max / 10.0;
    const double at0 = w2_bound_curve(bound, 2.0, eta, 0);
    const double at100 = w2_bound_curve(bound, 2.0, eta, 100);
    CHECK(at0 == doctest::Approx(std::numbers::sqrt2 * 2.0 + std::numbers::sqrt2 * bound.C * std::sqrt(eta)));
    CHECK(at100 < at0);
    CHECK(at100 >= std::numbers::sqrt2 * bound.C * std::sqrt(eta));
}

TEST_CASE("invalid assumption constants are rejected") {
    W2BoundInputs in;
    in.m = 1.0;
    in.L = 2.0;
    in.alpha = 1.0;  // alpha >= m: contraction fails
    CHECK_THROWS_AS(theoretical_eta_max_and_C(in), std::domain_error);
    in.alpha = 0.1;
    in.L = 0.5;  // L < m
    CHECK_THROWS_AS(theoretical_eta_max_and_C(in), std::domain_error);
}

namespace {

ComplexityConstants demo_constants() {
    ComplexityConstants c;
    c.K = 1.0;
    c.d = 4;
    c.m = 1.0;
    c.L = 2.0;
    c.alpha = 0.1;
    c.L_f = 2.0;
    c.C = 50.0;
    c.w2_init = 3.0;
    c.x_star_norm = 0.2;
    c.x_star_f_norm = 0.1;
    c.e_x0_minus_xstar_sq = 2.0;
    c.g_at_zero = 0.0;
    return c;
}

}  // namespace

TEST_CASE("selected hyperparameters satisfy all four inequalities") {
    const auto c = demo_constants();
    const double eps = 0.5;
    const auto h = select_hyperparameters(eps, c);
    CHECK(h.mu <= 1.0 / (6.0 * c.K * std::sqrt((double)c.d)) + 1e-15);
    CHECK(h.k >= 1);
    const auto slack = hyperparameter_slacks(eps, c, h);
    for (double s : slack) CHECK(s >= -1e-9);
}

TEST_CASE("halving epsilon at least quarters eta") {
    const auto c = demo_constants();
    const auto h1 = select_hyperparameters(0.5, c);
    const auto h2 = select_hyperparameters(0.25, c);
    CHECK(h2.eta <= h1.eta / 4.0 + 1e-18);
    // and eta always respects the accuracy cap (epsilon / (4 sqrt2 C))^2
    const double cap = std::pow(0.25 / (4.0 * std::numbers::sqrt2 * c.C), 2.0);
    CHECK(h2.eta <= cap + 1e-18);
}

TEST_CASE("k eta clears the mixing requirement by substitution") {
    const auto c = demo_constants();
    const double eps = 0.3;
    const auto h = select_hyperparameters(eps, c);
    const double beta = c.m - c.alpha;
    CHECK(h.k * h.eta >= std::log(2.0 * std::numbers::sqrt2 * c.w2_init / eps) / beta);
}

TEST_CASE("infeasible constants report the binding inequality") {
    auto c = demo_constants();
    c.alpha = 2.0;  // m <= alpha
    try {
        select_hyperparameters(0.5, c);
        FAIL("expected domain_error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("k*eta") != std::string::npos);
    }
    CHECK_THROWS_AS(select_hyperparameters(-1.0, demo_constants()), std::domain_error);
}
