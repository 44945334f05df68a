#pragma once

#include <functional>
#include <span>

namespace alang {

// Error function; |result - erf(x)| <= 1e-12 everywhere.
double erf(double x);

// Standard normal CDF, computed through erfc for accuracy in the tails.
double normal_cdf(double x);

// Standard normal quantile (used for test oracles and prior setup).
double normal_quantile(double p);

// Modified Bessel function of the second kind K_v(x), x > 0.
// Relative error <= 1e-10 for v in [0, 5], x in [1e-6, 50].
double bessel_k(double v, double x);

// Exact inverse CDF of Laplace(loc, scale); p in (0, 1).
double laplace_quantile(double p, double loc, double scale);

double laplace_cdf(double x, double loc, double scale);

double laplace_pdf(double x, double loc, double scale);

struct Bracket {
    double lo;
    double hi;
};

// Quantile function with its provenance; numeric-inversion instances come
// from make_numeric_quantile below.
struct QuantileFn {
    std::function<double(double)> fn;
    bool analytic = true;
    double operator()(double p) const { return fn(p); }
};

// Solves cdf(x) = p on the bracket by bisection; |cdf(result) - p| <= 1e-10.
double numeric_quantile(const std::function<double(double)>& cdf, double p, Bracket bracket);

QuantileFn make_numeric_quantile(std::function<double(double)> cdf, Bracket bracket);

// Integral of f over [a, b] by composite 16-point Gauss-Legendre.
double integrate(const std::function<double(double)>& f, double a, double b, int panels = 8);

}  // namespace alang
