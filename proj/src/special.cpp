#include "alang/special.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace alang {

double erf(double x) { return std::erf(x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
    return numeric_quantile([](double x) { return normal_cdf(x); }, p, {-40.0, 40.0});
}

double bessel_k(double v, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k: requires x > 0");
    return std::cyl_bessel_k(std::fabs(v), x);
}

double laplace_quantile(double p, double loc, double scale) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("laplace_quantile: p outside (0,1)");
    if (!(scale > 0.0)) throw std::domain_error("laplace_quantile: scale must be positive");
    if (p < 0.5) return loc + scale * std::log(2.0 * p);
    return loc - scale * std::log(2.0 * (1.0 - p));
}

double laplace_cdf(double x, double loc, double scale) {
    const double z = (x - loc) / scale;
    return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

double laplace_pdf(double x, double loc, double scale) {
    return 0.5 / scale * std::exp(-std::fabs(x - loc) / scale);
}

double numeric_quantile(const std::function<double(double)>& cdf, double p, Bracket bracket) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("numeric_quantile: p outside (0,1)");
    double lo = bracket.lo, hi = bracket.hi;
    double flo = cdf(lo), fhi = cdf(hi);
    if (flo > p || fhi < p) throw std::domain_error("numeric_quantile: p not bracketed");
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = cdf(mid);
        if (std::fabs(fm - p) <= 1e-10) return mid;
        if (fm < p) lo = mid; else hi = mid;
    }
    return mid;
}

QuantileFn make_numeric_quantile(std::function<double(double)> cdf, Bracket bracket) {
    QuantileFn q;
    q.analytic = false;
    q.fn = [cdf = std::move(cdf), bracket](double p) { return numeric_quantile(cdf, p, bracket); };
    return q;
}

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) panels = 1;
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < kGlNodes.size(); ++i)
            s += kGlWeights[i] * (f(mid - half * kGlNodes[i]) + f(mid + half * kGlNodes[i]));
        total += s * half;
    }
    return total;
}

}  // namespace alang
