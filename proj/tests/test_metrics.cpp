#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "alang/metrics.hpp"
#include "alang/rng.hpp"

using namespace alang;

namespace {

QuantileFn uniform01_quantile() { return QuantileFn{[](double p) { return p; }}; }

}  // namespace

TEST_CASE("w2 of a perfectly placed sample is zero") {
    const long n = 40;
    std::vector<double> sample(n);
    for (long i = 1; i <= n; ++i) sample[i - 1] = static_cast<double>(i) / n;
    CHECK(w2_1d_trimmed(sample, uniform01_quantile(), 0.0) == 0.0);
}

TEST_CASE("a shifted sample scores the shift") {
    const long n = 50;
    const double c = 0.37;
    std::vector<double> sample(n);
    for (long i = 1; i <= n; ++i) sample[i - 1] = static_cast<double>(i) / n + c;
    CHECK(w2_1d_trimmed(sample, uniform01_quantile(), 0.0) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("ten-term case against a written-out evaluation") {
    // fixed sample of 10 values vs uniform(0,1) quantiles at i/10
    const std::vector<double> sample{0.91, 0.02, 0.34, 0.55, 0.18,
                                     0.72, 0.46, 0.29, 0.63, 0.88};
    std::vector<double> sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    double acc = 0.0;
    for (int i = 1; i <= 10; ++i) {
        const double diff = sorted[i - 1] - i / 10.0;
        acc += diff * diff;
    }
    const double want = std::sqrt(acc / 10.0);
    CHECK(w2_1d_trimmed(sample, uniform01_quantile(), 0.0) ==
          doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("trimming drops the right index set") {
    const auto kept = w2_trim_kept_indices(100, 0.01);
    CHECK(kept.front() == 2);   // 0.01 * 100 = 1 < i
    CHECK(kept.back() == 99);   // i <= 99
    CHECK(static_cast<long>(kept.size()) == 98);
    const auto all = w2_trim_kept_indices(10, 0.0);
    CHECK(static_cast<long>(all.size()) == 10);
}

TEST_CASE("precomputed-quantile variant matches the functional one") {
    RngStream rng(5, 5);
    const long n = 200;
    std::vector<double> sample(n);
    for (double& v : sample) v = rng.next_normal();
    QuantileFn q{[](double p) { return laplace_quantile(p, 0.0, 0.9); }};
    const double trim = 0.02;
    const auto kept = w2_trim_kept_indices(n, trim);
    std::vector<double> quantiles(kept.size());
    for (std::size_t m = 0; m < kept.size(); ++m)
        quantiles[m] = laplace_quantile(static_cast<double>(kept[m]) / n, 0.0, 0.9);
    CHECK(w2_1d_trimmed(sample, q, trim) ==
          doctest::Approx(w2_1d_trimmed_pre(sample, quantiles, trim)).epsilon(1e-15));
}

TEST_CASE("w2 validates its inputs") {
    std::vector<double> tiny{1.0, 2.0};
    CHECK_THROWS_AS(w2_1d_trimmed(tiny, uniform01_quantile(), 0.0), std::domain_error);
    std::vector<double> ok(20, 0.5);
    CHECK_THROWS_AS(w2_1d_trimmed(ok, uniform01_quantile(), 0.7), std::domain_error);
}

TEST_CASE("w2 is translation covariant and permutation invariant") {
    RngStream rng(6, 1);
    const long n = 64;
    std::vector<double> sample(n);
    for (double& v : sample) v = rng.next_normal();
    const double c = 1.23;
    QuantileFn q{[](double p) { return laplace_quantile(p, 0.0, 1.0); }};
    QuantileFn q_shift{[c](double p) { return laplace_quantile(p, 0.0, 1.0) + c; }};
    std::vector<double> shifted = sample;
    for (double& v : shifted) v += c;
    CHECK(w2_1d_trimmed(shifted, q_shift, 0.01) ==
          doctest::Approx(w2_1d_trimmed(sample, q, 0.01)).epsilon(1e-12));

    std::vector<double> shuffled = sample;
    std::reverse(shuffled.begin(), shuffled.end());
    std::swap(shuffled[3], shuffled[40]);
    CHECK(w2_1d_trimmed(shuffled, q, 0.01) == w2_1d_trimmed(sample, q, 0.01));
}

TEST_CASE("sliced w2 reduces to the single-column value") {
    RngStream rng(7, 1);
    std::vector<double> col(128);
    for (double& v : col) v = rng.next_normal();
    QuantileFn q{[](double p) { return laplace_quantile(p, 0.0, 1.0); }};
    const double single = w2_1d_trimmed(col, q, 0.01);
    CHECK(sliced_w2({col}, {q}, 0.01) == doctest::Approx(single).epsilon(1e-15));
    // identical columns keep the same value
    CHECK(sliced_w2({col, col}, {q, q}, 0.01) == doctest::Approx(single).epsilon(1e-15));
}

TEST_CASE("sliced w2 combines per-dimension distances") {
    // columns placed exactly at shifted quantiles give per-dim 0.3 and 0.4
    const long n = 100;
    std::vector<double> c1(n), c2(n);
    for (long i = 1; i <= n; ++i) {
        c1[i - 1] = static_cast<double>(i) / n + 0.3;
        c2[i - 1] = static_cast<double>(i) / n + 0.4;
    }
    const QuantileFn q = uniform01_quantile();
    const double got = sliced_w2({c1, c2}, {q, q}, 0.0);
    CHECK(got == doctest::Approx(std::sqrt((0.09 + 0.16) / 2.0)).epsilon(1e-12));
}

TEST_CASE("classification accuracy conventions") {
    // zero weights predict class 1 everywhere (>= tie-break)
    const std::vector<double> X{1.0, -1.0, 2.0, 0.5};
    const std::vector<double> y{1.0, 0.0, 1.0, 1.0};
    std::vector<double> w{0.0};
    CHECK(classification_accuracy(w, X, y, 4, 1) == doctest::Approx(0.75));

    // separable set with the separating weight vector
    const std::vector<double> Xs{1.0, 2.0, -1.0, -3.0};
    const std::vector<double> ys{1.0, 1.0, 0.0, 0.0};
    std::vector<double> ws{2.0};
    CHECK(classification_accuracy(ws, Xs, ys, 4, 1) == 1.0);

    CHECK_THROWS_AS(classification_accuracy(ws, Xs, ys, 4, 2), std::invalid_argument);
}

TEST_CASE("random weights on random labels sit at chance level") {
    RngStream rng(8, 1);
    const int n = 10000, d = 3;
    std::vector<double> X(n * d), y(n);
    for (double& v : X) v = rng.next_normal();
    for (double& v : y) v = rng.next_uniform() < 0.5 ? 0.0 : 1.0;
    std::vector<double> w{0.4, -0.2, 0.9};
    const double acc = classification_accuracy(w, X, y, n, d);
    CHECK(acc >= 0.48);
    CHECK(acc <= 0.52);
}

TEST_CASE("tv histogram on matched and mismatched samples") {
    const double b = 1.0 / std::numbers::sqrt2;
    auto dens = [b](double x) { return laplace_pdf(x, 0.0, b); };
    RngStream rng(9, 1);
    const long n = 1000000;

    // inverse-CDF sampling of the true density
    std::vector<double> good(n);
    for (double& v : good) v = laplace_quantile(rng.next_uniform_pos() * 0.999998 + 1e-6, 0.0, b);
    CHECK(tv_histogram(good, dens, 50, -4.0, 4.0) <= 0.02);

    // standard normal sample against the laplace density
    std::vector<double> bad(n);
    for (double& v : bad) v = rng.next_normal();
    CHECK(tv_histogram(bad, dens, 50, -4.0, 4.0) >= 0.05);

    // uniform sample, uniform density, 2 bins
    std::vector<double> unif(n);
    for (double& v : unif) v = rng.next_uniform();
    auto flat = [](double) { return 1.0; };
    CHECK(tv_histogram(unif, flat, 2, 0.0, 1.0) <= 3.0 / std::sqrt(static_cast<double>(n)));

    CHECK_THROWS_AS(tv_histogram(good, dens, 1, -1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(tv_histogram(good, dens, 10, 1.0, 1.0), std::domain_error);
}

TEST_CASE("brute force discrete w2") {
    std::vector<double> a{0.3, -1.0, 2.2};
    CHECK(brute_force_w2_discrete(a, a) == 0.0);
    std::vector<double> s1{0.0, 1.0}, s2{1.0, 2.0};
    CHECK(brute_force_w2_discrete(s1, s2) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> bad{1.0};
    CHECK_THROWS_AS(brute_force_w2_discrete(s1, bad), std::invalid_argument);
}

TEST_CASE("sorted coupling is the optimal permutation for n = 6") {
    RngStream rng(10, 1);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> a(6), b(6);
        for (double& v : a) v = rng.next_normal();
        for (double& v : b) v = rng.next_normal();
        const double got = brute_force_w2_discrete(a, b);

        // exhaustive search over all 720 couplings
        std::vector<int> perm{0, 1, 2, 3, 4, 5};
        double best = 1e300;
        do {
            double acc = 0.0;
            for (int i = 0; i < 6; ++i) {
                const double diff = a[i] - b[perm[i]];
                acc += diff * diff;
            }
            best = std::min(best, std::sqrt(acc / 6.0));
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(got == doctest::Approx(best).epsilon(1e-12));
    }
}
