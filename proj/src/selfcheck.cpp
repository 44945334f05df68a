#include "alang/selfcheck.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "alang/metrics.hpp"
#include "alang/potential.hpp"
#include "alang/sampler.hpp"
#include "alang/smoothing.hpp"
#include "alang/special.hpp"

namespace alang {

namespace {

struct Reporter {
    std::ostream& os;
    int failures = 0;
    void check(const char* name, bool ok, double value, double limit) {
        os << (ok ? "[ok]   " : "[FAIL] ") << name << "  value=" << value
           << " limit=" << limit << "\n";
        if (!ok) ++failures;
    }
};

AnchorPair smoothed_laplace_pair(double mu) {
    const double lam = std::numbers::sqrt2;
    AnchorPair pair;
    pair.U = laplace1d_potential(1.0 / lam);
    pair.U0.dim = 1;
    pair.U0.value = [mu, lam](std::span<const double> x) {
        return l1_smoothed_value(x, mu, lam);
    };
    pair.U0.grad = [mu, lam](std::span<const double> x, std::span<double> g) {
        l1_smoothed_grad(x, mu, lam, g);
    };
    return pair;
}

}  // namespace

int run_selfcheck(std::ostream& os) {
    Reporter rep{os};

    // anchor identities: sigma^2 e^{U0-U} = 1 and b = -grad U0 * sigma^2
    {
        const AnchorPair pair = smoothed_laplace_pair(0.5);
        RngStream rng(7, 1);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = 3.0 * rng.next_normal();
            std::span<const double> xs(&x, 1);
            double b;
            const auto ev = pair.eval(xs, std::span<double>(&b, 1));
            double g;
            pair.U0.grad(xs, std::span<double>(&g, 1));
            const double id1 = std::fabs(ev.sigma * ev.sigma * std::exp(-ev.gap) - 1.0);
            const double id2 = std::fabs(b + g * ev.sigma * ev.sigma);
            worst = std::max(worst, std::max(id1, id2));
        }
        rep.check("anchor-identities", worst <= 1e-12, worst, 1e-12);
    }

    // U = U0 reduction: anchored chain bitwise equals ULA under shared noise
    {
        Potential quad;
        quad.dim = 2;
        quad.value = [](std::span<const double> x) { return 0.5 * squared_norm(x); };
        quad.grad = [](std::span<const double> x, std::span<double> g) {
            for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i];
        };
        AnchorPair pair{quad, quad};
        SamplerConfig cfg{0.1, 200, std::nullopt, 1};
        const std::vector<double> x0{1.0, -2.0};
        const auto a = run_chain(SamplerKind::anchored, cfg, pair, x0, RngStream(11, 3));
        const auto u = run_chain(SamplerKind::ula, cfg, pair, x0, RngStream(11, 3));
        const bool same = a.samples.data.size() == u.samples.data.size() &&
                          std::memcmp(a.samples.data.data(), u.samples.data.data(),
                                      a.samples.data.size() * sizeof(double)) == 0;
        rep.check("ula-reduction-bitwise", same, same ? 0.0 : 1.0, 0.0);
    }

    // anchored vs time-change coupling over 300 steps
    {
        const AnchorPair pair = smoothed_laplace_pair(0.5);
        SamplerConfig cfg{0.1, 300, std::nullopt, 1};
        const std::vector<double> x0{1.5};
        const auto a = run_chain(SamplerKind::anchored, cfg, pair, x0, RngStream(5, 9));
        const auto t = run_chain(SamplerKind::timechange, cfg, pair, x0, RngStream(5, 9));
        double worst = 0.0;
        for (long i = 0; i < a.samples.n; ++i) {
            const double rel = std::fabs(a.samples.data[i] - t.samples.data[i]) /
                               std::max(1.0, std::fabs(t.samples.data[i]));
            worst = std::max(worst, rel);
        }
        rep.check("time-change-equivalence", worst <= 1e-10, worst, 1e-10);
    }

    // smoothing gap lemma on a grid (l1, d = 2, mu = 0.5)
    {
        const double lam = 1.0, mu = 0.5;
        const int d = 2;
        const double K = lam * std::sqrt(static_cast<double>(d));
        const double bound = smoothing_gap_bound(K, mu, d);
        Penalty l1 = make_penalty(PenaltyKind::L1, lam);
        double worst = 0.0;
        RngStream rng(3, 1);
        for (int i = 0; i < 500; ++i) {
            std::vector<double> x{4.0 * rng.next_normal(), 4.0 * rng.next_normal()};
            const double gap = std::fabs(l1.value(x) - l1_smoothed_value(x, mu, lam));
            worst = std::max(worst, gap);
        }
        rep.check("smoothing-gap-bound", worst <= bound, worst, bound);
    }

    // MC gradient estimator vs closed form, 2 SE at N = 20000
    {
        const double mu = 0.7, lam = 1.0;
        const double x = 0.4;
        RngStream rng(21, 2);
        const int n_mc = 20000;
        double acc = 0.0, acc2 = 0.0;
        for (int i = 0; i < n_mc; ++i) {
            const double z = rng.next_normal();
            const double term = z * lam * std::fabs(x + mu * z) / mu;
            acc += term;
            acc2 += term * term;
        }
        const double mean = acc / n_mc;
        const double se = std::sqrt((acc2 / n_mc - mean * mean) / n_mc);
        const double want = l1_smoothed_grad1(x, mu, lam);
        const double dev = std::fabs(mean - want);
        rep.check("mc-grad-unbiased", dev <= 3.0 * se, dev, 3.0 * se);
    }

    // brute-force W2 oracle: translation of a sample by c moves W2 by c
    {
        RngStream rng(13, 4);
        std::vector<double> a(64), b(64);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = rng.next_normal();
            b[i] = a[i] + 0.75;
        }
        const double w = brute_force_w2_discrete(a, b);
        rep.check("w2-shift-invariance", std::fabs(w - 0.75) <= 1e-12,
                  std::fabs(w - 0.75), 1e-12);
    }

    // quantile round trip for the Laplace CDF
    {
        double worst = 0.0;
        for (int i = 1; i < 100; ++i) {
            const double p = i / 100.0;
            const double x = laplace_quantile(p, 0.3, 1.7);
            worst = std::max(worst, std::fabs(laplace_cdf(x, 0.3, 1.7) - p));
        }
        rep.check("laplace-quantile-roundtrip", worst <= 1e-12, worst, 1e-12);
    }

    os << (rep.failures == 0 ? "selfcheck: all checks passed\n"
                             : "selfcheck: FAILURES present\n");
    return rep.failures;
}

}  // namespace alang
