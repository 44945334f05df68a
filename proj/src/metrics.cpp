#include "alang/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace alang {

std::vector<long> w2_trim_kept_indices(long n, double trim) {
    std::vector<long> kept;
    for (long i = 1; i <= n; ++i)
        if (trim * n < static_cast<double>(i) && static_cast<double>(i) <= (1.0 - trim) * n)
            kept.push_back(i);
    return kept;
}

double w2_1d_trimmed_pre(std::span<const double> sample, std::span<const double> kept_quantiles,
                         double trim) {
    const long n = static_cast<long>(sample.size());
    if (!(trim >= 0.0 && trim < 0.5)) throw std::domain_error("w2_1d_trimmed: trim in [0, 0.5)");
    if (n < 10) throw std::domain_error("w2_1d_trimmed: need at least 10 samples");
    const auto kept = w2_trim_kept_indices(n, trim);
    if (kept.empty()) throw std::domain_error("w2_1d_trimmed: no samples left after trimming");
    if (kept.size() != kept_quantiles.size())
        throw std::invalid_argument("w2_1d_trimmed_pre: quantile count mismatch");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    double acc = 0.0;
    for (std::size_t m = 0; m < kept.size(); ++m) {
        const double diff = sorted[kept[m] - 1] - kept_quantiles[m];
        acc += diff * diff;
    }
    return std::sqrt(acc / kept.size());
}

double w2_1d_trimmed(std::span<const double> sample, const QuantileFn& q, double trim) {
    const long n = static_cast<long>(sample.size());
    if (!(trim >= 0.0 && trim < 0.5)) throw std::domain_error("w2_1d_trimmed: trim in [0, 0.5)");
    if (n < 10) throw std::domain_error("w2_1d_trimmed: need at least 10 samples");
    const auto kept = w2_trim_kept_indices(n, trim);
    if (kept.empty()) throw std::domain_error("w2_1d_trimmed: no samples left after trimming");
    std::vector<double> quantiles(kept.size());
    for (std::size_t m = 0; m < kept.size(); ++m)
        quantiles[m] = q(static_cast<double>(kept[m]) / n);
    return w2_1d_trimmed_pre(sample, quantiles, trim);
}

double sliced_w2(const std::vector<std::vector<double>>& columns,
                 const std::vector<QuantileFn>& marginal_quantiles, double trim) {
    const std::size_t d = columns.size();
    if (d < 1 || marginal_quantiles.size() != d)
        throw std::invalid_argument("sliced_w2: need one quantile function per dimension");
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double w = w2_1d_trimmed(columns[j], marginal_quantiles[j], trim);
        acc += w * w;
    }
    return std::sqrt(acc / d);
}

double classification_accuracy(std::span<const double> weights, const std::vector<double>& X,
                               const std::vector<double>& y, int n, int d) {
    if (static_cast<int>(weights.size()) != d || static_cast<int>(X.size()) != n * d ||
        static_cast<int>(y.size()) != n)
        throw std::invalid_argument("classification_accuracy: shape mismatch");
    long correct = 0;
    for (int i = 0; i < n; ++i) {
        double z = 0.0;
        const double* row = &X[i * d];
        for (int j = 0; j < d; ++j) z += row[j] * weights[j];
        const bool predicted_one = z >= 0.0;  // sigmoid(z) >= 0.5
        if (predicted_one == (y[i] == 1.0)) ++correct;
    }
    return static_cast<double>(correct) / n;
}

double tv_histogram(std::span<const double> sample, const std::function<double(double)>& density,
                    int bins, double lo, double hi) {
    if (bins < 2) throw std::domain_error("tv_histogram: need at least 2 bins");
    if (!(hi > lo)) throw std::domain_error("tv_histogram: empty range");
    const double width = (hi - lo) / bins;
    std::vector<long> counts(bins, 0);
    for (double v : sample) {
        if (v < lo || v >= hi) continue;
        int b = static_cast<int>((v - lo) / width);
        if (b >= bins) b = bins - 1;
        ++counts[b];
    }
    const double n = static_cast<double>(sample.size());
    double tv = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double mass = integrate(density, lo + b * width, lo + (b + 1) * width, 2);
        tv += std::fabs(counts[b] / n - mass);
    }
    return 0.5 * tv;
}

double brute_force_w2_discrete(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("brute_force_w2_discrete: length mismatch");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const double diff = sa[i] - sb[i];
        acc += diff * diff;
    }
    return std::sqrt(acc / sa.size());
}

}  // namespace alang
