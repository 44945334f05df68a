#pragma once

// Distances and scores for sample quality: trimmed 1-D 2-Wasserstein
// against a quantile function, its sliced multivariate form, histogram
// total variation, classification accuracy, and a brute-force discrete W2
// oracle.

#include <functional>
#include <span>
#include <vector>

#include "alang/special.hpp"

namespace alang {

// Order-statistic indices kept by the trim rule: 1-based i with
// trim*n < i <= (1-trim)*n. The trim applies to the index set, i.e. to
// sample and quantile grid simultaneously.
std::vector<long> w2_trim_kept_indices(long n, double trim);

// Sorts a copy of the sample and returns the RMS of X_(i) - Q(i/n) over the
// kept indices.
double w2_1d_trimmed(std::span<const double> sample, const QuantileFn& q, double trim);

// Same metric with the quantiles Q(i/n) precomputed for exactly the kept
// indices (in increasing i order); used by the experiment loops where the
// quantile function is expensive.
double w2_1d_trimmed_pre(std::span<const double> sample, std::span<const double> kept_quantiles,
                         double trim);

// sqrt( (1/d) sum_j w2_1d_trimmed(column_j, q_j)^2 ): axis-aligned slices,
// one per dimension.
double sliced_w2(const std::vector<std::vector<double>>& columns,
                 const std::vector<QuantileFn>& marginal_quantiles, double trim);

// Fraction of samples with (sigmoid(w' X_i) >= 0.5) == y_i; ties at
// probability exactly 0.5 count as class 1.
double classification_accuracy(std::span<const double> weights, const std::vector<double>& X,
                               const std::vector<double>& y, int n, int d);

// (1/2) sum over bins |empirical mass - integral of density over the bin|,
// density integrated by Gauss-Legendre quadrature per bin. Sample mass
// outside [lo, hi] is ignored on both sides.
double tv_histogram(std::span<const double> sample, const std::function<double(double)>& density,
                    int bins, double lo, double hi);

// 1-D W2 between two equal-size empirical measures: sort both, RMS of
// pairwise differences (the sorted coupling is optimal in 1-D).
double brute_force_w2_discrete(std::span<const double> a, std::span<const double> b);

}  // namespace alang
