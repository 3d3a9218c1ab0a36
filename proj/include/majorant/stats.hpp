#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "majorant/errors.hpp"

namespace majorant {

/// Pairwise (cascade) summation: the rounding error is O(log n) in the
/// number of terms and the result does not depend on thread scheduling.
inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 32) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

inline double mean(std::span<const double> xs) {
    require(!xs.empty(), ErrorKind::degenerate_input, "mean of empty sample");
    return pairwise_sum(xs) / static_cast<double>(xs.size());
}

/// Unbiased sample variance (two-pass).
inline double sample_variance(std::span<const double> xs) {
    require(xs.size() >= 2, ErrorKind::degenerate_input, "variance needs >= 2 samples");
    const double m = mean(xs);
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - m;
        sq[i] = d * d;
    }
    return pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
}

inline double standard_error(std::span<const double> xs) {
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

/// Unbiased sample covariance of paired columns.
inline double sample_covariance(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size() && a.size() >= 2, ErrorKind::invalid_input,
            "covariance needs paired samples of equal length >= 2");
    const double ma = mean(a);
    const double mb = mean(b);
    std::vector<double> prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = (a[i] - ma) * (b[i] - mb);
    return pairwise_sum(prod) / static_cast<double>(a.size() - 1);
}

/// Delta-method standard error of the sample covariance.
inline double covariance_standard_error(std::span<const double> a, std::span<const double> b) {
    const double ma = mean(a);
    const double mb = mean(b);
    const double c = sample_covariance(a, b);
    std::vector<double> sq(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = (a[i] - ma) * (b[i] - mb) - c;
        sq[i] = d * d;
    }
    const double m22 = pairwise_sum(sq) / static_cast<double>(a.size());
    return std::sqrt(std::max(m22, 0.0) / static_cast<double>(a.size()));
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// One-sample Kolmogorov-Smirnov statistic against a CDF. Sorts a copy.
template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
    require(!sample.empty(), ErrorKind::degenerate_input, "KS of empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

/// Two-sample Kolmogorov-Smirnov statistic. Sorts copies.
inline double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
    require(!a.empty() && !b.empty(), ErrorKind::degenerate_input, "KS of empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

struct WilsonInterval {
    double estimate;
    double lo;
    double hi;
};

/// Wilson score interval for a binomial proportion.
inline WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96) {
    require(trials > 0, ErrorKind::degenerate_input, "Wilson interval needs trials > 0");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {phat, std::max(0.0, center - half), std::min(1.0, center + half)};
}

} // namespace majorant
