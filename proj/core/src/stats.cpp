#include "coverlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coverlab/numerics.hpp"

namespace coverlab {

double sample_mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("sample_mean: empty sample");
    return pairwise_sum(v) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
    if (v.size() < 2) throw std::invalid_argument("sample_variance: need >= 2 values");
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = v[i] - mean;
        sq[i] = d * d;
    }
    return pairwise_sum(sq) / static_cast<double>(v.size() - 1);
}

namespace {

struct MeanVar {
    double mean, var;
};

MeanVar resample_moments(std::span<const double> v, RngStream& rng) {
    const std::size_t n = v.size();
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = v[rng.uniform_index(n)];
        sum += x;
        sumsq += x * x;
    }
    const double m = sum / static_cast<double>(n);
    const double var = (sumsq - static_cast<double>(n) * m * m) /
                       static_cast<double>(n - 1);
    return {m, std::max(var, 0.0)};
}

double percentile(std::vector<double>& v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= v.size()) return v.back();
    return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

double stddev_of(std::span<const double> v) {
    const double m = sample_mean(v);
    return std::sqrt(sample_variance(v, m));
}

}  // namespace

CoverStats summarize_samples(std::vector<double> samples, RngStream boot_stream) {
    if (samples.size() < 2)
        throw std::invalid_argument("summarize_samples: need >= 2 replicates");
    CoverStats s;
    s.reps = samples.size();
    s.mean = sample_mean(samples);
    s.variance = sample_variance(samples, s.mean);
    s.var_ratio = s.variance / (s.mean * s.mean);
    s.se_mean = std::sqrt(s.variance / static_cast<double>(s.reps));

    std::vector<double> boot_means, boot_vars, boot_ratios;
    boot_means.reserve(kBootstrapResamples);
    boot_vars.reserve(kBootstrapResamples);
    boot_ratios.reserve(kBootstrapResamples);
    for (std::size_t b = 0; b < kBootstrapResamples; ++b) {
        const MeanVar mv = resample_moments(samples, boot_stream);
        boot_means.push_back(mv.mean);
        boot_vars.push_back(mv.var);
        boot_ratios.push_back(mv.mean != 0.0 ? mv.var / (mv.mean * mv.mean) : 0.0);
    }
    s.var_se = stddev_of(boot_vars);
    s.var_ratio_se = stddev_of(boot_ratios);
    s.mean_ci_lo = percentile(boot_means, 0.025);
    s.mean_ci_hi = percentile(boot_means, 0.975);
    s.var_ci_lo = percentile(boot_vars, 0.025);
    s.var_ci_hi = percentile(boot_vars, 0.975);

    s.samples = std::move(samples);
    return s;
}

double ks_distance(std::span<const double> sorted,
                   const std::function<double(double)>& cdf) {
    return ks_distance_banded(sorted, cdf, 0.0, 1.0);
}

double ks_distance_banded(std::span<const double> sorted,
                          const std::function<double(double)>& cdf,
                          double band_lo, double band_hi) {
    const std::size_t n = sorted.size();
    if (n == 0) throw std::invalid_argument("ks_distance: empty sample");
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(sorted[i]);
        if (f < band_lo || f > band_hi) continue;
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        d = std::max(d, std::max(std::abs(hi - f), std::abs(f - lo)));
    }
    return d;
}

double empirical_survival(std::span<const double> sorted, double t) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("pearson_correlation: bad inputs");
    const double ma = sample_mean(a), mb = sample_mean(b);
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double xa = a[i] - ma, xb = b[i] - mb;
        num += xa * xb;
        da += xa * xa;
        db += xb * xb;
    }
    if (da == 0.0 || db == 0.0) return 0.0;
    return num / std::sqrt(da * db);
}

}  // namespace coverlab
