#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "coverlab/rng.hpp"

namespace coverlab {

// Replicated cover-time sample with the summaries downstream bound checks
// consume. All confidence intervals are percentile bootstrap (1000 resamples)
// driven by a dedicated substream, so the whole object is deterministic in
// (samples, stream key).
struct CoverStats {
    std::size_t reps = 0;
    double mean = 0.0;
    double variance = 0.0;   // unbiased sample variance
    double var_ratio = 0.0;  // variance / mean^2, i.e. var(C / mean-hat)
    double se_mean = 0.0;
    double mean_ci_lo = 0.0, mean_ci_hi = 0.0;
    double var_ci_lo = 0.0, var_ci_hi = 0.0;
    double var_se = 0.0;
    double var_ratio_se = 0.0;
    std::vector<double> samples;  // per-replicate values, replicate order
};

inline constexpr std::size_t kBootstrapResamples = 1000;

CoverStats summarize_samples(std::vector<double> samples, RngStream boot_stream);

double sample_mean(std::span<const double> v);
double sample_variance(std::span<const double> v, double mean);

// Kolmogorov-Smirnov distance of a sample against a reference CDF, the direct
// sup over sample points (both one-sided parts). `sorted` must be ascending.
double ks_distance(std::span<const double> sorted,
                   const std::function<double(double)>& cdf);

// Same, restricted to sample points whose reference CDF value lies in
// [band_lo, band_hi].
double ks_distance_banded(std::span<const double> sorted,
                          const std::function<double(double)>& cdf,
                          double band_lo, double band_hi);

// Empirical survival fraction P(X >= t).
double empirical_survival(std::span<const double> sorted, double t);

double pearson_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace coverlab
