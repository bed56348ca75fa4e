#pragma once

#include <cstddef>
#include <vector>

#include "coverlab/rng.hpp"
#include "coverlab/stats.hpp"

namespace coverlab {

// Poisson-clumping prediction for the cover time of the standardized growth
// model on the circle of circumference L: CDF t -> exp(-t * e^{-t^2/L}),
// centering t0(L) and scale sigma(L) from the inverse of y = x exp(-x^2).

// Inverse of y = x exp(-x^2) on its decreasing (large-x) branch, Newton
// guarded by bisection, |x e^{-x^2} - y| <= 1e-12.
double g_inverse(double y);

double t0_of_L(double L);     // sqrt(L) * G(1/sqrt(L)); pch_cdf(L, t0) = 1/e
double sigma_of_L(double L);  // sqrt(L) / (2 G(1/sqrt(L)))

double pch_cdf(double L, double t);

double gumbel_cdf(double x);

// Closed-form maximum expected single-point cover time: sqrt(pi * L) / 2.
double c_star_circle(double L);

struct PchPrediction {
    double L = 0.0;
    double t0 = 0.0;
    double sigma = 0.0;
};

PchPrediction pch_prediction(double L);

struct PchComparison {
    double ks_pch = 0.0;     // KS against pch_cdf on the central band
    double ks_gumbel = 0.0;  // KS of (C - t0)/sigma against the Gumbel CDF
    PchPrediction prediction;
    std::vector<double> sorted_cover_times;
};

// Simulates `reps` standardized-circle cover times and compares both ways.
// The band [band_lo, band_hi] restricts the PCH comparison to predicted CDF
// values away from the tails, where the approximation is meant to apply.
PchComparison empirical_vs_pch(double L, std::size_t reps, const RngStream& rng,
                               unsigned threads = 1, double band_lo = 0.01,
                               double band_hi = 0.99);

struct UncoveredPointResult {
    double empirical = 0.0;
    double predicted = 0.0;  // exp(-t^2/L)
    double se = 0.0;
    std::size_t reps = 0;
};

// Frequency that a fixed point is uncovered at time t.
UncoveredPointResult uncovered_point_prob(double L, double t, std::size_t reps,
                                          const RngStream& rng, unsigned threads = 1);

// Frequency that a fixed arc of length a is untouched at time t; predicted
// exp(-(a t + t^2)/L).
UncoveredPointResult uncovered_arc_prob(double L, double a, double t, std::size_t reps,
                                        const RngStream& rng, unsigned threads = 1);

struct GapStats {
    std::size_t conditioned = 0;  // paths with the reference point uncovered
    std::size_t reps = 0;
    double mean_a1 = 0.0, mean_a2 = 0.0;
    double predicted_mean = 0.0;  // L / t
    double ks_a1 = 0.0;           // vs Exponential(mean L/t)
    double ks_a2 = 0.0;
    double correlation = 0.0;     // sample corr(A1, A2)
    double mean_sd_ratio_a1 = 0.0;
    std::vector<double> a1, a2;   // conditioned samples, replicate order
};

// Conditional on the reference point being uncovered at t, the uncovered
// interval around it is [s - A2, s + A1]; both extents are measured exactly
// from the arc endpoints of the arrived balls. Throws when fewer than 100
// paths condition.
GapStats uncovered_gap_stats(double L, double t, std::size_t reps, const RngStream& rng,
                             unsigned threads = 1);

}  // namespace coverlab
