#include "coverlab/circle_pch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "coverlab/growth.hpp"
#include "coverlab/numerics.hpp"
#include "coverlab/parallel.hpp"
#include "coverlab/space.hpp"

namespace coverlab {

namespace {

double g_forward(double x) { return x * std::exp(-x * x); }

GrowthParams standard_circle(double L) {
    return GrowthParams{1.0, 1.0, SeedDistribution::uniform(), Space::circle(L)};
}

}  // namespace

double g_inverse(double y) {
    // The map x e^{-x^2} peaks at x = 1/sqrt(2); the decreasing branch starts
    // there. Reject y outside (0, peak].
    const double x_peak = 1.0 / std::sqrt(2.0);
    const double y_peak = g_forward(x_peak);
    if (!(y > 0.0) || y > y_peak)
        throw std::domain_error("g_inverse: y outside the decreasing-branch range");
    double hi = std::max(x_peak, std::sqrt(std::log(1.0 / y))) + 1.0;
    while (g_forward(hi) > y) hi *= 2.0;
    const double x0 = std::sqrt(std::max(std::log(1.0 / y), 0.5));
    return newton_bisect([&](double x) { return g_forward(x) - y; },
                         [](double x) { return std::exp(-x * x) * (1.0 - 2.0 * x * x); },
                         x_peak, hi, x0, 1e-12);
}

double t0_of_L(double L) { return std::sqrt(L) * g_inverse(1.0 / std::sqrt(L)); }

double sigma_of_L(double L) { return std::sqrt(L) / (2.0 * g_inverse(1.0 / std::sqrt(L))); }

double pch_cdf(double L, double t) {
    if (t < 0) throw std::invalid_argument("pch_cdf: negative time");
    return std::exp(-t * std::exp(-t * t / L));
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double c_star_circle(double L) { return 0.5 * std::sqrt(M_PI * L); }

PchPrediction pch_prediction(double L) { return {L, t0_of_L(L), sigma_of_L(L)}; }

PchComparison empirical_vs_pch(double L, std::size_t reps, const RngStream& rng,
                               unsigned threads, double band_lo, double band_hi) {
    if (reps < 100) throw std::invalid_argument("empirical_vs_pch: reps must be >= 100");
    const GrowthParams params = standard_circle(L);
    auto samples = run_replicates<double>(
        reps, rng, threads, [&](std::size_t, RngStream& stream) {
            const GrowthRealization real = simulate_realization(params, stream);
            return cover_time_exact(params.space, real, 1.0);
        });
    std::sort(samples.begin(), samples.end());

    PchComparison out;
    out.prediction = pch_prediction(L);
    out.ks_pch = ks_distance_banded(
        samples, [&](double t) { return pch_cdf(L, t); }, band_lo, band_hi);
    const double t0 = out.prediction.t0, sigma = out.prediction.sigma;
    out.ks_gumbel =
        ks_distance(samples, [&](double t) { return gumbel_cdf((t - t0) / sigma); });
    out.sorted_cover_times = std::move(samples);
    return out;
}

namespace {

UncoveredPointResult untouched_prob(double L, double arc_len, double t, std::size_t reps,
                                    const RngStream& rng, unsigned threads) {
    if (reps == 0) throw std::invalid_argument("uncovered probability: reps must be > 0");
    const GrowthParams params = standard_circle(L);
    // Reference arc [0, arc_len]; a point is the arc_len = 0 case. A ball
    // b(sigma, rho) misses the arc iff the circular distance from sigma to the
    // arc exceeds rho.
    auto hits = run_replicates<double>(
        reps, rng, threads, [&](std::size_t, RngStream& stream) {
            const auto arrivals = simulate_arrivals_until(params, t, stream);
            for (const Arrival& a : arrivals) {
                const double rho = t - a.tau;
                const double pos = std::get<CirclePos>(a.pos).s;
                double d = 0.0;
                if (pos > arc_len) {
                    const double right = pos - arc_len;  // gap past the arc end
                    const double left = L - pos;         // gap around to the arc start
                    d = std::min(right, left);
                }
                if (d <= rho) return 0.0;  // arc touched
            }
            return 1.0;  // untouched
        });
    UncoveredPointResult out;
    out.reps = reps;
    out.empirical = sample_mean(hits);
    out.predicted = std::exp(-(arc_len * t + t * t) / L);
    out.se = std::sqrt(std::max(out.empirical * (1.0 - out.empirical), 1e-12) /
                       static_cast<double>(reps));
    return out;
}

}  // namespace

UncoveredPointResult uncovered_point_prob(double L, double t, std::size_t reps,
                                          const RngStream& rng, unsigned threads) {
    return untouched_prob(L, 0.0, t, reps, rng, threads);
}

UncoveredPointResult uncovered_arc_prob(double L, double a, double t, std::size_t reps,
                                        const RngStream& rng, unsigned threads) {
    if (!(a >= 0) || a >= L) throw std::invalid_argument("uncovered_arc_prob: bad arc length");
    return untouched_prob(L, a, t, reps, rng, threads);
}

GapStats uncovered_gap_stats(double L, double t, std::size_t reps, const RngStream& rng,
                             unsigned threads) {
    if (reps == 0) throw std::invalid_argument("uncovered_gap_stats: reps must be > 0");
    const GrowthParams params = standard_circle(L);
    struct Rep {
        bool conditioned;
        double a1, a2;
    };
    // Reference point s = 0. Conditional on s uncovered, walking in +position
    // direction the first covered point is the nearest lower arc endpoint
    // sigma - rho (mod L); the -direction twin uses sigma + rho.
    auto rows = run_replicates<Rep>(
        reps, rng, threads, [&](std::size_t, RngStream& stream) {
            const auto arrivals = simulate_arrivals_until(params, t, stream);
            double a1 = std::numeric_limits<double>::infinity();
            double a2 = std::numeric_limits<double>::infinity();
            bool any_ball = false;
            for (const Arrival& a : arrivals) {
                const double rho = t - a.tau;
                const double pos = std::get<CirclePos>(a.pos).s;
                const double d = std::min(pos, L - pos);
                if (d <= rho) return Rep{false, 0.0, 0.0};  // s covered
                any_ball = true;
                double lo = std::fmod(pos - rho, L);
                if (lo < 0) lo += L;
                double hi = std::fmod(pos + rho, L);
                if (hi < 0) hi += L;
                a1 = std::min(a1, lo);      // + direction distance from 0 to lo
                a2 = std::min(a2, L - hi);  // - direction distance from 0 to hi
            }
            if (!any_ball) return Rep{false, 0.0, 0.0};  // nothing covered yet
            return Rep{true, a1, a2};
        });
    GapStats out;
    out.reps = reps;
    out.predicted_mean = L / t;
    for (const Rep& r : rows) {
        if (!r.conditioned) continue;
        out.a1.push_back(r.a1);
        out.a2.push_back(r.a2);
    }
    out.conditioned = out.a1.size();
    if (out.conditioned < 100)
        throw std::runtime_error("uncovered_gap_stats: fewer than 100 conditioned paths");
    out.mean_a1 = sample_mean(out.a1);
    out.mean_a2 = sample_mean(out.a2);
    out.correlation = pearson_correlation(out.a1, out.a2);
    const double sd_a1 = std::sqrt(sample_variance(out.a1, out.mean_a1));
    out.mean_sd_ratio_a1 = out.mean_a1 / sd_a1;
    const double rate = t / L;
    auto exp_cdf = [rate](double x) { return 1.0 - std::exp(-rate * x); };
    std::vector<double> s1 = out.a1, s2 = out.a2;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    out.ks_a1 = ks_distance(s1, exp_cdf);
    out.ks_a2 = ks_distance(s2, exp_cdf);
    return out;
}

}  // namespace coverlab
