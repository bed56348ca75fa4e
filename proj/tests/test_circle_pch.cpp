#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "coverlab/circle_pch.hpp"
#include "coverlab/growth.hpp"
#include "coverlab/space.hpp"

using namespace coverlab;

TEST_CASE("g_inverse: forward evaluation inverted") {
    // 2 e^{-4} is on the decreasing branch with inverse exactly 2.
    CHECK(g_inverse(2.0 * std::exp(-4.0)) == doctest::Approx(2.0).epsilon(1e-10));
    for (double y : {0.1, 1e-3, 1e-6}) {
        const double x = g_inverse(y);
        CHECK(std::abs(x * std::exp(-x * x) - y) <= 1e-12);
        CHECK(x >= 1.0 / std::sqrt(2.0));
    }
    CHECK_THROWS_AS(g_inverse(0.0), std::domain_error);
    CHECK_THROWS_AS(g_inverse(0.6), std::domain_error);  // above the branch peak
}

TEST_CASE("g_inverse agrees with a plain bisection oracle") {
    for (double y : {0.2, 0.05, 1e-2, 1e-4}) {
        double lo = 1.0 / std::sqrt(2.0), hi = 40.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid * std::exp(-mid * mid) > y)
                lo = mid;
            else
                hi = mid;
        }
        CHECK(g_inverse(y) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
    }
}

TEST_CASE("t0: definitional identities") {
    for (double L : {1e2, 1e4, 1e6}) {
        const double t0 = t0_of_L(L);
        CHECK(t0 * std::exp(-t0 * t0 / L) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(pch_cdf(L, t0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    }
    // Slowly varying factor: t0 / sqrt(L log sqrt(L)) stays bounded.
    for (double L : {1e2, 1e3, 1e4, 1e5, 1e6}) {
        const double ratio = t0_of_L(L) / std::sqrt(L * std::log(std::sqrt(L)));
        CHECK(ratio > 0.5);
        CHECK(ratio < 3.0);
    }
}

TEST_CASE("sigma: algebra and trends") {
    for (double L : {1e2, 1e4, 1e6}) {
        CHECK(2.0 * t0_of_L(L) * sigma_of_L(L) == doctest::Approx(L).epsilon(1e-9));
        CHECK(sigma_of_L(L) > 0.0);
    }
    // G(L^{-1/2}) increases with L; sigma/t0 = 1/(2 G^2) decreases.
    double prev_g = 0.0, prev_ratio = 1e300;
    for (double L : {1e2, 1e3, 1e4, 1e5, 1e6}) {
        const double g = g_inverse(1.0 / std::sqrt(L));
        CHECK(g > prev_g);
        prev_g = g;
        const double ratio = sigma_of_L(L) / t0_of_L(L);
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
    }
}

TEST_CASE("pch cdf: endpoints, monotone range, Gumbel convergence") {
    CHECK(pch_cdf(100.0, 0.0) == doctest::Approx(1.0));  // known lower-tail failure
    // Nondecreasing above the stationary point sqrt(L/2).
    const double L = 400.0;
    double prev = -1.0;
    for (double t = std::sqrt(L / 2.0); t < 200.0; t += 0.5) {
        const double f = pch_cdf(L, t);
        CHECK(f >= prev - 1e-15);
        prev = f;
    }
    // sup over an x grid of |pch(t0 + x sigma) - Gumbel(x)| decreases in L.
    double prev_sup = 1e300;
    for (double Lg : {1e2, 1e4, 1e6}) {
        const double t0 = t0_of_L(Lg), sg = sigma_of_L(Lg);
        double sup = 0.0;
        for (double x = -3.0; x <= 6.0; x += 0.05) {
            const double t = t0 + x * sg;
            if (t < 0) continue;
            sup = std::max(sup, std::abs(pch_cdf(Lg, t) - gumbel_cdf(x)));
        }
        CHECK(sup < prev_sup);
        prev_sup = sup;
    }
    CHECK(prev_sup < 0.05);  // G grows slowly, so the residual shrinks slowly too
}

TEST_CASE("c_star_circle closed form and quadrature agreement") {
    CHECK(c_star_circle(100.0) == doctest::Approx(8.8622692545276).epsilon(1e-9));
    CHECK(c_star_circle(M_PI) == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    for (double L : {10.0, 100.0, 1000.0}) {
        GrowthParams p{1.0, 1.0, SeedDistribution::uniform(), Space::circle(L)};
        const Net net = epsilon_net(p.space, L / 8.0);
        // Exact value including the ball saturation at radius L/2:
        // int_0^{L/2} e^{-t^2/L} dt + int_{L/2}^inf e^{-(L/4 + t - L/2)} dt.
        const double exact = 0.5 * std::sqrt(M_PI * L) * std::erf(std::sqrt(L) / 2.0) +
                             std::exp(-L / 4.0);
        CHECK(c_star(p, net).value == doctest::Approx(exact).epsilon(1e-6));
        // The saturation correction is invisible at L >= 100.
        if (L >= 100.0)
            CHECK(c_star(p, net).value == doctest::Approx(c_star_circle(L)).epsilon(1e-6));
    }
}

TEST_CASE("empirical law vs prediction at moderate size") {
    const double L = 2000.0;
    const PchComparison cmp = empirical_vs_pch(L, 600, RngStream(61));
    CHECK(cmp.ks_pch < 0.15);
    CHECK(cmp.ks_gumbel < 0.2);
    // Median sits inside the Gumbel-quantile window.
    const double median = cmp.sorted_cover_times[cmp.sorted_cover_times.size() / 2];
    CHECK(median > cmp.prediction.t0 - cmp.prediction.sigma);
    CHECK(median < cmp.prediction.t0 + 2.0 * cmp.prediction.sigma);
}

TEST_CASE("uncovered point probability: exact Poisson law") {
    const double L = 2500.0;
    const double t = std::sqrt(L * std::log(2.0));
    const UncoveredPointResult r = uncovered_point_prob(L, t, 5000, RngStream(62));
    CHECK(r.predicted == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(r.empirical - r.predicted) < 3.0 * r.se);
    // t = 0: nothing has arrived, the point is uncovered with certainty.
    const UncoveredPointResult r0 = uncovered_point_prob(L, 0.0, 200, RngStream(63));
    CHECK(r0.empirical == doctest::Approx(1.0));
}

TEST_CASE("uncovered arc probability matches the area formula") {
    const double L = 2500.0;
    const double t = std::sqrt(L * std::log(2.0));
    const double a = std::sqrt(L);
    const UncoveredPointResult r = uncovered_arc_prob(L, a, t, 5000, RngStream(64));
    CHECK(r.predicted == doctest::Approx(std::exp(-(a * t + t * t) / L)).epsilon(1e-12));
    CHECK(std::abs(r.empirical - r.predicted) < 3.0 * r.se);
}

TEST_CASE("gap law: exponential extents, independence") {
    const double L = 2500.0;
    const double t = std::sqrt(L * std::log(2.0));
    const GapStats g = uncovered_gap_stats(L, t, 6000, RngStream(61));
    CHECK(g.conditioned > 2000);
    const double target = L / t;
    CHECK(std::abs(g.mean_a1 - target) < 0.05 * target);
    CHECK(std::abs(g.mean_a2 - target) < 0.05 * target);
    CHECK(g.ks_a1 < 0.05);
    CHECK(g.ks_a2 < 0.05);
    CHECK(std::abs(g.correlation) < 0.05);
    // Exponential shape diagnostic: mean/sd near 1.
    CHECK(g.mean_sd_ratio_a1 == doctest::Approx(1.0).epsilon(0.1));
    // Too few conditioned paths is an error, not a silent pass.
    const double t_big = std::sqrt(L * std::log(50.0));
    CHECK_THROWS(uncovered_gap_stats(L, t_big, 200, RngStream(66)));
}

TEST_CASE("variance-ratio orders stay within a fixed factor across L") {
    // var(C/EC) * G^4 and (c*/EC) * G should be flat in L.
    std::vector<double> first, second;
    std::size_t idx = 0;
    for (double L : {100.0, 1000.0, 10000.0}) {
        GrowthParams p{1.0, 1.0, SeedDistribution::uniform(), Space::circle(L)};
        const GrowthCoverStats g =
            estimate_cover_stats(p, 800, RngStream(67).child(idx++));
        const double G = g_inverse(1.0 / std::sqrt(L));
        first.push_back(g.stats.var_ratio * G * G * G * G);
        second.push_back(c_star_circle(L) / g.stats.mean * G);
    }
    auto spread = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi / *lo;
    };
    CHECK(spread(first) < 3.0);
    CHECK(spread(second) < 3.0);
}
