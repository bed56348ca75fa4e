#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "coverlab/bounds.hpp"
#include "coverlab/subset_cover.hpp"

using namespace coverlab;

TEST_CASE("singleton ground set covers in one draw") {
    SubsetSampler s(UniformSingleton{1});
    RngStream rng(41);
    const TerminalRecord rec = simulate_cover(s, rng);
    CHECK(rec.cover_count == 1);
    REQUIRE(rec.terminal_set.size() == 1);
    CHECK(rec.terminal_set[0] == 0);
}

TEST_CASE("full-arc sampler covers instantly") {
    SubsetSampler s(CyclicArc{12, 12});
    RngStream rng(42);
    for (int i = 0; i < 30; ++i) CHECK(simulate_cover(s, rng).cover_count == 1);
}

TEST_CASE("uniform singleton mean matches the coupon mean") {
    const std::size_t m = 30;
    SubsetSampler s(UniformSingleton{m});
    RngStream rng(43);
    double sum = 0.0;
    const int reps = 5000;
    for (int i = 0; i < reps; ++i)
        sum += static_cast<double>(simulate_cover(s, rng).cover_count);
    CHECK(std::abs(sum / reps - coupon_mean(m)) < 0.02 * coupon_mean(m));
}

TEST_CASE("terminal set is the last-covered batch") {
    SubsetSampler s(RandomKSubset{20, 3});
    RngStream rng(44);
    for (int i = 0; i < 200; ++i) {
        const TerminalRecord rec = simulate_cover(s, rng);
        CHECK(!rec.terminal_set.empty());
        CHECK(rec.terminal_set.size() <= 3);  // subset of the final draw
    }
}

TEST_CASE("metric-ball sampler validates positivity") {
    // Two clusters at distance 10, r0 = 1, atoms only on cluster 0: points in
    // cluster 1 are never covered.
    std::vector<double> mat{0, 1, 10, 10,  //
                            1, 0, 10, 10,  //
                            10, 10, 0, 1,  //
                            10, 10, 1, 0};
    // Fails the triangle (10 > 1 + 10 is false; check: d(0,2)=10 <= d(0,1)+d(1,2)=11 ok).
    auto space = std::make_shared<Space>(Space::finite_metric(4, mat));
    const SeedDistribution bad =
        SeedDistribution::atoms({FiniteIndex{0}}, {1.0});
    CHECK_THROWS_AS(SubsetSampler(MetricBall{space, 1.0, bad}), std::invalid_argument);
    const SeedDistribution good = SeedDistribution::uniform();
    SubsetSampler ok(MetricBall{space, 1.0, good});
    RngStream rng(45);
    const TerminalRecord rec = simulate_cover(ok, rng);
    CHECK(rec.cover_count >= 2);  // needs both clusters
}

TEST_CASE("estimate_c_of_B closed forms") {
    const std::size_t m = 10;
    SubsetSampler s(UniformSingleton{m});
    // Singleton: geometric with mean m.
    RngStream r1(46);
    const double c1 = estimate_c_of_B(s, {3}, 4000, r1);
    const double se1 = static_cast<double>(m) / std::sqrt(4000.0);
    CHECK(std::abs(c1 - 10.0) < 3.5 * se1);
    // Pair: two-coupon closed form m (1 + 1/2) = 15.
    RngStream r2(47);
    const double c2 = estimate_c_of_B(s, {3, 7}, 4000, r2);
    CHECK(std::abs(c2 - 15.0) < 3.5 * 11.0 / std::sqrt(4000.0) + 0.5);
    // Whole ground set reproduces E C_set.
    RngStream r3(48);
    std::vector<std::uint32_t> all;
    for (std::uint32_t i = 0; i < m; ++i) all.push_back(i);
    const double c3 = estimate_c_of_B(s, all, 4000, r3);
    CHECK(std::abs(c3 - coupon_mean(m)) < 0.05 * coupon_mean(m));
}

TEST_CASE("c(B) is nondecreasing under set inclusion, pathwise") {
    SubsetSampler s(RandomKSubset{15, 2});
    for (std::uint64_t rep = 0; rep < 40; ++rep) {
        RngStream r1 = RngStream(49).child(rep);
        RngStream r2 = RngStream(49).child(rep);  // same draw stream
        const double small = estimate_c_of_B(s, {1, 2}, 50, r1);
        const double large = estimate_c_of_B(s, {1, 2, 3, 4}, 50, r2);
        CHECK(small <= large + 1e-12);
    }
}

TEST_CASE("kappa ratio: finite, bounded, zero for deterministic cover") {
    SubsetSampler s(UniformSingleton{50});
    const KappaRatio kr = kappa_ratio(s, 400, 100, RngStream(50));
    CHECK(kr.ratio > 0.0);
    CHECK(kr.ratio < 10.0);
    CHECK(kr.ci_lo <= kr.ratio);
    CHECK(kr.ratio <= kr.ci_hi);

    SubsetSampler full(CyclicArc{8, 8});
    const KappaRatio kz = kappa_ratio(full, 200, 50, RngStream(51));
    CHECK(kz.ratio == doctest::Approx(0.0));
}

TEST_CASE("kappa ratio bounded across cyclic arc widths") {
    for (std::size_t k : {1, 2, 5, 10}) {
        SubsetSampler s(CyclicArc{60, k});
        const KappaRatio kr = kappa_ratio(s, 300, 80, RngStream(52).child(k));
        CHECK(kr.ratio >= 0.0);
        CHECK(kr.ratio < 10.0);
    }
}

TEST_CASE("coupon chain h-table closed forms") {
    MonotoneChain chain(CouponChain{50});
    // E T = n H_n; max drop = n (the last transition); var = n^2 sum 1/k^2.
    CHECK(chain.expected_hitting() == doctest::Approx(coupon_mean(50)).epsilon(1e-12));
    CHECK(chain.max_drop() == doctest::Approx(50.0));
    long double v = 0.0L;
    for (int k = 1; k <= 50; ++k) v += (50.0L / k) * (50.0L / k);
    CHECK(chain.exact_variance() == doctest::Approx(static_cast<double>(v)).epsilon(1e-12));
    // The bound value quoted for n = 50: var/E = 18.06 or so, under 50.
    const double ratio = chain.exact_variance() / chain.expected_hitting();
    CHECK(ratio == doctest::Approx(18.06).epsilon(0.01));
    CHECK(ratio <= chain.max_drop());
}

TEST_CASE("coupon chain n = 1 boundary: exponential, equality in the bound") {
    MonotoneChain chain(CouponChain{1});
    CHECK(chain.expected_hitting() == doctest::Approx(1.0));
    CHECK(chain.max_drop() == doctest::Approx(1.0));
    CHECK(chain.exact_variance() == doctest::Approx(1.0));
    const BoundReport r = monotone_chain_check(chain, 20000, RngStream(53));
    CHECK(r.verdict != Verdict::violated);
}

TEST_CASE("coupon chain simulated variance near the closed form") {
    MonotoneChain chain(CouponChain{50});
    const BoundReport r = monotone_chain_check(chain, 30000, RngStream(54));
    CHECK(r.verdict != Verdict::violated);
    CHECK(r.rhs == doctest::Approx(50.0));
    const double sim_var = r.params.at("simulated_var");
    CHECK(std::abs(sim_var - chain.exact_variance()) < 0.1 * chain.exact_variance());
    CHECK(r.params.at("simulated_mean") ==
          doctest::Approx(chain.expected_hitting()).epsilon(0.02));
}

TEST_CASE("two-rate coupon chain: monotone table, simulation matches E T") {
    MonotoneChain chain(TwoRateCoupon{6, 4, 0.3});
    CHECK(chain.expected_hitting() > 0.0);
    CHECK(chain.max_drop() > 0.0);
    RngStream rng(55);
    double sum = 0.0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i) sum += chain.simulate(rng);
    const double mean = sum / reps;
    CHECK(std::abs(mean - chain.expected_hitting()) < 0.03 * chain.expected_hitting());
    const BoundReport r = monotone_chain_check(chain, 20000, RngStream(56));
    CHECK(r.verdict != Verdict::violated);
    CHECK_THROWS_AS(chain.exact_variance(), std::invalid_argument);
}

TEST_CASE("sampler validation") {
    CHECK_THROWS_AS(SubsetSampler(UniformSingleton{0}), std::invalid_argument);
    CHECK_THROWS_AS(SubsetSampler(RandomKSubset{5, 0}), std::invalid_argument);
    CHECK_THROWS_AS(SubsetSampler(RandomKSubset{5, 6}), std::invalid_argument);
    CHECK_THROWS_AS(SubsetSampler(CyclicArc{5, 9}), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneChain(CouponChain{0}), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneChain(TwoRateCoupon{2, 2, 0.0}), std::invalid_argument);
}

TEST_CASE("random k-subset draws k distinct indices") {
    SubsetSampler s(RandomKSubset{12, 5});
    RngStream rng(57);
    std::vector<std::uint32_t> out;
    for (int i = 0; i < 500; ++i) {
        s.draw(rng, out);
        CHECK(out.size() == 5);
        std::vector<std::uint32_t> sorted = out;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        CHECK(sorted.back() < 12);
    }
}
