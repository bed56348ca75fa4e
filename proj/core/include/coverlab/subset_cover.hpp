#pragma once

#include <cstddef>
#include <memory>
#include <variant>
#include <vector>

#include "coverlab/bounds.hpp"
#include "coverlab/rng.hpp"
#include "coverlab/space.hpp"
#include "coverlab/stats.hpp"

namespace coverlab {

// Finite-ground-set harness: i.i.d. random subsets Y_1, Y_2, ... of
// {0, ..., m-1} drawn until their union covers the ground set.

struct UniformSingleton {
    std::size_t m = 0;
};
struct RandomKSubset {
    std::size_t m = 0, k = 0;
};
struct CyclicArc {  // k consecutive points of the m-cycle, uniform start
    std::size_t m = 0, k = 0;
};
struct MetricBall {  // ball(center ~ mu, r0) on a finite metric space
    std::shared_ptr<const Space> space;  // must hold a FiniteMetricSpace
    double r0 = 0.0;
    SeedDistribution mu;
};

class SubsetSampler {
  public:
    using Kind = std::variant<UniformSingleton, RandomKSubset, CyclicArc, MetricBall>;

    // Validates Pr(s in Y) > 0 for every ground point.
    explicit SubsetSampler(Kind kind);

    std::size_t ground_size() const { return m_; }
    // Appends the drawn subset's indices to `out` (cleared first).
    void draw(RngStream& rng, std::vector<std::uint32_t>& out) const;

  private:
    Kind kind_;
    std::size_t m_ = 0;
    std::vector<std::vector<std::uint32_t>> ball_cache_;  // MetricBall only
};

struct TerminalRecord {
    std::size_t cover_count = 0;                // C_set
    std::vector<std::uint32_t> terminal_set;    // ground \ R_{C_set - 1}
};

TerminalRecord simulate_cover(const SubsetSampler& sampler, RngStream& rng);

// Monte Carlo estimate of c(B) = E min{n : R_n contains B}.
double estimate_c_of_B(const SubsetSampler& sampler,
                       const std::vector<std::uint32_t>& B, std::size_t reps,
                       RngStream& rng);

struct KappaRatio {
    double ratio = 0.0;  // var(C/EC-hat) * EC-hat / mean(c-hat(T))
    double ci_lo = 0.0, ci_hi = 0.0;
    double ec_hat = 0.0;
    double var_ratio = 0.0;
    double mean_c_terminal = 0.0;
    std::vector<double> cover_counts;    // per outer replicate
    std::vector<double> terminal_sizes;  // |T| per outer replicate
    std::vector<double> c_terminal;      // c-hat(T) per outer replicate
};

// Nested Monte Carlo: the outer loop collects (C_set, T); the inner loop
// estimates c(T) for each outer draw. Bootstrap CI over outer replicates.
KappaRatio kappa_ratio(const SubsetSampler& sampler, std::size_t outer_reps,
                       std::size_t inner_reps, const RngStream& rng,
                       unsigned threads = 1);

// ---- monotone-chain harness ---------------------------------------------------

struct CouponChain {  // n coupon types, each arriving at rate 1/n
    std::size_t n = 0;
};
struct TwoRateCoupon {  // two classes: prob p -> uniform over n1, else over n2
    std::size_t n1 = 0, n2 = 0;
    double p = 0.5;
};

class MonotoneChain {
  public:
    using Kind = std::variant<CouponChain, TwoRateCoupon>;

    // Builds the exact expected-hitting-time table and validates that it is
    // nonincreasing along every possible transition.
    explicit MonotoneChain(Kind kind);

    double expected_hitting() const { return expected_; }
    double max_drop() const { return max_drop_; }
    double simulate(RngStream& rng) const;  // one hitting time from the start state
    // Exact hitting-time variance (CouponChain only).
    double exact_variance() const;

  private:
    Kind kind_;
    double expected_ = 0.0;
    double max_drop_ = 0.0;
    std::vector<double> h_;  // CouponChain: by missing count; TwoRate: j1*(n2+1)+j2
};

// Exact E T and max h-drop from the table, simulated var T, verdict per the
// slack protocol (var T / E T <= max drop).
BoundReport monotone_chain_check(const MonotoneChain& chain, std::size_t reps,
                                 const RngStream& rng, unsigned threads = 1);

}  // namespace coverlab
