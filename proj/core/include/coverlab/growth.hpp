#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "coverlab/rng.hpp"
#include "coverlab/space.hpp"
#include "coverlab/stats.hpp"

namespace coverlab {

// Fixed numerical budgets, echoed into experiment outputs.
inline constexpr double kQuadRelTol = 1e-9;    // adaptive Simpson relative tolerance
inline constexpr double kTailCutoff = 1e-12;   // tail truncation level for E C(s)

// Growth model: seeds arrive at Poisson(lambda) times at i.i.d. mu-positions
// and grow closed balls at speed v; the cover time is the first t at which
// the union of balls is the whole space.
struct GrowthParams {
    double lambda = 1.0;
    double v = 1.0;
    SeedDistribution mu;
    Space space;
};

struct Arrival {
    double tau = 0.0;
    Point pos;
};

// One sampled path up to horizon = tau_1 + diameter/v, which pathwise
// determines the cover time (no ball arriving later can cover anything
// before the horizon bound).
struct GrowthRealization {
    std::vector<Arrival> arrivals;
    double horizon = 0.0;
};

struct StandardizedUnits {
    double time_scale = 1.0;    // 1/lambda: standardized time = time / time_scale
    double length_scale = 1.0;  // v/lambda: standardized length = length / length_scale
};

GrowthRealization simulate_realization(const GrowthParams& params, RngStream& rng);

// Arrivals on [0, t_end] only (for fixed-time snapshot statistics).
std::vector<Arrival> simulate_arrivals_until(const GrowthParams& params, double t_end,
                                             RngStream& rng);

// min_i (tau_i + distance(s, sigma_i)/v).
double point_cover_time(const Space& space, const GrowthRealization& real,
                        const Point& s, double v);

// Exact cover time on Circle, Segment, or FiniteMetric. On the 1-D spaces the
// per-point coverage function is a lower envelope of tent functions with
// slopes +-1/v; its maximum sits at a crossing between adjacent fronts or a
// domain endpoint, which an O(m log m) sweep enumerates exactly.
double cover_time_exact(const Space& space, const GrowthRealization& real, double v);

struct CoverWitness {
    double time = 0.0;
    Point location;  // a point achieving the maximum coverage time
};

CoverWitness cover_time_exact_witness(const Space& space, const GrowthRealization& real,
                                      double v);

// Net evaluation: max over net points of point_cover_time. Since s -> C(s) is
// (1/v)-Lipschitz, C_net <= C <= C_net + mesh/v.
double cover_time_net(const Space& space, const GrowthRealization& real, const Net& net,
                      double v);

// Pr(C(s) > t) = exp(-lambda * int_0^t mu(ball(s, v u)) du). Exact inner
// integral when the radial ball-mass profile is piecewise linear; adaptive
// Simpson (rel tol 1e-9) otherwise. Throws QuadratureError on non-convergence.
double point_tail_analytic(const GrowthParams& params, const Point& s, double t);

struct CStarResult {
    double value = 0.0;             // max over net points of E C(s)
    double truncation_bound = 0.0;  // tail mass beyond the integration horizon
    double lipschitz_slack = 0.0;   // net mesh / v; true sup <= value + slack
};

// Max over net points of the quadrature E C(s); integration truncated where
// the tail drops below 1e-12, truncation error reported.
CStarResult c_star(const GrowthParams& params, const Net& net);

struct GrowthCoverStats {
    CoverStats stats;
    std::vector<double> tau1;        // per-replicate first arrival time
    std::size_t upper_violations = 0;  // C > tau1 + diameter/v (pathwise audit)
    std::size_t lower_violations = 0;  // C < tau1
};

// Replicated exact cover times (Circle/Segment/FiniteMetric).
GrowthCoverStats estimate_cover_stats(const GrowthParams& params, std::size_t reps,
                                      const RngStream& rng, unsigned threads = 1);

// Replicated net cover times for spaces without an exact solver.
GrowthCoverStats estimate_cover_stats_net(const GrowthParams& params, const Net& net,
                                          std::size_t reps, const RngStream& rng,
                                          unsigned threads = 1);

// Units making lambda = v = 1; cover-time laws transform by the pure time
// scale: C_standardized = lambda * C_original.
std::pair<GrowthParams, StandardizedUnits> standardize(const GrowthParams& params);

}  // namespace coverlab
