#pragma once

#include <cstddef>

#include "coverlab/rng.hpp"
#include "coverlab/space.hpp"
#include "coverlab/stats.hpp"

namespace coverlab {

// Fixed-radius model: i.i.d. centers from mu, each contributing a closed ball
// of radius r0; the cover count is the first n at which the union covers the
// whole space.
struct FixedRadiusConfig {
    double r0 = 0.0;
    SeedDistribution mu;
    Space space;
};

struct CoverCountBracket {
    std::size_t lower = 0;
    std::size_t upper = 0;
    double eps = 0.0;  // certified net mesh used for the bracket
};

// Exact cover count; requires Circle, Segment, or FiniteMetric.
std::size_t simulate_cover_count(const FixedRadiusConfig& cfg, RngStream& rng);

// General-space fallback. lower = cover count of an eps-net at radius r0
// (necessary), upper = cover count of the same net at radius r0 - mesh
// (sufficient); both from one center stream, so lower <= upper pathwise.
CoverCountBracket cover_count_bracket(const FixedRadiusConfig& cfg, double eps,
                                      RngStream& rng);

// Replicated cover counts with summary statistics. Replicate i uses the
// substream rng.child(1 + i); rng.child(0) drives the bootstrap.
CoverStats estimate_cover_stats(const FixedRadiusConfig& cfg, std::size_t reps,
                                const RngStream& rng, unsigned threads = 1);

}  // namespace coverlab
