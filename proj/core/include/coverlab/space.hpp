#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coverlab/numerics.hpp"
#include "coverlab/rng.hpp"

namespace coverlab {

// ---- points ---------------------------------------------------------------

struct CirclePos {
    double s = 0.0;  // arc-length position in [0, L)
};
struct SegmentPos {
    double s = 0.0;  // position in [0, L]
};
struct TorusPos {
    double x = 0.0, y = 0.0;
};
struct FiniteIndex {
    std::size_t i = 0;
};
struct GraphPos {
    std::size_t edge = 0;
    double offset = 0.0;  // distance from edge.u along the edge
};

using Point = std::variant<CirclePos, SegmentPos, TorusPos, FiniteIndex, GraphPos>;

// ---- space kinds ------------------------------------------------------------

struct Circle {
    double length = 0.0;  // circumference
};
struct Segment {
    double length = 0.0;
};
struct FlatTorus {
    double l1 = 0.0, l2 = 0.0;  // geodesic (quotient L2) metric
};
struct FiniteMetricSpace {
    std::size_t m = 0;
    std::vector<double> d;  // row-major m*m, validated exact metric
    double at(std::size_t i, std::size_t j) const { return d[i * m + j]; }
};
struct GraphEdge {
    std::size_t u = 0, v = 0;
    double length = 0.0;
};
struct MetricGraphSpace {
    std::size_t n_vertices = 0;
    std::vector<GraphEdge> edges;
    std::vector<double> vertex_dist;  // n*n all-pairs shortest path
    std::vector<double> cum_length;   // prefix sums of edge lengths
    double total_length = 0.0;
    double vd(std::size_t a, std::size_t b) const { return vertex_dist[a * n_vertices + b]; }
};

class Space {
  public:
    using Kind = std::variant<Circle, Segment, FlatTorus, FiniteMetricSpace, MetricGraphSpace>;

    static Space circle(double circumference);
    static Space segment(double length);
    static Space flat_torus(double l1, double l2);
    // Matrix is validated at construction: symmetric, zero diagonal, positive
    // off-diagonal, triangle inequality (plain comparisons, no tolerance).
    static Space finite_metric(std::size_t m, std::vector<double> dist_row_major);
    static Space metric_graph(std::size_t n_vertices, std::vector<GraphEdge> edges);

    const Kind& kind() const { return kind_; }
    double diameter() const { return diameter_; }
    // False only for metric graphs, whose diameter is a certified upper bound.
    bool diameter_exact() const { return diameter_exact_; }

    template <typename T>
    const T* get_if() const {
        return std::get_if<T>(&kind_);
    }

  private:
    Space(Kind k, double diam, bool exact)
        : kind_(std::move(k)), diameter_(diam), diameter_exact_(exact) {}
    Kind kind_;
    double diameter_ = 0.0;
    bool diameter_exact_ = true;
};

// Plain-text loaders for the experiment config surface.
// Finite metric file: first line m, then m rows of m space-separated lengths.
Space load_finite_metric_matrix(const std::string& path);
// Graph file: first line "nv ne", then ne lines "u v length".
Space load_metric_graph(const std::string& path);

// ---- seed distributions -----------------------------------------------------

class SeedDistribution {
  public:
    enum class Kind { Uniform, Atoms, Mixture };

    static SeedDistribution uniform();
    static SeedDistribution atoms(std::vector<Point> points, std::vector<double> weights);
    // atom_weight is the probability of drawing from the atoms; the rest is
    // the space's canonical uniform measure.
    static SeedDistribution mixture(std::vector<Point> points, std::vector<double> weights,
                                    double atom_weight);

    Kind kind() const { return kind_; }
    double atom_weight() const { return atom_weight_; }
    const std::vector<Point>& atom_points() const { return points_; }
    const std::vector<double>& atom_weights() const { return weights_; }
    const std::vector<double>& atom_cumulative() const { return cum_; }

  private:
    Kind kind_ = Kind::Uniform;
    std::vector<Point> points_;
    std::vector<double> weights_;
    std::vector<double> cum_;
    double atom_weight_ = 0.0;
};

// ---- nets and certified quantities -----------------------------------------

struct Net {
    std::vector<Point> points;
    double mesh = 0.0;  // certified covering radius
};

struct CoveringNumber {
    std::size_t value = 0;
    bool exact = true;  // false: constructive upper bound (greedy)
};

struct DimensionBound {
    std::size_t value = 0;
    bool exact = true;  // false: certified upper bound
};

struct EtaResult {
    double value = 0.0;
    bool exact = true;
    double net_eps = 0.0;  // mesh of the certifying net when not exact
};

// ---- operations -------------------------------------------------------------

double distance(const Space& space, const Point& a, const Point& b);

Point sample(const Space& space, const SeedDistribution& mu, RngStream& rng);

// mu-mass of the closed ball around s. Exact for every kind this library
// ships (the metric-graph ball decomposes into per-edge intervals).
double ball_measure(const Space& space, const SeedDistribution& mu, const Point& s,
                    double r);

// inf over centers of ball mass at radius r. Exact for uniform
// circle/segment/torus and for finite spaces; otherwise a certified lower
// bound from a mesh-eps net evaluated at radius r - eps.
EtaResult eta(const Space& space, const SeedDistribution& mu, double r);

CoveringNumber covering_number(const Space& space, double r);

// Smallest d such that every radius-r ball is covered by d balls of radius
// r/2 (exact on 1-D and small finite spaces, certified upper bound elsewhere).
DimensionBound dimension_d(const Space& space, double r);

Net epsilon_net(const Space& space, double eps);

// Ball mass around s as a function of the radius, when piecewise linear
// (uniform 1-D, atoms, finite, and their mixtures). nullopt means the caller
// should fall back to quadrature over ball_measure.
std::optional<PiecewiseLinear> radial_ball_measure(const Space& space,
                                                   const SeedDistribution& mu,
                                                   const Point& s);

// Uniform rescaling of every length by `factor` (standardization support).
Space scaled_space(const Space& space, double factor);
Point scaled_point(const Point& p, double factor);
SeedDistribution scaled_distribution(const SeedDistribution& mu, double factor);

}  // namespace coverlab
