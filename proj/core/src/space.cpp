#include "coverlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace coverlab {

namespace {

constexpr double kWeightTol = 1e-12;

[[noreturn]] void kind_mismatch(const char* what) {
    throw std::invalid_argument(std::string("space/point kind mismatch in ") + what);
}

double wrap_circle(double s, double L) {
    double r = std::fmod(s, L);
    if (r < 0) r += L;
    return r;
}

double circle_dist(double a, double b, double L) {
    double d = std::abs(a - b);
    d = std::fmod(d, L);
    return std::min(d, L - d);
}

double torus_axis_dist(double a, double b, double L) {
    double d = std::abs(a - b);
    d = std::fmod(d, L);
    return std::min(d, L - d);
}

// Distance from a point on an edge to a graph vertex.
double graph_point_vertex(const MetricGraphSpace& g, const GraphPos& p, std::size_t w) {
    const GraphEdge& e = g.edges[p.edge];
    return std::min(p.offset + g.vd(e.u, w), (e.length - p.offset) + g.vd(e.v, w));
}

double graph_dist(const MetricGraphSpace& g, const GraphPos& a, const GraphPos& b) {
    const GraphEdge& ea = g.edges[a.edge];
    const GraphEdge& eb = g.edges[b.edge];
    double best = std::numeric_limits<double>::infinity();
    if (a.edge == b.edge) best = std::abs(a.offset - b.offset);
    const double au = a.offset, av = ea.length - a.offset;
    const double bu = b.offset, bv = eb.length - b.offset;
    best = std::min(best, au + g.vd(ea.u, eb.u) + bu);
    best = std::min(best, au + g.vd(ea.u, eb.v) + bv);
    best = std::min(best, av + g.vd(ea.v, eb.u) + bu);
    best = std::min(best, av + g.vd(ea.v, eb.v) + bv);
    return best;
}

// Area of {x^2 + y^2 <= r^2} intersected with the first-quadrant box
// [0,a] x [0,b]; exact circular-segment formula.
double disc_box_quadrant_area(double r, double a, double b) {
    if (r <= 0.0 || a <= 0.0 || b <= 0.0) return 0.0;
    auto anti = [&](double x) {  // integral of sqrt(r^2 - u^2)
        x = std::min(x, r);
        return 0.5 * (x * std::sqrt(std::max(r * r - x * x, 0.0)) +
                      r * r * std::asin(std::min(x / r, 1.0)));
    };
    // For x < xb the circle sits above the box top (height b); past xb the
    // circular arc caps the height. No flat section at all when r <= b.
    const double xb = (r > b) ? std::sqrt(r * r - b * b) : 0.0;
    const double u = std::min(a, xb);
    const double w = std::min(a, r);
    double area = b * u;
    if (w > u) area += anti(w) - anti(u);
    return area;
}

double torus_ball_fraction(const FlatTorus& t, double r) {
    const double area = 4.0 * disc_box_quadrant_area(r, t.l1 / 2.0, t.l2 / 2.0);
    return std::min(area / (t.l1 * t.l2), 1.0);
}

// Union length of intervals clipped to [0, len].
double union_length(std::vector<std::pair<double, double>>& iv, double len) {
    for (auto& [lo, hi] : iv) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, len);
    }
    std::erase_if(iv, [](const auto& p) { return p.second <= p.first; });
    std::sort(iv.begin(), iv.end());
    double total = 0.0, cur_lo = 0.0, cur_hi = -1.0;
    for (const auto& [lo, hi] : iv) {
        if (cur_hi < lo) {
            if (cur_hi > cur_lo) total += cur_hi - cur_lo;
            cur_lo = lo;
            cur_hi = hi;
        } else {
            cur_hi = std::max(cur_hi, hi);
        }
    }
    if (cur_hi > cur_lo) total += cur_hi - cur_lo;
    return total;
}

// Length of ball(s, r) on a metric graph, assembled edge by edge.
double graph_ball_length(const MetricGraphSpace& g, const GraphPos& s, double r) {
    double covered = 0.0;
    for (std::size_t f = 0; f < g.edges.size(); ++f) {
        const GraphEdge& e = g.edges[f];
        const double du = graph_point_vertex(g, s, e.u);
        const double dv = graph_point_vertex(g, s, e.v);
        std::vector<std::pair<double, double>> iv;
        if (r >= du) iv.emplace_back(0.0, r - du);
        if (r >= dv) iv.emplace_back(e.length - (r - dv), e.length);
        if (f == s.edge) iv.emplace_back(s.offset - r, s.offset + r);
        covered += union_length(iv, e.length);
    }
    return covered;
}

void validate_weights(const std::vector<double>& w) {
    if (w.empty()) throw std::invalid_argument("SeedDistribution: no atoms");
    double sum = 0.0;
    for (double x : w) {
        if (x < 0.0) throw std::invalid_argument("SeedDistribution: negative weight");
        sum += x;
    }
    if (std::abs(sum - 1.0) > kWeightTol)
        throw std::invalid_argument("SeedDistribution: weights must sum to 1");
}

// Exact minimum set cover over a universe of <= 20 elements.
// sets[i] is the bitmask each candidate covers.
std::size_t exact_set_cover(const std::vector<std::uint32_t>& sets, std::uint32_t full) {
    if (full == 0) return 0;
    std::vector<std::uint8_t> dp(static_cast<std::size_t>(full) + 1, 255);
    dp[0] = 0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const int low = std::countr_zero(mask);
        std::uint8_t best = 255;
        for (const std::uint32_t s : sets) {
            if (!(s >> low & 1u)) continue;
            const std::uint8_t sub = dp[mask & ~s];
            if (sub != 255 && sub + 1 < best) best = static_cast<std::uint8_t>(sub + 1);
        }
        dp[mask] = best;
    }
    if (dp[full] == 255) throw std::runtime_error("set cover: universe not coverable");
    return dp[full];
}

// Greedy max-coverage set cover (upper bound).
std::size_t greedy_set_cover(const std::vector<std::vector<std::size_t>>& sets,
                             std::size_t universe) {
    std::vector<char> covered(universe, 0);
    std::size_t remaining = universe, count = 0;
    while (remaining > 0) {
        std::size_t best = 0, best_gain = 0;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            std::size_t gain = 0;
            for (std::size_t j : sets[i])
                if (!covered[j]) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        if (best_gain == 0) throw std::runtime_error("set cover: universe not coverable");
        for (std::size_t j : sets[best]) covered[j] = 1;
        remaining -= best_gain;
        ++count;
    }
    return count;
}

// Smallest k with k * unit >= span under the same floating arithmetic the
// invariant checks use.
std::size_t min_count_covering(double span, double unit) {
    if (unit <= 0) throw std::invalid_argument("min_count_covering: unit <= 0");
    double q = span / unit;
    auto k = static_cast<std::size_t>(std::max(std::floor(q), 1.0));
    while (static_cast<double>(k) * unit < span) ++k;
    return k;
}

}  // namespace

// ---- Space construction -----------------------------------------------------

Space Space::circle(double circumference) {
    if (!(circumference > 0)) throw std::invalid_argument("Circle: circumference <= 0");
    return Space(Circle{circumference}, circumference / 2.0, true);
}

Space Space::segment(double length) {
    if (!(length > 0)) throw std::invalid_argument("Segment: length <= 0");
    return Space(Segment{length}, length, true);
}

Space Space::flat_torus(double l1, double l2) {
    if (!(l1 > 0) || !(l2 > 0)) throw std::invalid_argument("FlatTorus: side <= 0");
    return Space(FlatTorus{l1, l2}, std::hypot(l1 / 2.0, l2 / 2.0), true);
}

Space Space::finite_metric(std::size_t m, std::vector<double> d) {
    if (m == 0 || d.size() != m * m)
        throw std::invalid_argument("FiniteMetric: bad matrix size");
    for (std::size_t i = 0; i < m; ++i) {
        if (d[i * m + i] != 0.0)
            throw std::invalid_argument("FiniteMetric: nonzero diagonal");
        for (std::size_t j = 0; j < m; ++j) {
            if (d[i * m + j] != d[j * m + i])
                throw std::invalid_argument("FiniteMetric: asymmetric matrix");
            if (i != j && !(d[i * m + j] > 0.0))
                throw std::invalid_argument("FiniteMetric: nonpositive off-diagonal");
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k)
                if (d[i * m + j] > d[i * m + k] + d[k * m + j])
                    throw std::invalid_argument("FiniteMetric: triangle inequality fails");
    const double diam = *std::max_element(d.begin(), d.end());
    FiniteMetricSpace fm{m, std::move(d)};
    return Space(std::move(fm), diam, true);
}

Space Space::metric_graph(std::size_t n, std::vector<GraphEdge> edges) {
    if (n == 0 || edges.empty()) throw std::invalid_argument("MetricGraph: empty");
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n) throw std::invalid_argument("MetricGraph: bad vertex id");
        if (!(e.length > 0)) throw std::invalid_argument("MetricGraph: nonpositive edge length");
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n * n, inf);
    for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = 0.0;
    for (const auto& e : edges) {
        dist[e.u * n + e.v] = std::min(dist[e.u * n + e.v], e.length);
        dist[e.v * n + e.u] = std::min(dist[e.v * n + e.u], e.length);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                dist[i * n + j] = std::min(dist[i * n + j], dist[i * n + k] + dist[k * n + j]);
    double max_vd = 0.0, max_edge = 0.0, total = 0.0;
    for (double x : dist) {
        if (x == inf) throw std::invalid_argument("MetricGraph: not connected");
        max_vd = std::max(max_vd, x);
    }
    std::vector<double> cum;
    cum.reserve(edges.size());
    for (const auto& e : edges) {
        max_edge = std::max(max_edge, e.length);
        total += e.length;
        cum.push_back(total);
    }
    MetricGraphSpace g{n, std::move(edges), std::move(dist), std::move(cum), total};
    // Interior points sit at most half an edge from a vertex; this bound is
    // cheap and always valid, so the horizon logic downstream stays safe.
    return Space(std::move(g), max_vd + max_edge, false);
}

Space load_finite_metric_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open finite-metric matrix file: " + path);
    std::size_t m = 0;
    if (!(in >> m) || m == 0)
        throw std::runtime_error("finite-metric file: bad point count in " + path);
    std::vector<double> d(m * m);
    for (auto& x : d)
        if (!(in >> x)) throw std::runtime_error("finite-metric file: truncated matrix in " + path);
    return Space::finite_metric(m, std::move(d));
}

Space load_metric_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open metric-graph file: " + path);
    std::size_t nv = 0, ne = 0;
    if (!(in >> nv >> ne)) throw std::runtime_error("metric-graph file: bad header in " + path);
    std::vector<GraphEdge> edges(ne);
    for (auto& e : edges)
        if (!(in >> e.u >> e.v >> e.length))
            throw std::runtime_error("metric-graph file: truncated edge list in " + path);
    return Space::metric_graph(nv, std::move(edges));
}

// ---- SeedDistribution --------------------------------------------------------

SeedDistribution SeedDistribution::uniform() {
    SeedDistribution d;
    d.kind_ = Kind::Uniform;
    return d;
}

SeedDistribution SeedDistribution::atoms(std::vector<Point> points,
                                         std::vector<double> weights) {
    if (points.size() != weights.size())
        throw std::invalid_argument("SeedDistribution: points/weights size mismatch");
    validate_weights(weights);
    SeedDistribution d;
    d.kind_ = Kind::Atoms;
    d.points_ = std::move(points);
    d.weights_ = std::move(weights);
    d.cum_.resize(d.weights_.size());
    std::partial_sum(d.weights_.begin(), d.weights_.end(), d.cum_.begin());
    d.cum_.back() = 1.0;
    d.atom_weight_ = 1.0;
    return d;
}

SeedDistribution SeedDistribution::mixture(std::vector<Point> points,
                                           std::vector<double> weights,
                                           double atom_weight) {
    if (!(atom_weight >= 0.0 && atom_weight <= 1.0))
        throw std::invalid_argument("SeedDistribution: atom_weight outside [0,1]");
    SeedDistribution d = atoms(std::move(points), std::move(weights));
    d.kind_ = Kind::Mixture;
    d.atom_weight_ = atom_weight;
    return d;
}

// ---- distance -----------------------------------------------------------------

double distance(const Space& space, const Point& a, const Point& b) {
    if (const auto* c = space.get_if<Circle>()) {
        const auto* pa = std::get_if<CirclePos>(&a);
        const auto* pb = std::get_if<CirclePos>(&b);
        if (!pa || !pb) kind_mismatch("distance(circle)");
        return circle_dist(wrap_circle(pa->s, c->length), wrap_circle(pb->s, c->length),
                           c->length);
    }
    if (const auto* sg = space.get_if<Segment>()) {
        const auto* pa = std::get_if<SegmentPos>(&a);
        const auto* pb = std::get_if<SegmentPos>(&b);
        if (!pa || !pb) kind_mismatch("distance(segment)");
        (void)sg;
        return std::abs(pa->s - pb->s);
    }
    if (const auto* t = space.get_if<FlatTorus>()) {
        const auto* pa = std::get_if<TorusPos>(&a);
        const auto* pb = std::get_if<TorusPos>(&b);
        if (!pa || !pb) kind_mismatch("distance(torus)");
        return std::hypot(torus_axis_dist(pa->x, pb->x, t->l1),
                          torus_axis_dist(pa->y, pb->y, t->l2));
    }
    if (const auto* fm = space.get_if<FiniteMetricSpace>()) {
        const auto* pa = std::get_if<FiniteIndex>(&a);
        const auto* pb = std::get_if<FiniteIndex>(&b);
        if (!pa || !pb) kind_mismatch("distance(finite)");
        if (pa->i >= fm->m || pb->i >= fm->m)
            throw std::invalid_argument("distance: finite index out of range");
        return fm->at(pa->i, pb->i);
    }
    if (const auto* g = space.get_if<MetricGraphSpace>()) {
        const auto* pa = std::get_if<GraphPos>(&a);
        const auto* pb = std::get_if<GraphPos>(&b);
        if (!pa || !pb) kind_mismatch("distance(graph)");
        if (pa->edge >= g->edges.size() || pb->edge >= g->edges.size())
            throw std::invalid_argument("distance: edge index out of range");
        return graph_dist(*g, *pa, *pb);
    }
    throw std::logic_error("distance: unhandled space kind");
}

// ---- sampling ------------------------------------------------------------------

namespace {

Point sample_uniform(const Space& space, RngStream& rng) {
    if (const auto* c = space.get_if<Circle>())
        return CirclePos{rng.uniform01() * c->length};
    if (const auto* sg = space.get_if<Segment>())
        return SegmentPos{rng.uniform01() * sg->length};
    if (const auto* t = space.get_if<FlatTorus>()) {
        const double x = rng.uniform01() * t->l1;
        const double y = rng.uniform01() * t->l2;
        return TorusPos{x, y};
    }
    if (const auto* fm = space.get_if<FiniteMetricSpace>())
        return FiniteIndex{rng.uniform_index(fm->m)};
    if (const auto* g = space.get_if<MetricGraphSpace>()) {
        const double u = rng.uniform01() * g->total_length;
        const auto it = std::lower_bound(g->cum_length.begin(), g->cum_length.end(), u);
        std::size_t e = static_cast<std::size_t>(it - g->cum_length.begin());
        if (e >= g->edges.size()) e = g->edges.size() - 1;
        const double base = (e == 0) ? 0.0 : g->cum_length[e - 1];
        double off = u - base;
        off = std::clamp(off, 0.0, g->edges[e].length);
        return GraphPos{e, off};
    }
    throw std::logic_error("sample: unhandled space kind");
}

// Atom coordinates come from user input; pin them to the space's fundamental
// domain here so every downstream consumer can rely on it.
Point normalize_point(const Space& space, const Point& p) {
    if (const auto* c = space.get_if<Circle>()) {
        const auto* cp = std::get_if<CirclePos>(&p);
        if (!cp) kind_mismatch("sample(atoms)");
        return CirclePos{wrap_circle(cp->s, c->length)};
    }
    if (const auto* sg = space.get_if<Segment>()) {
        const auto* sp = std::get_if<SegmentPos>(&p);
        if (!sp || sp->s < 0.0 || sp->s > sg->length)
            throw std::invalid_argument("atom outside the segment");
        return p;
    }
    if (const auto* t = space.get_if<FlatTorus>()) {
        const auto* tp = std::get_if<TorusPos>(&p);
        if (!tp) kind_mismatch("sample(atoms)");
        double x = std::fmod(tp->x, t->l1);
        double y = std::fmod(tp->y, t->l2);
        if (x < 0) x += t->l1;
        if (y < 0) y += t->l2;
        return TorusPos{x, y};
    }
    if (const auto* fm = space.get_if<FiniteMetricSpace>()) {
        const auto* fp = std::get_if<FiniteIndex>(&p);
        if (!fp || fp->i >= fm->m)
            throw std::invalid_argument("atom index outside the finite space");
        return p;
    }
    if (const auto* g = space.get_if<MetricGraphSpace>()) {
        const auto* gp = std::get_if<GraphPos>(&p);
        if (!gp || gp->edge >= g->edges.size() || gp->offset < 0.0 ||
            gp->offset > g->edges[gp->edge].length)
            throw std::invalid_argument("atom outside the graph's edge set");
        return p;
    }
    throw std::logic_error("normalize_point: unhandled space kind");
}

Point sample_atom(const Space& space, const SeedDistribution& mu, RngStream& rng) {
    const double u = rng.uniform01();
    const auto& cum = mu.atom_cumulative();
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cum.begin());
    if (i >= cum.size()) i = cum.size() - 1;
    return normalize_point(space, mu.atom_points()[i]);
}

}  // namespace

Point sample(const Space& space, const SeedDistribution& mu, RngStream& rng) {
    switch (mu.kind()) {
        case SeedDistribution::Kind::Uniform:
            return sample_uniform(space, rng);
        case SeedDistribution::Kind::Atoms:
            return sample_atom(space, mu, rng);
        case SeedDistribution::Kind::Mixture:
            if (rng.uniform01() < mu.atom_weight()) return sample_atom(space, mu, rng);
            return sample_uniform(space, rng);
    }
    throw std::logic_error("sample: unhandled distribution kind");
}

// ---- ball measure ---------------------------------------------------------------

namespace {

double uniform_ball_measure(const Space& space, const Point& s, double r) {
    if (const auto* c = space.get_if<Circle>()) {
        if (!std::holds_alternative<CirclePos>(s)) kind_mismatch("ball_measure(circle)");
        return std::min(2.0 * r / c->length, 1.0);
    }
    if (const auto* sg = space.get_if<Segment>()) {
        const auto* p = std::get_if<SegmentPos>(&s);
        if (!p) kind_mismatch("ball_measure(segment)");
        const double hi = std::min(p->s + r, sg->length);
        const double lo = std::max(p->s - r, 0.0);
        return std::max(hi - lo, 0.0) / sg->length;
    }
    if (const auto* t = space.get_if<FlatTorus>()) {
        if (!std::holds_alternative<TorusPos>(s)) kind_mismatch("ball_measure(torus)");
        return torus_ball_fraction(*t, r);
    }
    if (const auto* fm = space.get_if<FiniteMetricSpace>()) {
        const auto* p = std::get_if<FiniteIndex>(&s);
        if (!p) kind_mismatch("ball_measure(finite)");
        std::size_t count = 0;
        for (std::size_t j = 0; j < fm->m; ++j)
            if (fm->at(p->i, j) <= r) ++count;
        return static_cast<double>(count) / static_cast<double>(fm->m);
    }
    if (const auto* g = space.get_if<MetricGraphSpace>()) {
        const auto* p = std::get_if<GraphPos>(&s);
        if (!p) kind_mismatch("ball_measure(graph)");
        return std::min(graph_ball_length(*g, *p, r) / g->total_length, 1.0);
    }
    throw std::logic_error("ball_measure: unhandled space kind");
}

double atoms_ball_measure(const Space& space, const SeedDistribution& mu, const Point& s,
                          double r) {
    double mass = 0.0;
    const auto& pts = mu.atom_points();
    const auto& w = mu.atom_weights();
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (distance(space, s, pts[i]) <= r) mass += w[i];
    return std::min(mass, 1.0);
}

}  // namespace

double ball_measure(const Space& space, const SeedDistribution& mu, const Point& s,
                    double r) {
    if (r < 0) throw std::invalid_argument("ball_measure: negative radius");
    switch (mu.kind()) {
        case SeedDistribution::Kind::Uniform:
            return uniform_ball_measure(space, s, r);
        case SeedDistribution::Kind::Atoms:
            return atoms_ball_measure(space, mu, s, r);
        case SeedDistribution::Kind::Mixture: {
            const double w = mu.atom_weight();
            return w * atoms_ball_measure(space, mu, s, r) +
                   (1.0 - w) * uniform_ball_measure(space, s, r);
        }
    }
    throw std::logic_error("ball_measure: unhandled distribution kind");
}

// ---- eta -------------------------------------------------------------------------

EtaResult eta(const Space& space, const SeedDistribution& mu, double r) {
    if (!(r > 0)) throw std::invalid_argument("eta: radius must be positive");
    const bool is_uniform = mu.kind() == SeedDistribution::Kind::Uniform;
    if (is_uniform) {
        if (const auto* c = space.get_if<Circle>())
            return {std::min(2.0 * r / c->length, 1.0), true, 0.0};
        if (const auto* sg = space.get_if<Segment>())
            return {std::min(r, sg->length) / sg->length, true, 0.0};
        if (const auto* t = space.get_if<FlatTorus>())
            return {torus_ball_fraction(*t, r), true, 0.0};
    }
    if (const auto* fm = space.get_if<FiniteMetricSpace>()) {
        double best = 1.0;
        for (std::size_t i = 0; i < fm->m; ++i)
            best = std::min(best, ball_measure(space, mu, Point{FiniteIndex{i}}, r));
        return {best, true, 0.0};
    }
    // Certified lower bound: every center is within eps of a net point, and
    // ball(net, r - eps) subsets ball(center, r).
    const double eps = r / 8.0;
    const Net net = epsilon_net(space, eps);
    double best = 1.0;
    for (const Point& p : net.points)
        best = std::min(best, ball_measure(space, mu, p, r - net.mesh));
    return {std::max(best, 0.0), false, net.mesh};
}

// ---- covering number ----------------------------------------------------------------

namespace {

std::vector<Point> finite_points(const FiniteMetricSpace& fm) {
    std::vector<Point> pts;
    pts.reserve(fm.m);
    for (std::size_t i = 0; i < fm.m; ++i) pts.push_back(FiniteIndex{i});
    return pts;
}

CoveringNumber finite_covering_number(const FiniteMetricSpace& fm, double r) {
    if (fm.m <= 20) {
        std::vector<std::uint32_t> sets(fm.m, 0);
        for (std::size_t i = 0; i < fm.m; ++i)
            for (std::size_t j = 0; j < fm.m; ++j)
                if (fm.at(i, j) <= r) sets[i] |= (1u << j);
        const std::uint32_t full = (fm.m == 32) ? ~0u : ((1u << fm.m) - 1);
        return {exact_set_cover(sets, full), true};
    }
    std::vector<std::vector<std::size_t>> sets(fm.m);
    for (std::size_t i = 0; i < fm.m; ++i)
        for (std::size_t j = 0; j < fm.m; ++j)
            if (fm.at(i, j) <= r) sets[i].push_back(j);
    return {greedy_set_cover(sets, fm.m), false};
}

// Greedy farthest-point net over candidate points; the result covers every
// candidate within `radius`, which certifies a space cover at radius + mesh.
std::size_t greedy_net_count(const Space& space, const std::vector<Point>& candidates,
                             double radius) {
    std::vector<double> min_dist(candidates.size(),
                                 std::numeric_limits<double>::infinity());
    std::size_t count = 0, next = 0;  // deterministic start: first candidate
    while (true) {
        ++count;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            min_dist[i] = std::min(min_dist[i],
                                   distance(space, candidates[next], candidates[i]));
        double far = -1.0;
        std::size_t far_i = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (min_dist[i] > far) {
                far = min_dist[i];
                far_i = i;
            }
        if (far <= radius) return count;
        next = far_i;
    }
}

}  // namespace

CoveringNumber covering_number(const Space& space, double r) {
    if (!(r > 0)) throw std::invalid_argument("covering_number: radius must be positive");
    if (r >= space.diameter()) return {1, true};
    if (const auto* c = space.get_if<Circle>()) {
        if (2.0 * r >= c->length) return {1, true};
        return {min_count_covering(c->length, 2.0 * r), true};
    }
    if (const auto* sg = space.get_if<Segment>())
        return {min_count_covering(sg->length, 2.0 * r), true};
    if (const auto* fm = space.get_if<FiniteMetricSpace>())
        return finite_covering_number(*fm, r);
    // Torus / graph: constructive upper bound from a greedy net over a fine mesh.
    const double delta = r / 8.0;
    const Net mesh = epsilon_net(space, delta);
    return {greedy_net_count(space, mesh.points, r - mesh.mesh), false};
}

// ---- dimension d(r) -------------------------------------------------------------------

namespace {

DimensionBound finite_dimension(const Space& space, const FiniteMetricSpace& fm, double r) {
    std::size_t worst = 0;
    bool exact = true;
    for (std::size_t c = 0; c < fm.m; ++c) {
        std::vector<std::size_t> universe;
        for (std::size_t j = 0; j < fm.m; ++j)
            if (fm.at(c, j) <= r) universe.push_back(j);
        if (universe.size() <= 20) {
            std::vector<std::uint32_t> sets(fm.m, 0);
            for (std::size_t i = 0; i < fm.m; ++i)
                for (std::size_t k = 0; k < universe.size(); ++k)
                    if (fm.at(i, universe[k]) <= r / 2.0) sets[i] |= (1u << k);
            const std::uint32_t full =
                (universe.size() >= 32) ? ~0u : ((1u << universe.size()) - 1);
            worst = std::max(worst, exact_set_cover(sets, full));
        } else {
            std::vector<std::vector<std::size_t>> sets(fm.m);
            for (std::size_t i = 0; i < fm.m; ++i)
                for (std::size_t k = 0; k < universe.size(); ++k)
                    if (fm.at(i, universe[k]) <= r / 2.0) sets[i].push_back(k);
            worst = std::max(worst, greedy_set_cover(sets, universe.size()));
            exact = false;
        }
    }
    (void)space;
    return {worst, exact};
}

// Certified upper bound for one enlarged ball: cover the delta-mesh points of
// ball(center, R + delta) by (r/2 - delta)-balls chosen greedily among them.
std::size_t cover_one_ball(const Space& space, const std::vector<Point>& mesh_points,
                           const Point& center, double R, double half_r, double delta) {
    std::vector<std::size_t> target;
    for (std::size_t i = 0; i < mesh_points.size(); ++i)
        if (distance(space, center, mesh_points[i]) <= R + delta) target.push_back(i);
    if (target.empty()) return 1;
    std::vector<char> covered(target.size(), 0);
    std::size_t remaining = target.size(), count = 0;
    while (remaining > 0) {
        std::size_t best = 0, best_gain = 0;
        for (std::size_t a = 0; a < target.size(); ++a) {
            std::size_t gain = 0;
            for (std::size_t b = 0; b < target.size(); ++b)
                if (!covered[b] && distance(space, mesh_points[target[a]],
                                            mesh_points[target[b]]) <= half_r - delta)
                    ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best = a;
            }
        }
        if (best_gain == 0)
            throw std::runtime_error("dimension_d: mesh too coarse for certification");
        for (std::size_t b = 0; b < target.size(); ++b)
            if (!covered[b] && distance(space, mesh_points[target[best]],
                                        mesh_points[target[b]]) <= half_r - delta) {
                covered[b] = 1;
                --remaining;
            }
        ++count;
    }
    return count;
}

}  // namespace

DimensionBound dimension_d(const Space& space, double r) {
    if (!(r > 0)) throw std::invalid_argument("dimension_d: radius must be positive");
    if (const auto* c = space.get_if<Circle>()) {
        if (r >= c->length) return {1, true};
        return {2, true};  // any arc of length <= 2r splits into two r-long halves
    }
    if (const auto* sg = space.get_if<Segment>()) {
        if (r >= sg->length) return {1, true};
        return {2, true};
    }
    if (const auto* fm = space.get_if<FiniteMetricSpace>())
        return finite_dimension(space, *fm, r);

    const double delta = r / 16.0;
    const Net mesh = epsilon_net(space, delta);
    if (space.get_if<FlatTorus>()) {
        // Homogeneous: every ball is a translate, one center suffices.
        const Point origin = TorusPos{0.0, 0.0};
        return {cover_one_ball(space, mesh.points, origin, r, r / 2.0, mesh.mesh), false};
    }
    const double eps_s = r / 4.0;
    const Net centers = epsilon_net(space, eps_s);
    std::size_t worst = 0;
    for (const Point& s : centers.points)
        worst = std::max(worst, cover_one_ball(space, mesh.points, s, r + centers.mesh,
                                               r / 2.0, mesh.mesh));
    return {worst, false};
}

// ---- epsilon net -----------------------------------------------------------------------

Net epsilon_net(const Space& space, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("epsilon_net: eps must be positive");
    Net net;
    if (const auto* c = space.get_if<Circle>()) {
        const std::size_t k = min_count_covering(c->length, 2.0 * eps);
        const double spacing = c->length / static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i)
            net.points.push_back(CirclePos{static_cast<double>(i) * spacing});
        net.mesh = spacing / 2.0;
        return net;
    }
    if (const auto* sg = space.get_if<Segment>()) {
        const std::size_t k = min_count_covering(sg->length, 2.0 * eps);
        const double spacing = sg->length / static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i)
            net.points.push_back(SegmentPos{(static_cast<double>(i) + 0.5) * spacing});
        net.mesh = spacing / 2.0;
        return net;
    }
    if (const auto* t = space.get_if<FlatTorus>()) {
        const double per_axis = eps * std::sqrt(2.0);
        const std::size_t k1 = min_count_covering(t->l1, per_axis);
        const std::size_t k2 = min_count_covering(t->l2, per_axis);
        const double a1 = t->l1 / static_cast<double>(k1);
        const double a2 = t->l2 / static_cast<double>(k2);
        for (std::size_t i = 0; i < k1; ++i)
            for (std::size_t j = 0; j < k2; ++j)
                net.points.push_back(TorusPos{static_cast<double>(i) * a1,
                                              static_cast<double>(j) * a2});
        net.mesh = std::hypot(a1 / 2.0, a2 / 2.0);
        return net;
    }
    if (const auto* fm = space.get_if<FiniteMetricSpace>()) {
        double min_pos = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < fm->m; ++i)
            for (std::size_t j = i + 1; j < fm->m; ++j)
                min_pos = std::min(min_pos, fm->at(i, j));
        if (fm->m == 1 || eps < min_pos) {
            net.points = finite_points(*fm);
            net.mesh = 0.0;
            return net;
        }
        // Greedy farthest-point subsample, deterministic start at index 0.
        std::vector<double> min_dist(fm->m, std::numeric_limits<double>::infinity());
        std::size_t next = 0;
        std::vector<std::size_t> chosen;
        while (true) {
            chosen.push_back(next);
            for (std::size_t i = 0; i < fm->m; ++i)
                min_dist[i] = std::min(min_dist[i], fm->at(next, i));
            double far = -1.0;
            for (std::size_t i = 0; i < fm->m; ++i)
                if (min_dist[i] > far) {
                    far = min_dist[i];
                    next = i;
                }
            if (far <= eps) {
                net.mesh = std::max(far, 0.0);
                break;
            }
        }
        for (std::size_t i : chosen) net.points.push_back(FiniteIndex{i});
        return net;
    }
    if (const auto* g = space.get_if<MetricGraphSpace>()) {
        double mesh = 0.0;
        for (std::size_t e = 0; e < g->edges.size(); ++e) {
            const double len = g->edges[e].length;
            const std::size_t k = min_count_covering(len, 2.0 * eps);
            const double spacing = len / static_cast<double>(k);
            for (std::size_t i = 0; i < k; ++i)
                net.points.push_back(GraphPos{e, (static_cast<double>(i) + 0.5) * spacing});
            mesh = std::max(mesh, spacing / 2.0);
        }
        net.mesh = mesh;
        return net;
    }
    throw std::logic_error("epsilon_net: unhandled space kind");
}

// ---- radial profiles ----------------------------------------------------------------------

namespace {

PiecewiseLinear step_profile(std::vector<std::pair<double, double>> dist_weight) {
    std::sort(dist_weight.begin(), dist_weight.end());
    std::vector<double> xs, ys;
    double mass = 0.0;
    std::size_t i = 0;
    // Mass sitting at distance zero is present from the start.
    while (i < dist_weight.size() && dist_weight[i].first == 0.0)
        mass += dist_weight[i++].second;
    xs.push_back(0.0);
    ys.push_back(mass);
    while (i < dist_weight.size()) {
        const double d = dist_weight[i].first;
        double add = 0.0;
        while (i < dist_weight.size() && dist_weight[i].first == d)
            add += dist_weight[i++].second;
        xs.push_back(d);
        ys.push_back(mass);
        mass += add;
        xs.push_back(d);
        ys.push_back(mass);
    }
    return PiecewiseLinear(std::move(xs), std::move(ys));
}

std::optional<PiecewiseLinear> uniform_profile(const Space& space, const Point& s) {
    if (const auto* c = space.get_if<Circle>()) {
        (void)s;
        return PiecewiseLinear({0.0, c->length / 2.0}, {0.0, 1.0});
    }
    if (const auto* sg = space.get_if<Segment>()) {
        const auto* p = std::get_if<SegmentPos>(&s);
        if (!p) kind_mismatch("radial_ball_measure(segment)");
        const double L = sg->length;
        const double a = std::min(p->s, L - p->s);
        const double b = std::max(p->s, L - p->s);
        return PiecewiseLinear({0.0, a, b}, {0.0, 2.0 * a / L, 1.0});
    }
    if (const auto* fm = space.get_if<FiniteMetricSpace>()) {
        const auto* p = std::get_if<FiniteIndex>(&s);
        if (!p) kind_mismatch("radial_ball_measure(finite)");
        std::vector<std::pair<double, double>> dw;
        dw.reserve(fm->m);
        for (std::size_t j = 0; j < fm->m; ++j)
            dw.emplace_back(fm->at(p->i, j), 1.0 / static_cast<double>(fm->m));
        return step_profile(std::move(dw));
    }
    return std::nullopt;  // torus / graph: caller integrates ball_measure
}

PiecewiseLinear atoms_profile(const Space& space, const SeedDistribution& mu,
                              const Point& s) {
    std::vector<std::pair<double, double>> dw;
    dw.reserve(mu.atom_points().size());
    for (std::size_t i = 0; i < mu.atom_points().size(); ++i)
        dw.emplace_back(distance(space, s, mu.atom_points()[i]), mu.atom_weights()[i]);
    return step_profile(std::move(dw));
}

}  // namespace

std::optional<PiecewiseLinear> radial_ball_measure(const Space& space,
                                                   const SeedDistribution& mu,
                                                   const Point& s) {
    switch (mu.kind()) {
        case SeedDistribution::Kind::Uniform:
            return uniform_profile(space, s);
        case SeedDistribution::Kind::Atoms:
            return atoms_profile(space, mu, s);
        case SeedDistribution::Kind::Mixture: {
            auto uni = uniform_profile(space, s);
            if (!uni) return std::nullopt;
            return PiecewiseLinear::combine(atoms_profile(space, mu, s), *uni,
                                            mu.atom_weight(), 1.0 - mu.atom_weight());
        }
    }
    throw std::logic_error("radial_ball_measure: unhandled distribution kind");
}

// ---- rescaling -------------------------------------------------------------------------------

Space scaled_space(const Space& space, double factor) {
    if (!(factor > 0)) throw std::invalid_argument("scaled_space: factor must be positive");
    if (const auto* c = space.get_if<Circle>()) return Space::circle(c->length * factor);
    if (const auto* sg = space.get_if<Segment>()) return Space::segment(sg->length * factor);
    if (const auto* t = space.get_if<FlatTorus>())
        return Space::flat_torus(t->l1 * factor, t->l2 * factor);
    if (const auto* fm = space.get_if<FiniteMetricSpace>()) {
        std::vector<double> d = fm->d;
        for (double& x : d) x *= factor;
        return Space::finite_metric(fm->m, std::move(d));
    }
    if (const auto* g = space.get_if<MetricGraphSpace>()) {
        std::vector<GraphEdge> edges = g->edges;
        for (auto& e : edges) e.length *= factor;
        return Space::metric_graph(g->n_vertices, std::move(edges));
    }
    throw std::logic_error("scaled_space: unhandled space kind");
}

Point scaled_point(const Point& p, double factor) {
    if (const auto* c = std::get_if<CirclePos>(&p)) return CirclePos{c->s * factor};
    if (const auto* s = std::get_if<SegmentPos>(&p)) return SegmentPos{s->s * factor};
    if (const auto* t = std::get_if<TorusPos>(&p))
        return TorusPos{t->x * factor, t->y * factor};
    if (const auto* f = std::get_if<FiniteIndex>(&p)) return *f;
    if (const auto* g = std::get_if<GraphPos>(&p))
        return GraphPos{g->edge, g->offset * factor};
    throw std::logic_error("scaled_point: unhandled point kind");
}

SeedDistribution scaled_distribution(const SeedDistribution& mu, double factor) {
    switch (mu.kind()) {
        case SeedDistribution::Kind::Uniform:
            return SeedDistribution::uniform();
        case SeedDistribution::Kind::Atoms:
        case SeedDistribution::Kind::Mixture: {
            std::vector<Point> pts;
            pts.reserve(mu.atom_points().size());
            for (const Point& p : mu.atom_points()) pts.push_back(scaled_point(p, factor));
            if (mu.kind() == SeedDistribution::Kind::Atoms)
                return SeedDistribution::atoms(std::move(pts), mu.atom_weights());
            return SeedDistribution::mixture(std::move(pts), mu.atom_weights(),
                                             mu.atom_weight());
        }
    }
    throw std::logic_error("scaled_distribution: unhandled distribution kind");
}

}  // namespace coverlab
