#include "coverlab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "coverlab/numerics.hpp"
#include "coverlab/parallel.hpp"

namespace coverlab {

namespace {

void check_params(const GrowthParams& p) {
    if (!(p.lambda > 0) || !(p.v > 0))
        throw std::invalid_argument("growth: lambda and v must be positive");
}

struct PosTime {
    double q;  // position
    double t;  // arrival time
};

std::vector<PosTime> circle_arrivals(const GrowthRealization& real, double L) {
    std::vector<PosTime> pts;
    pts.reserve(real.arrivals.size());
    for (const Arrival& a : real.arrivals) {
        double s = std::fmod(std::get<CirclePos>(a.pos).s, L);
        if (s < 0) s += L;
        pts.push_back({s, a.tau});
    }
    std::sort(pts.begin(), pts.end(), [](const PosTime& a, const PosTime& b) {
        return a.q < b.q || (a.q == b.q && a.t < b.t);
    });
    return pts;
}

// Max over a closed gap of min(alpha + x, beta + (w - x)), x in [0, w] (time units).
double gap_peak(double alpha, double beta, double w) {
    const double xstar = 0.5 * (w + beta - alpha);
    if (xstar <= 0.0) return beta + w;
    if (xstar >= w) return alpha + w;
    return 0.5 * (alpha + beta + w);
}

double gap_peak_offset(double alpha, double beta, double w) {
    const double xstar = 0.5 * (w + beta - alpha);
    return std::clamp(xstar, 0.0, w);
}

CoverWitness circle_cover_time(const GrowthRealization& real, double L, double v) {
    auto pts = circle_arrivals(real, L);
    const std::size_t m = pts.size();
    if (m == 0) throw std::invalid_argument("cover_time_exact: empty realization");
    if (m == 1)
        return {pts[0].t + (L / 2.0) / v,
                CirclePos{std::fmod(pts[0].q + L / 2.0, L)}};

    // A[i]: earliest arrival of a front reaching q_i travelling in increasing
    // position direction; B[i]: same in decreasing direction. Two cyclic
    // relaxation passes make both exact. The wrap gap is written explicitly:
    // coincident first/last positions must yield a full-circle gap, not zero.
    std::vector<double> A(m), B(m), gap_next(m);
    for (std::size_t i = 0; i < m; ++i) {
        A[i] = B[i] = pts[i].t;
        gap_next[i] = (i + 1 < m) ? pts[i + 1].q - pts[i].q
                                  : (pts[0].q - pts[m - 1].q) + L;
    }
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t prev = (i + m - 1) % m;
            A[i] = std::min(A[i], A[prev] + gap_next[prev] / v);
        }
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = m; k-- > 0;)
            B[k] = std::min(B[k], B[(k + 1) % m] + gap_next[k] / v);
    double c = -1.0;
    Point where = CirclePos{pts[0].q};
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t next = (i + 1) % m;
        const double w = gap_next[i] / v;
        const double peak = gap_peak(A[i], B[next], w);
        if (peak > c) {
            c = peak;
            const double off = gap_peak_offset(A[i], B[next], w) * v;
            where = CirclePos{std::fmod(pts[i].q + off, L)};
        }
    }
    return {c, where};
}

CoverWitness segment_cover_time(const GrowthRealization& real, double L, double v) {
    std::vector<PosTime> pts;
    pts.reserve(real.arrivals.size());
    for (const Arrival& a : real.arrivals)
        pts.push_back({std::get<SegmentPos>(a.pos).s, a.tau});
    std::sort(pts.begin(), pts.end(), [](const PosTime& a, const PosTime& b) {
        return a.q < b.q || (a.q == b.q && a.t < b.t);
    });
    const std::size_t m = pts.size();
    if (m == 0) throw std::invalid_argument("cover_time_exact: empty realization");
    std::vector<double> A(m), B(m);
    A[0] = pts[0].t;
    for (std::size_t i = 1; i < m; ++i)
        A[i] = std::min(pts[i].t, A[i - 1] + (pts[i].q - pts[i - 1].q) / v);
    B[m - 1] = pts[m - 1].t;
    for (std::size_t k = m - 1; k-- > 0;)
        B[k] = std::min(pts[k].t, B[k + 1] + (pts[k + 1].q - pts[k].q) / v);
    double c = B[0] + pts[0].q / v;
    Point where = SegmentPos{0.0};
    const double at_end = A[m - 1] + (L - pts[m - 1].q) / v;
    if (at_end > c) {
        c = at_end;
        where = SegmentPos{L};
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double w = (pts[i + 1].q - pts[i].q) / v;
        const double peak = gap_peak(A[i], B[i + 1], w);
        if (peak > c) {
            c = peak;
            where = SegmentPos{pts[i].q + gap_peak_offset(A[i], B[i + 1], w) * v};
        }
    }
    return {c, where};
}

CoverWitness finite_cover_time(const FiniteMetricSpace& fm, const GrowthRealization& real,
                               double v) {
    std::vector<double> best(fm.m, std::numeric_limits<double>::infinity());
    for (const Arrival& a : real.arrivals) {
        const std::size_t c = std::get<FiniteIndex>(a.pos).i;
        for (std::size_t j = 0; j < fm.m; ++j)
            best[j] = std::min(best[j], a.tau + fm.at(c, j) / v);
    }
    const auto it = std::max_element(best.begin(), best.end());
    return {*it, FiniteIndex{static_cast<std::size_t>(it - best.begin())}};
}

}  // namespace

GrowthRealization simulate_realization(const GrowthParams& params, RngStream& rng) {
    check_params(params);
    GrowthRealization real;
    double t = rng.exponential(params.lambda);
    real.horizon = t + params.space.diameter() / params.v;
    while (t <= real.horizon) {
        real.arrivals.push_back({t, sample(params.space, params.mu, rng)});
        t += rng.exponential(params.lambda);
    }
    return real;
}

std::vector<Arrival> simulate_arrivals_until(const GrowthParams& params, double t_end,
                                             RngStream& rng) {
    check_params(params);
    std::vector<Arrival> arrivals;
    double t = rng.exponential(params.lambda);
    while (t <= t_end) {
        arrivals.push_back({t, sample(params.space, params.mu, rng)});
        t += rng.exponential(params.lambda);
    }
    return arrivals;
}

double point_cover_time(const Space& space, const GrowthRealization& real,
                        const Point& s, double v) {
    double best = std::numeric_limits<double>::infinity();
    for (const Arrival& a : real.arrivals)
        best = std::min(best, a.tau + distance(space, s, a.pos) / v);
    return best;
}

CoverWitness cover_time_exact_witness(const Space& space, const GrowthRealization& real,
                                      double v) {
    if (!(v > 0)) throw std::invalid_argument("cover_time_exact: v must be positive");
    if (const auto* c = space.get_if<Circle>()) return circle_cover_time(real, c->length, v);
    if (const auto* s = space.get_if<Segment>()) return segment_cover_time(real, s->length, v);
    if (const auto* fm = space.get_if<FiniteMetricSpace>())
        return finite_cover_time(*fm, real, v);
    throw std::invalid_argument(
        "cover_time_exact: needs Circle, Segment, or FiniteMetric; use cover_time_net");
}

double cover_time_exact(const Space& space, const GrowthRealization& real, double v) {
    return cover_time_exact_witness(space, real, v).time;
}

double cover_time_net(const Space& space, const GrowthRealization& real, const Net& net,
                      double v) {
    if (net.points.empty()) throw std::invalid_argument("cover_time_net: empty net");
    // Tight loops for the 1-D kinds (positions flattened and wrapped up
    // front); the generic path goes through distance().
    if (const auto* c = space.get_if<Circle>()) {
        const double L = c->length;
        auto wrap = [L](double s) {
            double r = std::fmod(s, L);
            return r < 0 ? r + L : r;
        };
        std::vector<double> taus(real.arrivals.size()), pos(real.arrivals.size());
        for (std::size_t i = 0; i < real.arrivals.size(); ++i) {
            taus[i] = real.arrivals[i].tau;
            pos[i] = wrap(std::get<CirclePos>(real.arrivals[i].pos).s);
        }
        double worst = 0.0;
        for (const Point& p : net.points) {
            const double q = wrap(std::get<CirclePos>(p).s);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < pos.size(); ++i) {
                double d = std::abs(q - pos[i]);
                if (d > L - d) d = L - d;
                const double t = taus[i] + d / v;
                if (t < best) best = t;
            }
            if (best > worst) worst = best;
        }
        return worst;
    }
    if (space.get_if<Segment>()) {
        std::vector<double> taus(real.arrivals.size()), pos(real.arrivals.size());
        for (std::size_t i = 0; i < real.arrivals.size(); ++i) {
            taus[i] = real.arrivals[i].tau;
            pos[i] = std::get<SegmentPos>(real.arrivals[i].pos).s;
        }
        double worst = 0.0;
        for (const Point& p : net.points) {
            const double q = std::get<SegmentPos>(p).s;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < pos.size(); ++i) {
                const double t = taus[i] + std::abs(q - pos[i]) / v;
                if (t < best) best = t;
            }
            if (best > worst) worst = best;
        }
        return worst;
    }
    double worst = 0.0;
    for (const Point& p : net.points)
        worst = std::max(worst, point_cover_time(space, real, p, v));
    return worst;
}

double point_tail_analytic(const GrowthParams& params, const Point& s, double t) {
    check_params(params);
    if (t < 0) throw std::invalid_argument("point_tail_analytic: negative time");
    if (t == 0) return 1.0;
    const auto profile = radial_ball_measure(params.space, params.mu, s);
    double psi;  // int_0^t mu(ball(s, v u)) du
    if (profile) {
        psi = profile->integral(params.v * t) / params.v;
    } else {
        psi = adaptive_simpson(
            [&](double u) { return ball_measure(params.space, params.mu, s, params.v * u); },
            0.0, t, kQuadRelTol);
    }
    return std::exp(-params.lambda * psi);
}

CStarResult c_star(const GrowthParams& params, const Net& net) {
    check_params(params);
    if (net.points.empty()) throw std::invalid_argument("c_star: empty net");
    CStarResult out;
    out.lipschitz_slack = net.mesh / params.v;
    for (const Point& s : net.points) {
        // Beyond diameter/v the ball is the whole space, so the tail decays
        // at rate lambda; extend until it clears the cutoff.
        double T = params.space.diameter() / params.v;
        double tail_T = point_tail_analytic(params, s, T);
        int guard = 0;
        while (tail_T > kTailCutoff) {
            T += 30.0 / params.lambda;
            tail_T = point_tail_analytic(params, s, T);
            if (++guard > 64) throw QuadratureError("c_star: tail fails to decay");
        }
        const double ec = adaptive_simpson(
            [&](double t) { return point_tail_analytic(params, s, t); }, 0.0, T,
            kQuadRelTol);
        if (ec > out.value) out.value = ec;
        out.truncation_bound = std::max(out.truncation_bound, tail_T / params.lambda);
    }
    return out;
}

namespace {

GrowthCoverStats estimate_impl(const GrowthParams& params, const Net* net,
                               std::size_t reps, const RngStream& rng,
                               unsigned threads) {
    check_params(params);
    if (reps < 2) throw std::invalid_argument("estimate_cover_stats: reps must be >= 2");
    struct Rep {
        double c, tau1, bound;
    };
    auto results = run_replicates<Rep>(reps, rng, threads, [&](std::size_t, RngStream& stream) {
        const GrowthRealization real = simulate_realization(params, stream);
        const double c = net ? cover_time_net(params.space, real, *net, params.v)
                             : cover_time_exact(params.space, real, params.v);
        return Rep{c, real.arrivals.front().tau, real.horizon};
    });
    GrowthCoverStats out;
    std::vector<double> samples;
    samples.reserve(reps);
    out.tau1.reserve(reps);
    for (const Rep& r : results) {
        samples.push_back(r.c);
        out.tau1.push_back(r.tau1);
        if (r.c > r.bound + 1e-9) ++out.upper_violations;
        if (r.c < r.tau1 - 1e-9) ++out.lower_violations;
    }
    out.stats = summarize_samples(std::move(samples), rng.child(0));
    return out;
}

}  // namespace

GrowthCoverStats estimate_cover_stats(const GrowthParams& params, std::size_t reps,
                                      const RngStream& rng, unsigned threads) {
    return estimate_impl(params, nullptr, reps, rng, threads);
}

GrowthCoverStats estimate_cover_stats_net(const GrowthParams& params, const Net& net,
                                          std::size_t reps, const RngStream& rng,
                                          unsigned threads) {
    return estimate_impl(params, &net, reps, rng, threads);
}

std::pair<GrowthParams, StandardizedUnits> standardize(const GrowthParams& params) {
    check_params(params);
    const double length_factor = params.lambda / params.v;  // divide by v/lambda
    GrowthParams std_params{1.0, 1.0, scaled_distribution(params.mu, length_factor),
                            scaled_space(params.space, length_factor)};
    StandardizedUnits units{1.0 / params.lambda, params.v / params.lambda};
    return {std::move(std_params), units};
}

}  // namespace coverlab
