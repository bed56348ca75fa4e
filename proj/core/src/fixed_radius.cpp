#include "coverlab/fixed_radius.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "coverlab/parallel.hpp"

namespace coverlab {

namespace {

// Incremental max-gap cover detector on the circle. Positions live in a
// multiset; circular gap lengths in a second multiset, so each insertion and
// the covered test are O(log n). Gap values are always produced by the same
// two formulas (inner: y - x; wrap: (first - last) + L) so erase-by-value
// finds the exact stored double.
class CircleCover {
  public:
    CircleCover(double length, double r0) : length_(length), r0_(r0) {}

    void insert(double p) {
        if (pos_.empty()) {
            pos_.insert(p);
            gaps_.insert(wrap_gap(p, p));
            return;
        }
        const double old_first = *pos_.begin();
        const double old_last = *pos_.rbegin();
        auto it = pos_.insert(p);
        auto nxt = std::next(it);
        if (it == pos_.begin()) {  // new minimum: splits the wrap gap
            gaps_.erase(gaps_.find(wrap_gap(old_first, old_last)));
            gaps_.insert(old_first - p);
            gaps_.insert(wrap_gap(p, old_last));
        } else if (nxt == pos_.end()) {  // new maximum: also splits the wrap gap
            gaps_.erase(gaps_.find(wrap_gap(old_first, old_last)));
            gaps_.insert(p - old_last);
            gaps_.insert(wrap_gap(old_first, p));
        } else {
            const double lo = *std::prev(it), hi = *nxt;
            gaps_.erase(gaps_.find(hi - lo));
            gaps_.insert(p - lo);
            gaps_.insert(hi - p);
        }
    }

    bool covered() const { return !gaps_.empty() && *gaps_.rbegin() <= 2.0 * r0_; }

  private:
    double wrap_gap(double first, double last) const { return (first - last) + length_; }

    double length_, r0_;
    std::multiset<double> pos_;
    std::multiset<double> gaps_;
};

class SegmentCover {
  public:
    SegmentCover(double length, double r0) : length_(length), r0_(r0) {}

    void insert(double p) {
        if (pos_.empty()) {
            pos_.insert(p);
            return;
        }
        auto it = pos_.insert(p);
        auto nxt = std::next(it);
        auto hasPrev = (it != pos_.begin());
        if (nxt != pos_.end() && hasPrev) {
            const double hi = *nxt, lo = *std::prev(it);
            gaps_.erase(gaps_.find(hi - lo));
            gaps_.insert(p - lo);
            gaps_.insert(hi - p);
        } else if (nxt != pos_.end()) {
            gaps_.insert(*nxt - p);
        } else if (hasPrev) {
            gaps_.insert(p - *std::prev(it));
        }
    }

    bool covered() const {
        if (pos_.empty()) return false;
        if (*pos_.begin() > r0_) return false;
        if (*pos_.rbegin() < length_ - r0_) return false;
        return gaps_.empty() || *gaps_.rbegin() <= 2.0 * r0_;
    }

  private:
    double length_, r0_;
    std::multiset<double> pos_;
    std::multiset<double> gaps_;
};

// Per-config precomputation for finite spaces: the index list each drawn
// center covers.
struct FiniteBalls {
    std::size_t m = 0;
    std::vector<std::vector<std::uint32_t>> cover;

    FiniteBalls(const FiniteMetricSpace& fm, double r0) : m(fm.m), cover(fm.m) {
        for (std::size_t i = 0; i < fm.m; ++i)
            for (std::size_t j = 0; j < fm.m; ++j)
                if (fm.at(i, j) <= r0) cover[i].push_back(static_cast<std::uint32_t>(j));
    }
};

std::size_t simulate_finite(const FixedRadiusConfig& cfg, const FiniteBalls& balls,
                            RngStream& rng) {
    std::vector<char> covered(balls.m, 0);
    std::size_t remaining = balls.m, n = 0;
    while (remaining > 0) {
        const Point c = sample(cfg.space, cfg.mu, rng);
        ++n;
        const auto* fi = std::get_if<FiniteIndex>(&c);
        if (!fi) throw std::invalid_argument("fixed-radius: non-finite center on finite space");
        for (std::uint32_t j : balls.cover[fi->i])
            if (!covered[j]) {
                covered[j] = 1;
                --remaining;
            }
    }
    return n;
}

// Atom-only seed supports can be permanently unable to cover; detect that
// up front instead of looping forever.
void check_coverable(const FixedRadiusConfig& cfg) {
    const SeedDistribution& mu = cfg.mu;
    const bool atoms_only =
        mu.kind() == SeedDistribution::Kind::Atoms ||
        (mu.kind() == SeedDistribution::Kind::Mixture && mu.atom_weight() >= 1.0);
    if (!atoms_only) return;
    const char* msg = "fixed-radius: the seed support cannot cover the space at r0";
    if (const auto* c = cfg.space.get_if<Circle>()) {
        std::vector<double> pos;
        for (const Point& p : mu.atom_points()) {
            double s = std::fmod(std::get<CirclePos>(p).s, c->length);
            if (s < 0) s += c->length;
            pos.push_back(s);
        }
        std::sort(pos.begin(), pos.end());
        double max_gap = pos.front() + c->length - pos.back();
        for (std::size_t i = 1; i < pos.size(); ++i)
            max_gap = std::max(max_gap, pos[i] - pos[i - 1]);
        if (pos.size() == 1) max_gap = c->length;
        if (max_gap > 2.0 * cfg.r0) throw std::invalid_argument(msg);
        return;
    }
    if (const auto* s = cfg.space.get_if<Segment>()) {
        std::vector<double> pos;
        for (const Point& p : mu.atom_points())
            pos.push_back(std::get<SegmentPos>(p).s);
        std::sort(pos.begin(), pos.end());
        if (pos.front() > cfg.r0 || pos.back() < s->length - cfg.r0)
            throw std::invalid_argument(msg);
        for (std::size_t i = 1; i < pos.size(); ++i)
            if (pos[i] - pos[i - 1] > 2.0 * cfg.r0) throw std::invalid_argument(msg);
        return;
    }
    if (const auto* fm = cfg.space.get_if<FiniteMetricSpace>()) {
        for (std::size_t j = 0; j < fm->m; ++j) {
            bool reachable = false;
            for (const Point& p : mu.atom_points())
                if (fm->at(std::get<FiniteIndex>(p).i, j) <= cfg.r0) {
                    reachable = true;
                    break;
                }
            if (!reachable) throw std::invalid_argument(msg);
        }
    }
}

std::size_t simulate_one(const FixedRadiusConfig& cfg, const FiniteBalls* balls,
                         RngStream& rng) {
    if (const auto* c = cfg.space.get_if<Circle>()) {
        CircleCover cover(c->length, cfg.r0);
        std::size_t n = 0;
        do {
            const Point p = sample(cfg.space, cfg.mu, rng);
            cover.insert(std::get<CirclePos>(p).s);
            ++n;
        } while (!cover.covered());
        return n;
    }
    if (const auto* s = cfg.space.get_if<Segment>()) {
        SegmentCover cover(s->length, cfg.r0);
        std::size_t n = 0;
        do {
            const Point p = sample(cfg.space, cfg.mu, rng);
            cover.insert(std::get<SegmentPos>(p).s);
            ++n;
        } while (!cover.covered());
        return n;
    }
    if (cfg.space.get_if<FiniteMetricSpace>()) return simulate_finite(cfg, *balls, rng);
    throw std::invalid_argument(
        "simulate_cover_count: exact computation needs Circle, Segment, or FiniteMetric; "
        "use cover_count_bracket");
}

}  // namespace

std::size_t simulate_cover_count(const FixedRadiusConfig& cfg, RngStream& rng) {
    if (!(cfg.r0 > 0)) throw std::invalid_argument("fixed-radius: r0 must be positive");
    check_coverable(cfg);
    if (const auto* fm = cfg.space.get_if<FiniteMetricSpace>()) {
        FiniteBalls balls(*fm, cfg.r0);
        return simulate_one(cfg, &balls, rng);
    }
    return simulate_one(cfg, nullptr, rng);
}

CoverCountBracket cover_count_bracket(const FixedRadiusConfig& cfg, double eps,
                                      RngStream& rng) {
    if (!(cfg.r0 > 0)) throw std::invalid_argument("fixed-radius: r0 must be positive");
    if (!(eps > 0) || eps >= cfg.r0)
        throw std::invalid_argument("cover_count_bracket: need 0 < eps < r0");
    const Net net = epsilon_net(cfg.space, eps);
    const std::size_t k = net.points.size();
    const double reduced = cfg.r0 - net.mesh;
    std::vector<char> cov_lo(k, 0), cov_hi(k, 0);
    std::size_t remaining_lo = k, remaining_hi = k;
    CoverCountBracket out{0, 0, net.mesh};
    std::size_t n = 0;
    while (remaining_hi > 0) {
        const Point c = sample(cfg.space, cfg.mu, rng);
        ++n;
        for (std::size_t i = 0; i < k; ++i) {
            const double d = distance(cfg.space, c, net.points[i]);
            if (!cov_lo[i] && d <= cfg.r0) {
                cov_lo[i] = 1;
                --remaining_lo;
            }
            if (!cov_hi[i] && d <= reduced) {
                cov_hi[i] = 1;
                --remaining_hi;
            }
        }
        if (remaining_lo == 0 && out.lower == 0) out.lower = n;
    }
    out.upper = n;
    return out;
}

CoverStats estimate_cover_stats(const FixedRadiusConfig& cfg, std::size_t reps,
                                const RngStream& rng, unsigned threads) {
    if (reps < 2) throw std::invalid_argument("estimate_cover_stats: reps must be >= 2");
    if (!(cfg.r0 > 0)) throw std::invalid_argument("fixed-radius: r0 must be positive");
    check_coverable(cfg);
    std::optional<FiniteBalls> balls;
    if (const auto* fm = cfg.space.get_if<FiniteMetricSpace>())
        balls.emplace(*fm, cfg.r0);
    auto samples = run_replicates<double>(
        reps, rng, threads, [&](std::size_t, RngStream& stream) {
            return static_cast<double>(
                simulate_one(cfg, balls ? &*balls : nullptr, stream));
        });
    return summarize_samples(std::move(samples), rng.child(0));
}

}  // namespace coverlab
