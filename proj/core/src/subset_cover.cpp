#include "coverlab/subset_cover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coverlab/numerics.hpp"
#include "coverlab/parallel.hpp"

namespace coverlab {

namespace {

std::size_t ground_of(const SubsetSampler::Kind& kind) {
    if (const auto* u = std::get_if<UniformSingleton>(&kind)) return u->m;
    if (const auto* r = std::get_if<RandomKSubset>(&kind)) return r->m;
    if (const auto* c = std::get_if<CyclicArc>(&kind)) return c->m;
    if (const auto* b = std::get_if<MetricBall>(&kind)) {
        const auto* fm = b->space ? b->space->get_if<FiniteMetricSpace>() : nullptr;
        if (!fm) throw std::invalid_argument("MetricBall sampler needs a FiniteMetric space");
        return fm->m;
    }
    throw std::logic_error("SubsetSampler: unhandled kind");
}

}  // namespace

SubsetSampler::SubsetSampler(Kind kind) : kind_(std::move(kind)), m_(ground_of(kind_)) {
    if (m_ == 0) throw std::invalid_argument("SubsetSampler: empty ground set");
    if (const auto* r = std::get_if<RandomKSubset>(&kind_)) {
        if (r->k == 0 || r->k > r->m)
            throw std::invalid_argument("RandomKSubset: need 1 <= k <= m");
    }
    if (const auto* c = std::get_if<CyclicArc>(&kind_)) {
        if (c->k == 0 || c->k > c->m)
            throw std::invalid_argument("CyclicArc: need 1 <= k <= m");
    }
    if (const auto* b = std::get_if<MetricBall>(&kind_)) {
        const auto* fm = b->space->get_if<FiniteMetricSpace>();
        ball_cache_.resize(fm->m);
        for (std::size_t i = 0; i < fm->m; ++i)
            for (std::size_t j = 0; j < fm->m; ++j)
                if (fm->at(i, j) <= b->r0)
                    ball_cache_[i].push_back(static_cast<std::uint32_t>(j));
        // Positivity: every ground point must carry positive hit probability.
        for (std::size_t j = 0; j < fm->m; ++j)
            if (!(ball_measure(*b->space, b->mu, Point{FiniteIndex{j}}, b->r0) > 0.0))
                throw std::invalid_argument(
                    "MetricBall sampler: some ground point is never covered");
    }
}

void SubsetSampler::draw(RngStream& rng, std::vector<std::uint32_t>& out) const {
    out.clear();
    if (std::get_if<UniformSingleton>(&kind_)) {
        out.push_back(static_cast<std::uint32_t>(rng.uniform_index(m_)));
        return;
    }
    if (const auto* r = std::get_if<RandomKSubset>(&kind_)) {
        // Floyd's algorithm: k distinct values without an m-sized scratch.
        for (std::size_t j = r->m - r->k; j < r->m; ++j) {
            const auto t = static_cast<std::uint32_t>(rng.uniform_index(j + 1));
            if (std::find(out.begin(), out.end(), t) == out.end())
                out.push_back(t);
            else
                out.push_back(static_cast<std::uint32_t>(j));
        }
        return;
    }
    if (const auto* c = std::get_if<CyclicArc>(&kind_)) {
        const std::size_t start = rng.uniform_index(c->m);
        for (std::size_t i = 0; i < c->k; ++i)
            out.push_back(static_cast<std::uint32_t>((start + i) % c->m));
        return;
    }
    if (const auto* b = std::get_if<MetricBall>(&kind_)) {
        const Point center = sample(*b->space, b->mu, rng);
        const auto* fi = std::get_if<FiniteIndex>(&center);
        if (!fi) throw std::invalid_argument("MetricBall sampler: non-finite center");
        out = ball_cache_[fi->i];
        return;
    }
    throw std::logic_error("SubsetSampler::draw: unhandled kind");
}

TerminalRecord simulate_cover(const SubsetSampler& sampler, RngStream& rng) {
    const std::size_t m = sampler.ground_size();
    std::vector<std::uint32_t> first_cover(m, 0);
    std::vector<char> covered(m, 0);
    std::size_t remaining = m, n = 0;
    std::vector<std::uint32_t> subset;
    while (remaining > 0) {
        sampler.draw(rng, subset);
        ++n;
        for (std::uint32_t j : subset)
            if (!covered[j]) {
                covered[j] = 1;
                first_cover[j] = static_cast<std::uint32_t>(n);
                --remaining;
            }
    }
    TerminalRecord rec;
    rec.cover_count = n;
    for (std::size_t j = 0; j < m; ++j)
        if (first_cover[j] == n) rec.terminal_set.push_back(static_cast<std::uint32_t>(j));
    return rec;
}

double estimate_c_of_B(const SubsetSampler& sampler,
                       const std::vector<std::uint32_t>& B, std::size_t reps,
                       RngStream& rng) {
    if (B.empty()) throw std::invalid_argument("estimate_c_of_B: empty target set");
    std::vector<char> needed(sampler.ground_size(), 0);
    for (std::uint32_t j : B) needed.at(j) = 1;
    std::vector<double> counts;
    counts.reserve(reps);
    std::vector<std::uint32_t> subset;
    std::vector<char> covered(sampler.ground_size());
    for (std::size_t rep = 0; rep < reps; ++rep) {
        std::fill(covered.begin(), covered.end(), 0);
        std::size_t remaining = B.size(), n = 0;
        while (remaining > 0) {
            sampler.draw(rng, subset);
            ++n;
            for (std::uint32_t j : subset)
                if (needed[j] && !covered[j]) {
                    covered[j] = 1;
                    --remaining;
                }
        }
        counts.push_back(static_cast<double>(n));
    }
    return sample_mean(counts);
}

KappaRatio kappa_ratio(const SubsetSampler& sampler, std::size_t outer_reps,
                       std::size_t inner_reps, const RngStream& rng, unsigned threads) {
    if (outer_reps < 2 || inner_reps < 2)
        throw std::invalid_argument("kappa_ratio: reps must be >= 2");
    struct Outer {
        double c, tsize, c_terminal;
    };
    auto rows = run_replicates<Outer>(
        outer_reps, rng, threads, [&](std::size_t, RngStream& stream) {
            RngStream outer_stream = stream.child(0);
            RngStream inner_stream = stream.child(1);
            const TerminalRecord rec = simulate_cover(sampler, outer_stream);
            const double c_term =
                estimate_c_of_B(sampler, rec.terminal_set, inner_reps, inner_stream);
            return Outer{static_cast<double>(rec.cover_count),
                         static_cast<double>(rec.terminal_set.size()), c_term};
        });

    KappaRatio out;
    for (const Outer& o : rows) {
        out.cover_counts.push_back(o.c);
        out.terminal_sizes.push_back(o.tsize);
        out.c_terminal.push_back(o.c_terminal);
    }
    auto ratio_of = [](std::span<const double> c, std::span<const double> ct) {
        const double mean_c = sample_mean(c);
        const double var_c = sample_variance(c, mean_c);
        const double mean_ct = sample_mean(ct);
        if (mean_ct <= 0.0 || mean_c <= 0.0) return 0.0;
        return (var_c / (mean_c * mean_c)) * mean_c / mean_ct;
    };
    out.ec_hat = sample_mean(out.cover_counts);
    out.var_ratio = sample_variance(out.cover_counts, out.ec_hat) / (out.ec_hat * out.ec_hat);
    out.mean_c_terminal = sample_mean(out.c_terminal);
    out.ratio = ratio_of(out.cover_counts, out.c_terminal);

    // Bootstrap over outer replicates, resampling (C, c-hat(T)) pairs.
    RngStream boot = rng.child(0);
    std::vector<double> boot_ratios(kBootstrapResamples);
    std::vector<double> rc(outer_reps), rt(outer_reps);
    for (auto& br : boot_ratios) {
        for (std::size_t i = 0; i < outer_reps; ++i) {
            const std::size_t k = boot.uniform_index(outer_reps);
            rc[i] = out.cover_counts[k];
            rt[i] = out.c_terminal[k];
        }
        br = ratio_of(rc, rt);
    }
    std::sort(boot_ratios.begin(), boot_ratios.end());
    out.ci_lo = boot_ratios[static_cast<std::size_t>(0.025 * (kBootstrapResamples - 1))];
    out.ci_hi = boot_ratios[static_cast<std::size_t>(0.975 * (kBootstrapResamples - 1))];
    return out;
}

// ---- monotone chains ------------------------------------------------------------

MonotoneChain::MonotoneChain(Kind kind) : kind_(std::move(kind)) {
    if (const auto* cc = std::get_if<CouponChain>(&kind_)) {
        if (cc->n == 0) throw std::invalid_argument("CouponChain: n must be >= 1");
        const auto n = static_cast<double>(cc->n);
        h_.resize(cc->n + 1, 0.0);
        for (std::size_t j = 1; j <= cc->n; ++j)
            h_[j] = h_[j - 1] + n / static_cast<double>(j);
        // Transitions j -> j-1; h must never increase along them.
        max_drop_ = 0.0;
        for (std::size_t j = 1; j <= cc->n; ++j) {
            const double drop = h_[j] - h_[j - 1];
            if (drop < 0) throw std::logic_error("CouponChain: non-monotone h-table");
            max_drop_ = std::max(max_drop_, drop);
        }
        expected_ = h_[cc->n];
        return;
    }
    if (const auto* tr = std::get_if<TwoRateCoupon>(&kind_)) {
        if (tr->n1 == 0 || tr->n2 == 0)
            throw std::invalid_argument("TwoRateCoupon: class sizes must be >= 1");
        if (!(tr->p > 0.0 && tr->p < 1.0))
            throw std::invalid_argument("TwoRateCoupon: p must be in (0,1)");
        const std::size_t w = tr->n2 + 1;
        h_.assign((tr->n1 + 1) * w, 0.0);
        auto at = [&](std::size_t j1, std::size_t j2) -> double& { return h_[j1 * w + j2]; };
        for (std::size_t j1 = 0; j1 <= tr->n1; ++j1)
            for (std::size_t j2 = 0; j2 <= tr->n2; ++j2) {
                if (j1 == 0 && j2 == 0) continue;
                const double r1 =
                    tr->p * static_cast<double>(j1) / static_cast<double>(tr->n1);
                const double r2 =
                    (1.0 - tr->p) * static_cast<double>(j2) / static_cast<double>(tr->n2);
                const double total = r1 + r2;
                double next = 0.0;
                if (j1 > 0) next += (r1 / total) * at(j1 - 1, j2);
                if (j2 > 0) next += (r2 / total) * at(j1, j2 - 1);
                at(j1, j2) = 1.0 / total + next;
            }
        // Exhaustive monotonicity check over every possible transition.
        max_drop_ = 0.0;
        for (std::size_t j1 = 0; j1 <= tr->n1; ++j1)
            for (std::size_t j2 = 0; j2 <= tr->n2; ++j2) {
                if (j1 > 0) {
                    const double drop = at(j1, j2) - at(j1 - 1, j2);
                    if (drop < 0) throw std::logic_error("TwoRateCoupon: non-monotone h");
                    max_drop_ = std::max(max_drop_, drop);
                }
                if (j2 > 0) {
                    const double drop = at(j1, j2) - at(j1, j2 - 1);
                    if (drop < 0) throw std::logic_error("TwoRateCoupon: non-monotone h");
                    max_drop_ = std::max(max_drop_, drop);
                }
            }
        expected_ = at(tr->n1, tr->n2);
        return;
    }
    throw std::logic_error("MonotoneChain: unhandled kind");
}

double MonotoneChain::simulate(RngStream& rng) const {
    if (const auto* cc = std::get_if<CouponChain>(&kind_)) {
        const auto n = static_cast<double>(cc->n);
        double t = 0.0;
        for (std::size_t j = cc->n; j >= 1; --j)
            t += rng.exponential(static_cast<double>(j) / n);
        return t;
    }
    const auto& tr = std::get<TwoRateCoupon>(kind_);
    std::size_t j1 = tr.n1, j2 = tr.n2;
    double t = 0.0;
    while (j1 > 0 || j2 > 0) {
        const double r1 = tr.p * static_cast<double>(j1) / static_cast<double>(tr.n1);
        const double r2 =
            (1.0 - tr.p) * static_cast<double>(j2) / static_cast<double>(tr.n2);
        const double total = r1 + r2;
        t += rng.exponential(total);
        if (rng.uniform01() * total < r1)
            --j1;
        else
            --j2;
    }
    return t;
}

double MonotoneChain::exact_variance() const {
    const auto* cc = std::get_if<CouponChain>(&kind_);
    if (!cc)
        throw std::invalid_argument("exact_variance: closed form available for CouponChain only");
    // Sum of independent Exponential(j/n): var = sum (n/j)^2.
    const auto n = static_cast<double>(cc->n);
    std::vector<double> terms;
    terms.reserve(cc->n);
    for (std::size_t j = 1; j <= cc->n; ++j) {
        const double x = n / static_cast<double>(j);
        terms.push_back(x * x);
    }
    return compensated_sum(terms);
}

BoundReport monotone_chain_check(const MonotoneChain& chain, std::size_t reps,
                                 const RngStream& rng, unsigned threads) {
    if (reps < 2) throw std::invalid_argument("monotone_chain_check: reps must be >= 2");
    auto samples = run_replicates<double>(
        reps, rng, threads,
        [&](std::size_t, RngStream& stream) { return chain.simulate(stream); });
    const CoverStats stats = summarize_samples(std::move(samples), rng.child(0));
    const double et = chain.expected_hitting();
    const double lhs = stats.variance / et;
    const double lhs_se = stats.var_se / et;
    return make_report("monotone-chain", lhs, lhs_se, chain.max_drop(),
                       {{"expected_hitting", et},
                        {"simulated_mean", stats.mean},
                        {"simulated_var", stats.variance}});
}

}  // namespace coverlab
