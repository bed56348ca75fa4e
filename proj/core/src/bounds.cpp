#include "coverlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "coverlab/numerics.hpp"

namespace coverlab {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::holds:
            return "holds";
        case Verdict::holds_with_slack:
            return "holds-with-slack";
        case Verdict::violated:
            return "violated";
    }
    return "?";
}

BoundReport make_report(std::string name, double lhs, double lhs_se, double rhs,
                        std::map<std::string, double> params) {
    BoundReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.lhs_se = lhs_se;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    if (lhs <= rhs)
        r.verdict = Verdict::holds;
    else if (lhs - 3.0 * lhs_se <= rhs)
        r.verdict = Verdict::holds_with_slack;
    else
        r.verdict = Verdict::violated;
    r.params = std::move(params);
    return r;
}

double prop_fixed_rhs(std::size_t d_r0, double eta_half, double ec) {
    if (!(eta_half > 0))
        throw std::invalid_argument("prop_fixed_rhs: eta(r0/2) must be positive");
    if (!(ec > 0)) throw std::invalid_argument("prop_fixed_rhs: EC must be positive");
    return static_cast<double>(d_r0) / (eta_half * ec);
}

BoundReport growth_var_check(const CoverStats& stats, double c_star) {
    const double rhs = c_star / stats.mean;
    return make_report("growth-var", stats.var_ratio, stats.var_ratio_se, rhs,
                       {{"c_star", c_star}, {"ec_hat", stats.mean}});
}

BoundReport ec_diameter_check(const CoverStats& stats, double delta, double lambda,
                              double v) {
    const double lo = 1.0 / lambda;
    const double hi = 1.0 / lambda + delta / v;
    BoundReport r = make_report("ec-diameter", stats.mean, stats.se_mean, hi,
                                {{"delta", delta},
                                 {"lambda", lambda},
                                 {"v", v},
                                 {"lower_bound", lo},
                                 {"delta_over_ec_sq", delta / (stats.mean * stats.mean)}});
    // Two-sided: the lower side fails only if EC-hat + 3 se < 1/lambda.
    if (stats.mean + 3.0 * stats.se_mean < lo) r.verdict = Verdict::violated;
    return r;
}

double tail_envelope(double ec, double t) {
    if (!(ec > 0)) throw std::invalid_argument("tail_envelope: EC must be positive");
    if (t < 0) throw std::invalid_argument("tail_envelope: negative t");
    const double e = std::exp(1.0);
    return std::clamp(std::exp(1.0 - t / (e * ec)), 0.0, 1.0);
}

double ec_over_cstar_upper(double c_star,
                           const std::function<std::size_t(double)>& cov_fn,
                           const std::vector<double>& a_grid) {
    if (a_grid.empty()) throw std::invalid_argument("ec_over_cstar_upper: empty grid");
    const double e = std::exp(1.0);
    double best = std::numeric_limits<double>::infinity();
    for (double a : a_grid) {
        if (!(a > 0)) throw std::invalid_argument("ec_over_cstar_upper: grid must be positive");
        const auto cov = static_cast<double>(cov_fn(a * c_star));
        best = std::min(best, a + e * (e + std::log(cov)));
    }
    return best;
}

MinMuUpper min_mu_upper(const Space& space, const std::vector<double>& r_grid) {
    if (r_grid.empty()) throw std::invalid_argument("min_mu_upper: empty grid");
    MinMuUpper out;
    out.bound = std::numeric_limits<double>::infinity();
    for (double r : r_grid) {
        if (!(r > 0)) throw std::invalid_argument("min_mu_upper: grid must be positive");
        const CoveringNumber cov = covering_number(space, r);
        const auto n = static_cast<double>(cov.value);
        const double val = r + n * (1.0 + std::log(n));
        if (val < out.bound) {
            out.bound = val;
            out.r_star = r;
            out.cov_at_r_star = cov.value;
        }
    }
    return out;
}

double min_mu_lower(const Space& space) {
    // Predicate cov(3r) <= 9r is monotone in r: cov is nonincreasing and the
    // right side increases.
    auto holds = [&](double r) {
        return static_cast<double>(covering_number(space, 3.0 * r).value) <= 9.0 * r;
    };
    const double delta = space.diameter();
    double hi = std::max(delta, 1.0 / 9.0) * 2.0;
    if (!holds(hi)) throw std::runtime_error("min_mu_lower: predicate never holds");
    double lo = 0.0;
    const double tol = 1e-6 * delta;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (holds(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double coupon_mean(std::size_t n) {
    if (n < 1) throw std::invalid_argument("coupon_mean: n must be >= 1");
    std::vector<double> terms;
    terms.reserve(n);
    for (std::size_t k = 1; k <= n; ++k)
        terms.push_back(1.0 / static_cast<double>(k));
    return static_cast<double>(n) * compensated_sum(terms);
}

double coupon_count_variance(std::size_t n) {
    if (n < 1) throw std::invalid_argument("coupon_count_variance: n must be >= 1");
    std::vector<double> terms;
    terms.reserve(n);
    const auto nd = static_cast<double>(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const double p = static_cast<double>(k) / nd;
        terms.push_back((1.0 - p) / (p * p));
    }
    return compensated_sum(terms);
}

}  // namespace coverlab
