#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "coverlab/space.hpp"
#include "coverlab/stats.hpp"

namespace coverlab {

enum class Verdict { holds, holds_with_slack, violated };

const char* verdict_name(Verdict v);

// Evaluated bound: empirical left side with its standard error against a
// formula right side. The verdict is `violated` only when lhs - 3*se > rhs.
struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double lhs_se = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
    Verdict verdict = Verdict::holds;
    std::map<std::string, double> params;
};

BoundReport make_report(std::string name, double lhs, double lhs_se, double rhs,
                        std::map<std::string, double> params = {});

// d(r0) / (eta(r0/2) * EC): the kappa-free right side of the fixed-radius
// concentration bound. Throws when eta_half is zero (no mass at scale r0/2).
double prop_fixed_rhs(std::size_t d_r0, double eta_half, double ec);

// var(C/EC-hat) <= c*/EC-hat.
BoundReport growth_var_check(const CoverStats& stats, double c_star);

// 1/lambda <= EC-hat <= 1/lambda + Delta/v, statistically; also records the
// kappa1-free ratio Delta / EC-hat^2.
BoundReport ec_diameter_check(const CoverStats& stats, double delta, double lambda,
                              double v);

// exp(1 - t/(e*EC)) clamped to [0,1].
double tail_envelope(double ec, double t);

// min over the grid of a + e*(e + log cov(a * c_star)); a grid minimum, with
// no claim of optimality off-grid.
double ec_over_cstar_upper(double c_star,
                           const std::function<std::size_t(double)>& cov_fn,
                           const std::vector<double>& a_grid);

struct MinMuUpper {
    double r_star = 0.0;
    double bound = 0.0;
    std::size_t cov_at_r_star = 0;
};

// min over the grid of r + cov(r)*(1 + log cov(r)).
MinMuUpper min_mu_upper(const Space& space, const std::vector<double>& r_grid);

// min { r : cov(3r) <= 9r }, resolved by bisection on the monotone predicate
// to resolution 1e-6 * diameter.
double min_mu_lower(const Space& space);

// n * H_n by compensated summation.
double coupon_mean(std::size_t n);

// Exact variance of the discrete coupon collector count: sum (1-p_k)/p_k^2,
// p_k = k/n.
double coupon_count_variance(std::size_t n);

}  // namespace coverlab
