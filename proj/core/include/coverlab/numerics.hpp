#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace coverlab {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RootFindError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Neumaier compensated summation.
double compensated_sum(std::span<const double> values);

// Fixed-reduction-tree pairwise sum; result depends only on element order,
// never on thread scheduling.
double pairwise_sum(std::span<const double> values);

// Adaptive Simpson on [a, b] to relative tolerance rel_tol (with a small
// absolute floor so integrals near zero terminate). Throws QuadratureError
// if the recursion fails to converge.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth = 52);

// Root of f on a bracketing interval [lo, hi] (f(lo), f(hi) of opposite sign),
// Newton iteration guarded by bisection. `residual_tol` is an absolute
// tolerance on |f(x)|.
double newton_bisect(const std::function<double(double)>& f,
                     const std::function<double(double)>& fprime, double lo,
                     double hi, double x0, double residual_tol,
                     int max_iter = 200);

// Nondecreasing piecewise-linear function on [0, inf) given by knots
// (x_i, y_i) with x nondecreasing. Repeated x encodes a jump (left/right
// values). Constant extrapolation beyond the last knot. Supports exact
// evaluation and the exact running integral from 0, which is what the growth
// model's single-point tail needs.
class PiecewiseLinear {
  public:
    PiecewiseLinear() = default;
    explicit PiecewiseLinear(std::vector<double> xs, std::vector<double> ys);

    double eval(double x) const;
    double integral(double t) const;  // \int_0^t eval(u) du
    double last_x() const { return xs_.empty() ? 0.0 : xs_.back(); }
    double last_y() const { return ys_.empty() ? 0.0 : ys_.back(); }

    // Pointwise convex combination wa*a + wb*b on the merged knot set.
    static PiecewiseLinear combine(const PiecewiseLinear& a, const PiecewiseLinear& b,
                                   double wa, double wb);

  private:
    double eval_side(double x, bool right) const;

    std::vector<double> xs_, ys_;
    std::vector<double> cum_;  // integral from 0 to xs_[i]
};

}  // namespace coverlab
