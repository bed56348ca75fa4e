#include "coverlab/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace coverlab {

double compensated_sum(std::span<const double> values) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

namespace {

double simpson_rule(double fa, double fm, double fb, double h) {
    return (h / 6.0) * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double eps,
                   int depth) {
    if (depth <= 0) throw QuadratureError("adaptive Simpson: max depth reached");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_rule(fa, flm, fm, m - a);
    const double right = simpson_rule(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth) {
    if (!(b >= a)) throw QuadratureError("adaptive Simpson: inverted interval");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson_rule(fa, fm, fb, b - a);
    // Two-stage tolerance: a coarse first estimate sets the absolute budget.
    const double eps = std::max(std::abs(whole) * rel_tol, 1e-300);
    double result = simpson_rec(f, a, b, fa, fm, fb, whole, eps, max_depth);
    if (!std::isfinite(result)) throw QuadratureError("adaptive Simpson: non-finite result");
    return result;
}

double newton_bisect(const std::function<double(double)>& f,
                     const std::function<double(double)>& fprime, double lo,
                     double hi, double x0, double residual_tol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw RootFindError("newton_bisect: interval does not bracket a root");
    double x = std::clamp(x0, lo, hi);
    for (int it = 0; it < max_iter; ++it) {
        double fx = f(x);
        if (std::abs(fx) <= residual_tol) return x;
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        double dfx = fprime(x);
        double step_x = (dfx != 0.0) ? x - fx / dfx : lo - 1.0;
        if (step_x <= lo || step_x >= hi || !std::isfinite(step_x))
            step_x = 0.5 * (lo + hi);  // bisection fallback keeps the bracket
        x = step_x;
    }
    throw RootFindError("newton_bisect: no convergence");
}

PiecewiseLinear::PiecewiseLinear(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.empty())
        throw std::invalid_argument("PiecewiseLinear: bad knot arrays");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (xs_[i] < xs_[i - 1])
            throw std::invalid_argument("PiecewiseLinear: knots not sorted");
    cum_.resize(xs_.size(), 0.0);
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        const double w = xs_[i] - xs_[i - 1];
        cum_[i] = cum_[i - 1] + 0.5 * (ys_[i] + ys_[i - 1]) * w;
    }
}

double PiecewiseLinear::eval(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    const double x0 = xs_[i - 1], x1 = xs_[i];
    if (x1 == x0) return ys_[i];
    const double f = (x - x0) / (x1 - x0);
    return ys_[i - 1] + f * (ys_[i] - ys_[i - 1]);
}

double PiecewiseLinear::integral(double t) const {
    if (t <= 0.0) return 0.0;
    if (t <= xs_.front()) return ys_.front() * t;  // constant before the first knot
    if (t >= xs_.back())
        return cum_.back() + ys_.front() * xs_.front() + ys_.back() * (t - xs_.back());
    auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    const double x0 = xs_[i - 1];
    const double y_at_t = eval(t);
    return ys_.front() * xs_.front() + cum_[i - 1] +
           0.5 * (ys_[i - 1] + y_at_t) * (t - x0);
}

double PiecewiseLinear::eval_side(double x, bool right) const {
    if (right) return eval(x);
    if (x <= xs_.front()) return ys_.front();
    if (x > xs_.back()) return ys_.back();
    auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    if (xs_[i] == x) return ys_[i];  // first copy at x carries the left value
    const double x0 = xs_[i - 1], x1 = xs_[i];
    const double f = (x - x0) / (x1 - x0);
    return ys_[i - 1] + f * (ys_[i] - ys_[i - 1]);
}

PiecewiseLinear PiecewiseLinear::combine(const PiecewiseLinear& a,
                                         const PiecewiseLinear& b, double wa,
                                         double wb) {
    std::vector<double> knots;
    knots.reserve(a.xs_.size() + b.xs_.size());
    knots.insert(knots.end(), a.xs_.begin(), a.xs_.end());
    knots.insert(knots.end(), b.xs_.begin(), b.xs_.end());
    std::sort(knots.begin(), knots.end());
    // Keep at most two copies of each x so jumps survive the merge.
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (i >= 2 && knots[i] == knots[i - 1] && knots[i] == knots[i - 2]) continue;
        xs.push_back(knots[i]);
    }
    ys.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        // For duplicated x the first copy takes left limits, the second right.
        const bool right_copy = (i + 1 < xs.size() && xs[i + 1] == xs[i]) ? false : true;
        const double x = xs[i];
        double ya, yb;
        if (right_copy) {
            ya = a.eval_side(x, true);
            yb = b.eval_side(x, true);
        } else {
            ya = a.eval_side(x, false);
            yb = b.eval_side(x, false);
        }
        ys.push_back(wa * ya + wb * yb);
    }
    return PiecewiseLinear(std::move(xs), std::move(ys));
}

}  // namespace coverlab
