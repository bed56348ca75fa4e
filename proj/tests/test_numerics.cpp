#include <doctest.h>

#include <cmath>
#include <vector>

#include "coverlab/numerics.hpp"

using namespace coverlab;

TEST_CASE("adaptive simpson hits analytic integrals") {
    CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 3.0, 1e-10) ==
          doctest::Approx(9.0).epsilon(1e-9));
    CHECK(adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 40.0, 1e-10) ==
          doctest::Approx(1.0).epsilon(1e-9));
    // Gaussian integral: int_0^inf e^{-t^2/L} dt = sqrt(pi L)/2 up to the cutoff.
    const double L = 100.0;
    const double got =
        adaptive_simpson([&](double t) { return std::exp(-t * t / L); }, 0.0, 60.0, 1e-10);
    CHECK(got == doctest::Approx(0.5 * std::sqrt(M_PI * L)).epsilon(1e-9));
}

TEST_CASE("adaptive simpson handles kinks") {
    const double got = adaptive_simpson(
        [](double x) { return std::min(x, 1.0); }, 0.0, 2.0, 1e-10);
    CHECK(got == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("newton_bisect finds bracketed roots") {
    const double r = newton_bisect([](double x) { return x * x - 2.0; },
                                   [](double x) { return 2.0 * x; }, 0.0, 2.0, 1.0, 1e-14);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(newton_bisect([](double x) { return x * x + 1.0; },
                                  [](double x) { return 2.0 * x; }, 0.0, 1.0, 0.5, 1e-12),
                    RootFindError);
}

TEST_CASE("piecewise linear eval and integral") {
    // Ramp 0 -> 1 on [0, 2], then constant 1.
    PiecewiseLinear f({0.0, 2.0}, {0.0, 1.0});
    CHECK(f.eval(1.0) == doctest::Approx(0.5));
    CHECK(f.eval(5.0) == doctest::Approx(1.0));
    CHECK(f.integral(2.0) == doctest::Approx(1.0));
    CHECK(f.integral(4.0) == doctest::Approx(3.0));
    CHECK(f.integral(1.0) == doctest::Approx(0.25));
}

TEST_CASE("piecewise linear jumps (step profiles)") {
    // Step: 0 on [0,1), 0.25 on [1,3), 1.0 from 3 on.
    PiecewiseLinear f({0.0, 1.0, 1.0, 3.0, 3.0}, {0.0, 0.0, 0.25, 0.25, 1.0});
    CHECK(f.eval(0.5) == doctest::Approx(0.0));
    CHECK(f.eval(1.0) == doctest::Approx(0.25));  // right-continuous
    CHECK(f.eval(2.0) == doctest::Approx(0.25));
    CHECK(f.eval(3.0) == doctest::Approx(1.0));
    CHECK(f.integral(2.0) == doctest::Approx(0.25));
    CHECK(f.integral(4.0) == doctest::Approx(0.25 * 2 + 1.0));
}

TEST_CASE("piecewise linear combine") {
    PiecewiseLinear a({0.0, 2.0}, {0.0, 1.0});
    PiecewiseLinear b({0.0, 1.0, 1.0}, {0.0, 0.0, 1.0});
    PiecewiseLinear c = PiecewiseLinear::combine(a, b, 0.5, 0.5);
    CHECK(c.eval(0.5) == doctest::Approx(0.5 * 0.25));
    CHECK(c.eval(1.0) == doctest::Approx(0.5 * 0.5 + 0.5 * 1.0));
    CHECK(c.eval(3.0) == doctest::Approx(1.0));
    // Integral splits linearly.
    CHECK(c.integral(2.0) ==
          doctest::Approx(0.5 * a.integral(2.0) + 0.5 * b.integral(2.0)));
}

TEST_CASE("compensated and pairwise sums") {
    std::vector<double> v;
    for (int i = 0; i < 1000; ++i) v.push_back(0.1);
    CHECK(compensated_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-12));
}
