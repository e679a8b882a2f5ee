#include "sampler/cascade.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace sampler;
using Catch::Approx;

TEST_CASE("Haar mask cascades to the box function", "[cascade]") {
    Mask haar = make_mask({Rational(1), Rational(1)}, 0);
    DyadicFunction f = cascade_evaluate(haar, 4);
    REQUIRE(f.values.size() == 17);
    for (int i = 0; i < 16; ++i) CHECK(f.values[i] == 1.0);
    CHECK(f.values[16] == 0.0);
    CHECK(evaluate_at(f, 0.3) == 1.0);
    CHECK(evaluate_at(f, -0.1) == 0.0);
    CHECK(evaluate_at(f, 1.0) == 0.0);
}

TEST_CASE("quadratic B-spline values from the cascade", "[cascade]") {
    DyadicFunction f = cascade_evaluate(gp_mask(2, 2.0), 8);
    CHECK(f.value_at(1.0) == Approx(0.5).margin(1e-12));
    CHECK(f.value_at(0.5) == Approx(0.125).margin(1e-12));
    // full grid against the closed-form piecewise polynomial
    for (int i = 0; i < f.grid_size(); ++i) {
        double x = f.s0 + i * f.grid_step();
        REQUIRE(f.values[i] == Approx(oracles::bspline(2, x)).margin(1e-12));
    }
}

TEST_CASE("B-spline agreement at L=10 for h=n", "[cascade]") {
    for (int n : {2, 3, 4, 5}) {
        DyadicFunction f = cascade_evaluate(gp_mask(n, static_cast<double>(n)), 10);
        double worst = 0;
        for (int i = 0; i < f.grid_size(); ++i) {
            double x = f.s0 + i * f.grid_step();
            worst = std::max(worst, std::abs(f.values[i] - oracles::bspline(n, x)));
        }
        INFO("n=" << n);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("evaluate_at matches the closed form at a grid point", "[cascade]") {
    DyadicFunction f = cascade_evaluate(gp_mask(2, 2.0), 10);
    CHECK(std::abs(evaluate_at(f, 1.0) - oracles::bspline(2, 1.0)) < 1e-8);
}

TEST_CASE("gp(3,4) cascade: nonnegative, supported on [0,4], partition of unity", "[cascade]") {
    DyadicFunction f = cascade_evaluate(gp_mask(3, 4.0), 8);
    CHECK(f.s0 == 0);
    CHECK(f.s1 == 4);
    for (double v : f.values) CHECK(v >= -1e-13);
    // sum of integer translates over dyadic points with full stencil coverage
    double worst = 0;
    int per_unit = 1 << f.level;
    for (int i = 0; i < per_unit; ++i) {
        double x = static_cast<double>(i) / per_unit;
        double s = 0;
        for (int k = -4; k <= 4; ++k) s += f.value_at(x - k);
        worst = std::max(worst, std::abs(s - 1.0));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("refinement consistency across cascade levels", "[cascade]") {
    for (auto [n, h] : {std::pair{3, 3.0}, {3, 4.0}, {5, 4.1}}) {
        DyadicFunction fine = cascade_evaluate(gp_mask(n, h), 7);
        DyadicFunction coarse = cascade_evaluate(gp_mask(n, h), 6);
        double worst = 0;
        for (int i = 0; i < coarse.grid_size(); ++i)
            worst = std::max(worst, std::abs(coarse.values[i] - fine.values[2 * i]));
        INFO("n=" << n << " h=" << h);
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("positivity of the GP class across parameters", "[cascade]") {
    for (auto [n, h] : {std::pair{2, 1.4}, {3, 2.5}, {4, 8.0}, {6, 5.25}}) {
        DyadicFunction f = cascade_evaluate(gp_mask(n, h), 7);
        for (double v : f.values) {
            INFO("n=" << n << " h=" << h);
            REQUIRE(v >= -1e-12);
        }
    }
}

TEST_CASE("degenerate masks are reported", "[cascade]") {
    // two-tap masks other than Haar have no L1-normalizable solution here
    CHECK_THROWS_AS(cascade_evaluate(make_mask({Rational(3, 2), Rational(1, 2)}, 0), 4),
                    DegenerateMaskError);
    // transfer matrix without eigenvalue 1
    CHECK_THROWS_AS(cascade_evaluate(make_mask({Rational(3), Rational(-2), Rational(1)}, 0), 4),
                    DegenerateMaskError);
}

TEST_CASE("value_smooth is exact inside polynomial pieces", "[cascade]") {
    DyadicFunction f = cascade_evaluate(gp_mask(3, 3.0), 10);
    // points well inside knot intervals: 4-point stencil stays in one cubic piece
    for (double x : {0.3141, 1.2718, 2.5772, 3.71828}) {
        CHECK(f.value_smooth(x) == Approx(oracles::bspline(3, x)).margin(1e-12));
    }
    // constants are reproduced by the interpolation weights
    DyadicFunction c;
    c.level = 3;
    c.s0 = 0;
    c.s1 = 2;
    c.values.assign(17, 0.75);
    for (double x : {0.01, 0.5, 1.97}) CHECK(c.value_smooth(x) == Approx(0.75).margin(1e-15));
}
