#include "sampler/basis.hpp"

#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace sampler;
using Catch::Approx;

namespace {
double uniform(std::mt19937_64& g, double a, double b) {
    return a + (b - a) * ((g() >> 11) * 0x1.0p-53);
}
}  // namespace

TEST_CASE("cubic B-spline basis on [0,4] has 7 elements", "[basis]") {
    Basis b = build_interval_basis(gp_mask(3, 3.0), 0, BoxDomain::interval(0, 4));
    CHECK(b.size() == 7);
    // span{B(x+3-i): i=0..6}: shifts -3..3
    CHECK(b.axis(0).shifts.front() == -3);
    CHECK(b.axis(0).shifts.back() == 3);
}

TEST_CASE("quadratic B-spline basis on [0,3] has 5 elements", "[basis]") {
    Basis b = build_interval_basis(gp_mask(2, 2.0), 0, BoxDomain::interval(0, 3));
    CHECK(b.size() == 5);
}

TEST_CASE("element counts follow 2^j(b-a) + n", "[basis]") {
    for (int n : {2, 3, 5}) {
        for (int j : {0, 1, 3, 5}) {
            Basis b = build_interval_basis(gp_mask(n, static_cast<double>(n)), j,
                                           BoxDomain::interval(0, 1));
            INFO("n=" << n << " j=" << j);
            CHECK(b.size() == (1 << j) + n);
        }
    }
}

TEST_CASE("incompatible domains are rejected", "[basis]") {
    CHECK_THROWS_AS(build_interval_basis(gp_mask(3, 3.0), 1, BoxDomain::interval(0, 0.3)),
                    std::invalid_argument);
}

TEST_CASE("partition of unity at 1000 random points", "[basis]") {
    Basis b = build_interval_basis(gp_mask(3, 4.0), 2, BoxDomain::interval(0, 2));
    std::mt19937_64 g{42};
    double nf = b.normalization();
    for (int t = 0; t < 1000; ++t) {
        double x = uniform(g, 0.0, 2.0);
        CHECK(b.partition_sum(x) / nf == Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("tensor basis: 25 elements and 2-D partition of unity", "[basis]") {
    Basis bx = build_interval_basis(gp_mask(2, 2.0), 0, BoxDomain::interval(0, 3));
    Basis b2 = tensor_basis(bx, bx);
    CHECK(b2.size() == 25);
    std::mt19937_64 g{7};
    double nf = b2.normalization();
    for (int t = 0; t < 300; ++t) {
        double x = uniform(g, 0.0, 3.0), y = uniform(g, 0.0, 3.0);
        CHECK(b2.partition_sum(x, y) / nf == Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("support diameters obey C 2^-j with C = n+1 per axis", "[basis]") {
    for (int j : {0, 2, 4}) {
        Basis b = build_interval_basis(gp_mask(3, 5.0), j, BoxDomain::interval(0, 2));
        for (int k = 0; k < b.size(); ++k) {
            auto s = b.support(k);
            CHECK(s.length(0) <= 4.0 * std::exp2(-j) + 1e-12);
        }
    }
}

TEST_CASE("overlap count bounded by (2n+1)^d", "[basis]") {
    int n = 3;
    Basis b = build_interval_basis(gp_mask(n, 3.0), 3, BoxDomain::interval(0, 2));
    for (int k = 0; k < b.size(); ++k) {
        auto sk = b.support(k);
        int overlaps = 0;
        for (int h = 0; h < b.size(); ++h) {
            if (h == k) continue;
            auto sh = b.support(h);
            if (std::min(sk.hi[0], sh.hi[0]) > std::max(sk.lo[0], sh.lo[0])) ++overlaps;
        }
        CHECK(overlaps <= 2 * n + 1);
    }
}

TEST_CASE("gradient bound || grad phi_jk || <= C 2^{j(d/2+1)}", "[basis]") {
    // measure C at j=0, verify for j=1..4
    auto max_grad = [](const Basis& b) {
        double worst = 0;
        for (int k = 0; k < b.size(); ++k) {
            auto s = b.support(k);
            int probes = 600;
            for (int i = 1; i < probes; ++i) {
                double x = s.lo[0] + (s.length(0) * i) / probes;
                double h = 1e-6;
                double d = (b.evaluate(k, x + h) - b.evaluate(k, x - h)) / (2 * h);
                worst = std::max(worst, std::abs(d));
            }
        }
        return worst;
    };
    Basis b0 = build_interval_basis(gp_mask(3, 3.0), 0, BoxDomain::interval(0, 2));
    double c0 = max_grad(b0);
    for (int j = 1; j <= 4; ++j) {
        Basis bj = build_interval_basis(gp_mask(3, 3.0), j, BoxDomain::interval(0, 2));
        double bound = c0 * std::exp2(j * 1.5) * 1.02;  // d=1: 2^{j(1/2+1)}
        INFO("j=" << j);
        CHECK(max_grad(bj) <= bound);
    }
}

TEST_CASE("refinability: Phi_{j-1} = A_j Phi_j on a dyadic grid", "[basis]") {
    Mask m = gp_mask(3, 4.0);
    Basis coarse = build_interval_basis(m, 2, BoxDomain::interval(0, 1));
    Basis fine = build_interval_basis(m, 3, BoxDomain::interval(0, 1));
    // phi_{j-1,k} = 2^{-1/2} sum_t a_t phi_{j, 2k+t}
    double worst = 0;
    int fine_first = fine.axis(0).shifts.front();
    for (int i = 0; i < coarse.size(); ++i) {
        int k = coarse.axis(0).shifts[i];
        for (int p = 0; p <= 256; ++p) {
            double x = p / 256.0;
            double lhs = coarse.evaluate(i, x);
            double rhs = 0;
            for (int t = 0; t < m.size(); ++t) {
                int kf = 2 * k + m.offset + t;
                int idx = kf - fine_first;
                if (idx >= 0 && idx < fine.size()) rhs += m.coeffs[t] * fine.evaluate(idx, x);
            }
            worst = std::max(worst, std::abs(lhs - rhs / std::sqrt(2.0)));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("polynomials up to n-3 are reproduced on the interior", "[basis]") {
    // GP containment P_{n-3} in V^{(n,h)}: least-squares fit of monomials on
    // interior points leaves a tiny residual
    int n = 5;
    for (double h : {4.1, 5.0, 7.0}) {
        Basis b = build_interval_basis(gp_mask(n, h), 3, BoxDomain::interval(0, 1));
        int rows = 400;
        Eigen::MatrixXd A(rows, b.size());
        for (int p = 0; p <= n - 3; ++p) {
            Eigen::VectorXd rhs(rows);
            for (int i = 0; i < rows; ++i) {
                double x = 0.25 + 0.5 * i / (rows - 1.0);  // interior of (0,1)
                for (int k = 0; k < b.size(); ++k) A(i, k) = b.evaluate(k, x);
                rhs(i) = std::pow(x, p);
            }
            Eigen::VectorXd c = A.colPivHouseholderQr().solve(rhs);
            double resid = (A * c - rhs).lpNorm<Eigen::Infinity>();
            INFO("h=" << h << " degree=" << p);
            CHECK(resid <= 1e-8);
        }
    }
}
