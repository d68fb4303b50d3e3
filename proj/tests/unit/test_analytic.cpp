#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "rwos/analytic.hpp"
#include "rwos/errors.hpp"

using namespace rwos;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

/// Independent oracle: K(k) as the integral of (1 - k^2 sin^2 t)^(-1/2)
/// over [0, pi/2] by the trapezoid rule, which converges geometrically for
/// this smooth periodic integrand.
double quadrature_K(double k) {
    const int n = 4000;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = 0.5 * kPi * i / n;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        sum += w / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t));
    }
    return sum * 0.5 * kPi / n;
}

double quadrature_mu(double r) { return 0.5 * kPi * quadrature_K(std::sqrt(1.0 - r * r)) / quadrature_K(r); }

ArcQuadAngles row(int m, int n, int r) { return {m * kPi / 24, n * kPi / 24, r * kPi / 24}; }

}  // namespace

TEST(CrossRatio, DirectArithmetic) {
    const cd v = cross_ratio({1, 0}, {0, 1}, {-1, 0}, {0, -1});
    EXPECT_NEAR(v.real(), 2.0, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
}

TEST(CrossRatio, RepeatedPointThrows) {
    EXPECT_THROW(cross_ratio({1, 0}, {0, 1}, {-1, 0}, {1, 0}), SpecError);
}

TEST(CrossRatio, MobiusInvariance) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    const cd a{1.3, -0.2}, b{0.4, 0.9}, c{-0.7, 0.5}, d{1.1, 0.3};  // ad - bc != 0
    auto T1 = [](cd z) { return 1.0 / z; };
    auto T2 = [&](cd z) { return (a * z + b) / (c * z + d); };
    for (int trial = 0; trial < 1000; ++trial) {
        std::array<cd, 4> z;
        for (auto& x : z) x = {U(gen), U(gen)};
        const cd w = cross_ratio(z[0], z[1], z[2], z[3]);
        for (int which = 0; which < 2; ++which) {
            std::array<cd, 4> t;
            for (int k = 0; k < 4; ++k) t[k] = which == 0 ? T1(z[k]) : T2(z[k]);
            const cd wt = cross_ratio(t[0], t[1], t[2], t[3]);
            EXPECT_LE(std::abs(wt - w), 1e-12 * std::max(1.0, std::abs(w)));
        }
    }
}

TEST(UnitCircleU, MatchesCrossRatioModulus) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> U(0.01, 2 * kPi - 0.01);
    for (int trial = 0; trial < 10000; ++trial) {
        std::array<double, 3> t{U(gen), U(gen), U(gen)};
        std::sort(t.begin(), t.end());
        if (t[1] - t[0] < 1e-3 || t[2] - t[1] < 1e-3) continue;
        const ArcQuadAngles q{t[0], t[1], t[2]};
        const double u = unit_circle_u(q);
        const double w = std::abs(cross_ratio(1.0, std::polar(1.0, q.c), std::polar(1.0, q.b), std::polar(1.0, q.a)));
        EXPECT_NEAR(u, w, 1e-12 * std::max(1.0, w));
        EXPECT_GT(u, 1.0);
    }
}

TEST(UnitCircleU, ClosedFormOfFirstRow) {
    const double s = std::sin(5 * kPi / 24) / std::sin(kPi / 24);
    EXPECT_NEAR(unit_circle_u(row(2, 10, 12)), s * s, 1e-12);
    EXPECT_NEAR(unit_circle_u(row(2, 10, 12)), 21.7519861577654, 1e-10);
}

TEST(UnitCircleU, SymmetricSpecialization) {
    // b = (a + c)/2 and c - b = a give u = sin^2(b/2) / sin^2(a/2).
    const double a = 0.7, b = 1.4, c = 2.1;
    const double expect = std::pow(std::sin(b / 2) / std::sin(a / 2), 2);
    EXPECT_NEAR(unit_circle_u({a, b, c}), expect, 1e-12);
}

TEST(Angles, InvalidOrderingThrows) {
    EXPECT_THROW(unit_circle_u({1.0, 0.5, 2.0}), SpecError);
    EXPECT_THROW(unit_circle_u({0.0, 0.5, 2.0}), SpecError);
    EXPECT_THROW(unit_circle_u({0.5, 1.0, 7.0}), SpecError);
}

TEST(TypeA, ReferenceRows) {
    const std::array<std::pair<std::array<int, 3>, double>, 5> rows{{
        {{2, 10, 12}, 0.707150}, {{2, 10, 14}, 0.807451}, {{4, 12, 18}, 1.038325},
        {{6, 16, 24}, 1.170060}, {{8, 22, 32}, 1.313262},
    }};
    for (const auto& [t, v] : rows) EXPECT_NEAR(type_a_modulus(row(t[0], t[1], t[2])), v, 1e-5);
}

TEST(TypeB, ReferenceRows) {
    const std::array<std::pair<std::array<int, 3>, double>, 5> rows{{
        {{2, 10, 12}, 0.538971}, {{2, 10, 14}, 0.595343}, {{4, 12, 18}, 0.712162},
        {{6, 16, 24}, 0.771869}, {{8, 22, 32}, 0.831900},
    }};
    for (const auto& [t, v] : rows) EXPECT_NEAR(type_b_modulus(row(t[0], t[1], t[2])), v, 1e-5);
}

TEST(TypeA, DecreasingInU) {
    // Fix a and b, move c toward b: u grows and t with it, so pi / log t falls.
    double prev_u = 0.0, prev_m = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double c = 3.0 - 1.9 * k / 200.0;
        const ArcQuadAngles q{0.3, 1.0, c};
        const double u = unit_circle_u(q), m = type_a_modulus(q);
        if (k > 0) {
            ASSERT_GT(u, prev_u);
            ASSERT_LT(m, prev_m);
        }
        prev_u = u, prev_m = m;
    }
}

TEST(EllipticK, ZeroIsExactlyHalfPi) { EXPECT_EQ(elliptic_K(0.0), kPi / 2); }

TEST(EllipticK, MatchesQuadratureOracle) {
    EXPECT_NEAR(elliptic_K(1.0 / std::sqrt(2.0)), 1.8540746773, 1e-10);
    for (double k : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99})
        EXPECT_NEAR(elliptic_K(k), quadrature_K(k), 1e-12 * quadrature_K(k)) << k;
}

TEST(EllipticK, AgmSymmetry) {
    for (double k : {0.2, 0.6, 0.95}) {
        const double kp = std::sqrt(1.0 - k * k);
        EXPECT_NEAR(0.5 * kPi / agm(1.0, kp), 0.5 * kPi / agm(kp, 1.0), 1e-14);
    }
}

TEST(EllipticK, DomainErrors) {
    EXPECT_THROW(elliptic_K(1.0), NumericError);
    EXPECT_THROW(elliptic_K(-0.1), NumericError);
}

TEST(Grotzsch, SelfDualPoint) { EXPECT_NEAR(grotzsch_mu(1.0 / std::sqrt(2.0)), kPi / 2, 1e-10); }

TEST(Grotzsch, FunctionalIdentity) {
    // mu(r) mu(r') = pi^2 / 4 with r' = sqrt(1 - r^2), checked with the oracle.
    for (double r : {0.1, 0.4, 0.8}) {
        const double rp = std::sqrt(1.0 - r * r);
        EXPECT_NEAR(quadrature_mu(r) * quadrature_mu(rp), kPi * kPi / 4, 1e-10);
        EXPECT_NEAR(grotzsch_mu(r), quadrature_mu(r), 1e-10);
    }
}

TEST(Grotzsch, MonotoneAndLogarithmicNearZero) {
    EXPECT_LT(grotzsch_mu(0.9), grotzsch_mu(0.1));
    EXPECT_GT(grotzsch_mu(1e-6), 10.0);
    // mu(r) = log(4/r) + O(r^2 log r).
    EXPECT_NEAR(grotzsch_mu(1e-6), std::log(4e6), 1e-9);
    EXPECT_THROW(grotzsch_mu(0.0), NumericError);
    EXPECT_THROW(grotzsch_mu(1.0), NumericError);
}

TEST(Rectangle, ModulusIsHeight) {
    EXPECT_EQ(rectangle_modulus(0.6), 0.6);
    EXPECT_EQ(rectangle_modulus(1.0), 1.0);
    EXPECT_EQ(rectangle_modulus(1.4), 1.4);
    EXPECT_THROW(rectangle_modulus(0.0), SpecError);
}
