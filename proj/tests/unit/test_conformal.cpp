#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rwos/conformal.hpp"
#include "test_support.hpp"

using namespace rwos;
using namespace rwos::testing;

namespace {

/// Exact field on a grid: every node is interior.
FieldGrid analytic_grid(std::size_t nx, std::size_t ny, double (*f)(Point2)) {
    FieldGrid g = FieldGrid::make(Box2{{0, 0}, {1, 1}}, nx, ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = g.index(i, j);
            g.mask[k] = 1;
            g.u[k] = f(g.node(i, j));
        }
    return g;
}

}  // namespace

TEST(FivePoint, ExactOnQuartics) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::array<double, 5> c;
        for (double& x : c) x = U(gen);
        const double x0 = U(gen), delta = 0.05 + 0.2 * std::abs(U(gen));
        auto p = [&](double x) { return c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4]))); };
        const double exact = c[1] + x0 * (2 * c[2] + x0 * (3 * c[3] + x0 * 4 * c[4]));
        const double fd = five_point_partial(
            std::array<double, 4>{p(x0 - 2 * delta), p(x0 - delta), p(x0 + delta), p(x0 + 2 * delta)}, delta);
        double scale = 0.0;
        for (int k = 1; k < 5; ++k) scale += k * std::abs(c[std::size_t(k)]) * std::pow(std::abs(x0) + 2 * delta, k - 1);
        EXPECT_LE(std::abs(fd - exact), 1e-12 * std::max(1.0, scale)) << trial;
    }
}

TEST(FivePoint, FourthOrderConvergence) {
    auto err = [](double delta) {
        const double x0 = 0.3;
        auto f = [](double x) { return std::exp(x) * std::sin(2 * x); };
        const double exact = std::exp(x0) * (std::sin(2 * x0) + 2 * std::cos(2 * x0));
        return std::abs(five_point_partial(
                            std::array<double, 4>{f(x0 - 2 * delta), f(x0 - delta), f(x0 + delta), f(x0 + 2 * delta)},
                            delta) -
                        exact);
    };
    for (double delta : {0.2, 0.1, 0.05}) EXPECT_NEAR(err(delta) / err(delta / 2), 16.0, 0.2 * 16.0) << delta;
}

TEST(FivePoint, UncertaintyPropagation) {
    std::array<Estimate, 4> v{};
    for (auto& e : v) e.std_error = 0.01;
    const Derivative d = five_point_partial(v, 0.5);
    EXPECT_NEAR(d.std_error, 0.01 * std::sqrt(130.0) / 6.0, 1e-15);
    EXPECT_THROW(five_point_partial(v, 0.0), ConfigError);
}

TEST(EvalPoint, SymmetricDomainsUseTheCenter) {
    const Point2 r = default_eval_point(shapes::rectangle(1.0));
    EXPECT_NEAR(r.x, 0.5, 1e-12);
    EXPECT_NEAR(r.y, 0.5, 1e-12);
    const Point2 s = default_eval_point(shapes::rectangle(0.6));
    EXPECT_NEAR(s.y, 0.3, 1e-12);
    for (const auto& [name, d] : planar_domains()) {
        const Point2 p = default_eval_point(d);
        EXPECT_TRUE(contains(d, p)) << name;
        EXPECT_GT(boundary_distance(d, p), 0.05 * d.diameter()) << name;
    }
}

TEST(Modulus, RectangleIsUnbiased) {
    for (double h : {0.6, 1.4}) {
        const Quadrilateral q(shapes::rectangle(h));
        ModulusConfig cfg;
        cfg.n_paths = 40000;
        cfg.seed = 4;
        const ModulusResult r = estimate_modulus(q, cfg);
        EXPECT_NEAR(r.h, h, 4 * r.std_error) << h;
        EXPECT_LT(r.consistency, 4 * r.consistency_stderr + 1e-12) << h;
        EXPECT_EQ(r.resampled, 0u);
        EXPECT_NEAR(r.delta, kDefaultDeltaFraction * std::min(0.5, h / 2), 1e-12);
    }
}

TEST(Modulus, DeterministicAcrossThreads) {
    const Quadrilateral q(shapes::l_shape());
    ModulusConfig cfg;
    cfg.n_paths = 4096;
    cfg.seed = 8;
    cfg.estimator.threads = 1;
    const ModulusResult a = estimate_modulus(q, cfg);
    cfg.estimator.threads = 3;
    const ModulusResult b = estimate_modulus(q, cfg);
    EXPECT_EQ(a.h, b.h);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.frame_angle, b.frame_angle);
}

TEST(Modulus, RejectsBadStencils) {
    const Quadrilateral q(shapes::rectangle(1.0));
    ModulusConfig cfg;
    cfg.n_paths = 100;
    cfg.delta = 0.3;  // 2 delta exceeds the clearance 0.5
    EXPECT_THROW(estimate_modulus(q, cfg), ConfigError);
    cfg.delta = std::nullopt;
    cfg.eval_point = Point2{1.5, 0.5};
    EXPECT_THROW(estimate_modulus(q, cfg), ConfigError);
    cfg.eval_point = std::nullopt;
    cfg.n_paths = 1;
    EXPECT_THROW(estimate_modulus(q, cfg), ConfigError);
}

TEST(MapGrid, RectangleIsTheIdentity) {
    const Quadrilateral q(shapes::rectangle(1.0));
    ModulusConfig cfg;
    cfg.seed = 2;
    const FieldGrid g = evaluate_map_grid(q, 1.0, 5, 5, 20000, cfg);
    std::size_t interior = 0;
    for (std::size_t j = 0; j < 5; ++j)
        for (std::size_t i = 0; i < 5; ++i) {
            const std::size_t k = g.index(i, j);
            if (!g.mask[k]) continue;
            ++interior;
            EXPECT_NEAR(g.u[k], g.x(i), 4 * g.u_stderr[k] + 1e-12);
            EXPECT_NEAR(g.v[k], g.y(j), 4 * g.v_stderr[k] + 1e-12);
        }
    EXPECT_EQ(interior, 9u);
    EXPECT_THROW(evaluate_map_grid(q, 0.0, 5, 5, 100, cfg), ConfigError);
    EXPECT_THROW(evaluate_map_grid(q, 1.0, 1, 5, 100, cfg), ConfigError);
}

TEST(Contours, LinearFieldGivesStraightLevel) {
    const FieldGrid g = analytic_grid(11, 7, [](Point2 p) { return p.x; });
    const std::vector<double> levels{0.55};
    const auto lc = extract_contours(g, levels);
    ASSERT_EQ(lc.size(), 1u);
    ASSERT_EQ(lc[0].lines.size(), 1u);
    const Polyline& line = lc[0].lines[0];
    EXPECT_EQ(line.size(), 7u);
    for (Point2 p : line) EXPECT_NEAR(p.x, 0.55, 1e-12);
    EXPECT_NEAR(std::min(line.front().y, line.back().y), 0.0, 1e-12);
    EXPECT_NEAR(std::max(line.front().y, line.back().y), 1.0, 1e-12);
}

TEST(Contours, ClosedCircleAndConstantField) {
    const FieldGrid g =
        analytic_grid(41, 41, [](Point2 p) { return (p.x - 0.5) * (p.x - 0.5) + (p.y - 0.5) * (p.y - 0.5); });
    const std::vector<double> levels{0.09};
    const auto lc = extract_contours(g, levels);
    ASSERT_EQ(lc[0].lines.size(), 1u);
    const Polyline& ring = lc[0].lines[0];
    EXPECT_EQ(ring.front(), ring.back());
    for (Point2 p : ring) EXPECT_NEAR(distance(p, {0.5, 0.5}), 0.3, 2e-3);
    const FieldGrid flat = analytic_grid(5, 5, [](Point2) { return 0.25; });
    const std::vector<double> mid{0.5};
    EXPECT_TRUE(extract_contours(flat, mid)[0].lines.empty());
}

TEST(Contours, MaskedCellsAreSkipped) {
    FieldGrid g = analytic_grid(11, 11, [](Point2 p) { return p.x; });
    for (std::size_t i = 0; i < 11; ++i) g.mask[g.index(i, 5)] = 0;
    const std::vector<double> levels{0.55};
    const auto lc = extract_contours(g, levels);
    EXPECT_EQ(lc[0].lines.size(), 2u);
    for (const auto& line : lc[0].lines)
        for (Point2 p : line) EXPECT_TRUE(p.y < 0.45 || p.y > 0.55);
}
