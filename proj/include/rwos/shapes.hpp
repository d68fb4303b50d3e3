#pragma once
/**
 * @file shapes.hpp
 * @brief Builders for the standard test quadrilaterals: rectangles, the
 * L-shaped region, circular-arc quadrilaterals of Type A and Type B, and a
 * few auxiliary planar problems.
 */

#include <cmath>
#include <numbers>
#include <vector>

#include "rwos/domain.hpp"
#include "rwos/errors.hpp"
#include "rwos/geometry2d.hpp"

namespace rwos::shapes {

/// Rectangle (0,1) x (0,h) as Q = (1+ih, ih, 0, 1): u = x, modulus h.
inline DomainSpec2D rectangle(double h) {
    if (!(h > 0.0)) throw SpecError("rectangle height must be positive");
    return DomainSpec2D::labeled({
        {Segment{{0, 0}, {1, 0}}, 3},
        {Segment{{1, 0}, {1, h}}, 4},
        {Segment{{1, h}, {0, h}}, 1},
        {Segment{{0, h}, {0, 0}}, 2},
    });
}

/// Vertices of the L-shaped region used in the examples.
inline constexpr Point2 kL1{0, 0}, kL2{3, 0}, kL3{3, 1}, kL4{2, 1}, kL5{2, 2}, kL6{0, 2};

/// L-shaped region labeled Q = (z2, z4, z6, z1); modulus 1.508154.
inline DomainSpec2D l_shape() {
    return DomainSpec2D::labeled({
        {Segment{kL1, kL2}, 4},
        {Segment{kL2, kL3}, 1},
        {Segment{kL3, kL4}, 1},
        {Segment{kL4, kL5}, 2},
        {Segment{kL5, kL6}, 2},
        {Segment{kL6, kL1}, 3},
    });
}

/// Same region labeled Q = (z1, z2, z4, z6); modulus 0.663062.
inline DomainSpec2D l_shape_conjugate_labeling() {
    return DomainSpec2D::labeled({
        {Segment{kL1, kL2}, 1},
        {Segment{kL2, kL3}, 2},
        {Segment{kL3, kL4}, 2},
        {Segment{kL4, kL5}, 3},
        {Segment{kL5, kL6}, 3},
        {Segment{kL6, kL1}, 4},
    });
}

/// Unit-circle arc from angle `from` counterclockwise to angle `to`.
inline Arc unit_arc(double from, double to) { return Arc{{0, 0}, 1.0, from, to, true}; }

/// Arc of the circle orthogonal to the unit circle through e^{i alpha} and
/// e^{i beta} (0 < beta - alpha < pi), the part inside the unit disk,
/// traversed from e^{i alpha} to e^{i beta} with the disk side on its left.
inline Arc orthogonal_arc(double alpha, double beta) {
    const double half = 0.5 * (beta - alpha);
    if (!(half > 0.0 && half < 0.5 * std::numbers::pi))
        throw SpecError("orthogonal arc needs 0 < beta - alpha < pi");
    const double mid = 0.5 * (alpha + beta);
    Arc a;
    a.center = Point2{std::cos(mid), std::sin(mid)} / std::cos(half);
    a.radius = std::tan(half);
    const Point2 p0{std::cos(alpha), std::sin(alpha)}, p1{std::cos(beta), std::sin(beta)};
    a.angle_start = std::atan2(p0.y - a.center.y, p0.x - a.center.x);
    a.angle_end = std::atan2(p1.y - a.center.y, p1.x - a.center.x);
    a.ccw = false;  // the disk side lies outside this circle
    return a;
}

namespace detail {
inline void check_angles(double a, double b, double c) {
    if (!(0.0 < a && a < b && b < c && c < 2.0 * std::numbers::pi))
        throw SpecError("angles must satisfy 0 < a < b < c < 2pi");
}
}  // namespace detail

/// Type A: unit disk minus the caps cut off by the orthogonal arcs
/// [1, e^{ia}] and [e^{ib}, e^{ic}]; Q = (e^{ia}, e^{ib}, e^{ic}, 1).
inline DomainSpec2D type_a(double a, double b, double c) {
    detail::check_angles(a, b, c);
    return DomainSpec2D::labeled({
        {orthogonal_arc(0.0, a), 4},
        {unit_arc(a, b), 1},
        {orthogonal_arc(b, c), 2},
        {unit_arc(c, 2.0 * std::numbers::pi), 3},
    });
}

/// Type B: the unit disk with Q = (e^{ia}, e^{ib}, e^{ic}, 1).
inline DomainSpec2D type_b(double a, double b, double c) {
    detail::check_angles(a, b, c);
    return DomainSpec2D::labeled({
        {unit_arc(0.0, a), 4},
        {unit_arc(a, b), 1},
        {unit_arc(b, c), 2},
        {unit_arc(c, 2.0 * std::numbers::pi), 3},
    });
}

/// Angles (m, n, r) * pi / 24 as used by the circular-arc tables.
struct Angles24 {
    double a, b, c;
};
inline Angles24 angles24(int m, int n, int r) {
    const double k = std::numbers::pi / 24.0;
    return {m * k, n * k, r * k};
}

/// Unit disk split into four quarter arcs, all Dirichlet: value 1 on the
/// first quarter [0, pi/2], 0 elsewhere. u(0) is the harmonic measure 1/4.
inline DomainSpec2D disk_quarter_indicator() {
    const double q = 0.5 * std::numbers::pi;
    std::vector<BoundaryPiece> pieces;
    for (int k = 0; k < 4; ++k)
        pieces.push_back({unit_arc(k * q, (k + 1) * q), BoundaryCondition::dirichlet(k == 0 ? 1.0 : 0.0), 0});
    return DomainSpec2D::general(std::move(pieces));
}

/// Unit square with Neumann left side and Dirichlet elsewhere (value 0).
inline DomainSpec2D square_left_neumann() {
    return DomainSpec2D::general({
        {Segment{{0, 0}, {1, 0}}, BoundaryCondition::dirichlet(0.0), 0},
        {Segment{{1, 0}, {1, 1}}, BoundaryCondition::dirichlet(0.0), 0},
        {Segment{{1, 1}, {0, 1}}, BoundaryCondition::dirichlet(0.0), 0},
        {Segment{{0, 1}, {0, 0}}, BoundaryCondition::neumann(), 0},
    });
}

/// Insulated strip (0,L) x (0,1): u = 1 on x = 0, u = 0 on x = L, so
/// u = 1 - x/L.
inline DomainSpec2D insulated_strip(double length = 4.0) {
    if (!(length > 0.0)) throw SpecError("strip length must be positive");
    return DomainSpec2D::labeled({
        {Segment{{0, 0}, {length, 0}}, 1},
        {Segment{{length, 0}, {length, 1}}, 2},
        {Segment{{length, 1}, {0, 1}}, 3},
        {Segment{{0, 1}, {0, 0}}, 4},
    });
}

/// The L-shaped region with u = 0 on the wall x = 3, u = 1 on the wall
/// y = 2 and insulated elsewhere; the insulated corner (2,1) is re-entrant.
inline DomainSpec2D mixed_l() {
    const auto N = BoundaryCondition::neumann();
    return DomainSpec2D::general({
        {Segment{kL1, kL2}, N, 0},
        {Segment{kL2, kL3}, BoundaryCondition::dirichlet(0.0), 0},
        {Segment{kL3, kL4}, N, 0},
        {Segment{kL4, kL5}, N, 0},
        {Segment{kL5, kL6}, BoundaryCondition::dirichlet(1.0), 0},
        {Segment{kL6, kL1}, N, 0},
    });
}

}  // namespace rwos::shapes
