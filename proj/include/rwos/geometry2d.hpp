#pragma once
/**
 * @file geometry2d.hpp
 * @brief Planar primitives used by the walker: points, segments, circular
 * arcs, exact distances and nearest points.
 *
 * Arcs are stored by center, radius and the two end angles plus an
 * orientation flag. The signed sweep is derived from those: for a
 * counterclockwise arc it lies in (0, 2pi], for a clockwise arc in [-2pi, 0).
 * Equal start and end angles denote a full circle.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <variant>
#include <vector>

namespace rwos {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    constexpr Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    constexpr Point2 operator-() const { return {-x, -y}; }
    constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Point2 operator*(double s, Point2 p) { return {p.x * s, p.y * s}; }
    constexpr Point2 operator/(double s) const { return {x / s, y / s}; }
    constexpr bool operator==(const Point2&) const = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm2(Point2 a) { return dot(a, a); }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Signed area of the triangle (a, b, c) times two; positive when counterclockwise.
constexpr double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

struct Segment {
    Point2 start;
    Point2 end;
    bool operator==(const Segment&) const = default;
};

struct Arc {
    Point2 center;
    double radius = 1.0;
    double angle_start = 0.0;
    double angle_end = 0.0;
    bool ccw = true;
    bool operator==(const Arc&) const = default;

    /// Signed sweep: (0, 2pi] when ccw, [-2pi, 0) otherwise.
    double sweep() const {
        double s = std::fmod(angle_end - angle_start, kTwoPi);
        if (ccw) {
            if (s <= 0.0) s += kTwoPi;
        } else {
            if (s >= 0.0) s -= kTwoPi;
        }
        return s;
    }
    bool full_circle() const { return std::abs(sweep()) >= kTwoPi * (1.0 - 1e-15); }
    Point2 point_at(double angle) const {
        return {center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)};
    }
    Point2 start_point() const { return point_at(angle_start); }
    Point2 end_point() const { return point_at(angle_start + sweep()); }
    Point2 mid_point() const { return point_at(angle_start + 0.5 * sweep()); }
};

using Piece = std::variant<Segment, Arc>;

inline Point2 start_point(const Piece& piece) {
    return std::visit([](const auto& g) {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Segment>) return g.start;
        else return g.start_point();
    }, piece);
}

inline Point2 end_point(const Piece& piece) {
    return std::visit([](const auto& g) {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Segment>) return g.end;
        else return g.end_point();
    }, piece);
}

inline Point2 mid_point(const Piece& piece) {
    return std::visit([](const auto& g) {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Segment>)
            return (g.start + g.end) * 0.5;
        else return g.mid_point();
    }, piece);
}

/// Point at parameter t in [0, 1] along the piece (arc-length uniform).
inline Point2 point_along(const Piece& piece, double t) {
    return std::visit([t](const auto& g) {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Segment>)
            return g.start + (g.end - g.start) * t;
        else return g.point_at(g.angle_start + t * g.sweep());
    }, piece);
}

namespace detail {

// Whether direction d (relative to an arc center) falls inside the angular
// range of a ccw sweep from u0 to u1 of size `sweep` in (0, 2pi].
inline bool in_ccw_range(Point2 d, Point2 u0, Point2 u1, double sweep) {
    if (sweep >= kTwoPi * (1.0 - 1e-15)) return true;
    if (sweep <= std::numbers::pi) return cross(u0, d) >= 0.0 && cross(d, u1) >= 0.0;
    return !(cross(u1, d) > 0.0 && cross(d, u0) > 0.0);
}

inline bool in_arc_range(const Arc& arc, Point2 d) {
    const double s = arc.sweep();
    const double a0 = arc.angle_start;
    const double a1 = arc.angle_start + s;
    const Point2 u0{std::cos(a0), std::sin(a0)};
    const Point2 u1{std::cos(a1), std::sin(a1)};
    return s > 0.0 ? in_ccw_range(d, u0, u1, s) : in_ccw_range(d, u1, u0, -s);
}

}  // namespace detail

inline Point2 closest_point(Point2 p, const Segment& s) {
    const Point2 d = s.end - s.start;
    const double len2 = norm2(d);
    double t = len2 > 0.0 ? dot(p - s.start, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return s.start + d * t;
}

inline Point2 closest_point(Point2 p, const Arc& a) {
    const Point2 rel = p - a.center;
    const double r = norm(rel);
    if (r == 0.0) return a.start_point();
    if (detail::in_arc_range(a, rel)) return a.center + rel * (a.radius / r);
    const Point2 ps = a.start_point();
    const Point2 pe = a.end_point();
    return norm2(p - ps) <= norm2(p - pe) ? ps : pe;
}

inline Point2 closest_point(Point2 p, const Piece& piece) {
    return std::visit([p](const auto& g) { return closest_point(p, g); }, piece);
}

inline double distance_to_piece(Point2 p, const Segment& s) { return distance(p, closest_point(p, s)); }

inline double distance_to_piece(Point2 p, const Arc& a) {
    const Point2 rel = p - a.center;
    const double r = norm(rel);
    if (r == 0.0) return a.radius;
    if (detail::in_arc_range(a, rel)) return std::abs(r - a.radius);
    return std::min(distance(p, a.start_point()), distance(p, a.end_point()));
}

inline double distance_to_piece(Point2 p, const Piece& piece) {
    return std::visit([p](const auto& g) { return distance_to_piece(p, g); }, piece);
}

struct Box2 {
    Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

    void expand(Point2 p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    bool operator==(const Box2&) const = default;
};

/// Tight bounding box: segment endpoints, arc endpoints and any axis
/// extreme points crossed by an arc's sweep.
inline void expand_box(Box2& box, const Piece& piece) {
    if (const auto* s = std::get_if<Segment>(&piece)) {
        box.expand(s->start);
        box.expand(s->end);
        return;
    }
    const auto& a = std::get<Arc>(piece);
    box.expand(a.start_point());
    box.expand(a.end_point());
    static constexpr std::array<Point2, 4> axes{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
    for (Point2 d : axes)
        if (detail::in_arc_range(a, d)) box.expand(a.center + d * a.radius);
}

/// Uniform direction on the unit circle from a generator exposing uniform01().
template <class Rng>
Point2 uniform_unit_vector2(Rng& rng) {
    const double angle = kTwoPi * rng.uniform01();
    return {std::cos(angle), std::sin(angle)};
}

/// Circle through three points; returns false when they are collinear.
inline bool circle_through(Point2 a, Point2 b, Point2 c, Point2& center, double& radius) {
    const double d = 2.0 * orient(a, b, c);
    if (d == 0.0) return false;
    const double a2 = norm2(a), b2 = norm2(b), c2 = norm2(c);
    center = {(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
              (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
    radius = (distance(center, a) + distance(center, b) + distance(center, c)) / 3.0;
    return true;
}

/// Arc from `from` through `via` to `to`. Caller guarantees non-collinear input.
inline Arc arc_through(Point2 from, Point2 via, Point2 to) {
    Arc arc;
    circle_through(from, via, to, arc.center, arc.radius);
    arc.angle_start = std::atan2(from.y - arc.center.y, from.x - arc.center.x);
    arc.angle_end = std::atan2(to.y - arc.center.y, to.x - arc.center.x);
    arc.ccw = orient(from, via, to) > 0.0;
    return arc;
}

}  // namespace rwos
