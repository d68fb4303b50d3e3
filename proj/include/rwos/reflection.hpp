#pragma once
/**
 * @file reflection.hpp
 * @brief Anti-conformal reflections for zero-Neumann pieces and the
 * obstacle-distance ("walk radius") rule of the reflected walk.
 *
 * Straight Neumann pieces reflect across their supporting line; circular
 * Neumann pieces invert in their full circle. Both maps are involutions that
 * fix their own piece pointwise and send generalized circles to generalized
 * circles, so images of boundary pieces are again segments or arcs.
 *
 * Walk radius (nearest-piece rule): when the nearest boundary piece N_i is
 * Neumann, the sphere may cross N_i and is limited by the Dirichlet pieces,
 * the splitting points, every other Neumann piece and the images under g_i
 * of all other pieces, clipped to the far side of N_i's carrier (only that
 * part can meet the reflected cap). When the nearest piece is Dirichlet the
 * sphere is the largest one inside the domain.
 *
 * For line mirrors and for inversions whose domain side is the inside of
 * the circle, the reflected cap maps into the sphere itself, so the clipped
 * images can never bind before the other pieces do and are skipped.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rwos/domain.hpp"
#include "rwos/errors.hpp"
#include "rwos/geometry2d.hpp"

namespace rwos {

struct LineReflection {
    Point2 point;
    Point2 direction;  // unit
    bool operator==(const LineReflection&) const = default;
};

struct CircleInversion {
    Point2 center;
    double radius = 1.0;
    bool operator==(const CircleInversion&) const = default;
};

using ReflectionMap = std::variant<LineReflection, CircleInversion>;

inline Point2 apply(const LineReflection& m, Point2 p) {
    const Point2 foot = m.point + m.direction * dot(p - m.point, m.direction);
    return foot * 2.0 - p;
}

/// Inversion p -> c + R^2 (p - c) / |p - c|^2. Throws within `singular_tol` of c.
inline Point2 apply(const CircleInversion& m, Point2 p, double singular_tol = 0.0) {
    const Point2 rel = p - m.center;
    const double rho2 = norm2(rel);
    if (rho2 <= singular_tol * singular_tol || rho2 == 0.0)
        throw GeometryError("circle inversion evaluated at its center");
    return m.center + rel * (m.radius * m.radius / rho2);
}

inline Point2 apply(const ReflectionMap& m, Point2 p, double singular_tol = 0.0) {
    if (const auto* line = std::get_if<LineReflection>(&m)) return apply(*line, p);
    return apply(std::get<CircleInversion>(m), p, singular_tol);
}

inline ReflectionMap reflection_for(const Piece& piece) {
    if (const auto* s = std::get_if<Segment>(&piece)) {
        const Point2 d = s->end - s->start;
        return LineReflection{s->start, d / norm(d)};
    }
    const auto& a = std::get<Arc>(piece);
    return CircleInversion{a.center, a.radius};
}

/// Exact image of a piece under a reflection map. `tol` is the absolute
/// length below which the piece is considered to pass through the
/// inversion center.
inline Piece image_of_piece(const Piece& piece, const ReflectionMap& map, double tol) {
    if (const auto* line = std::get_if<LineReflection>(&map)) {
        if (const auto* s = std::get_if<Segment>(&piece))
            return Segment{apply(*line, s->start), apply(*line, s->end)};
        const auto& a = std::get<Arc>(piece);
        Arc img;
        img.center = apply(*line, a.center);
        img.radius = a.radius;
        const Point2 ps = apply(*line, a.start_point()) - img.center;
        const Point2 pe = apply(*line, a.end_point()) - img.center;
        img.angle_start = std::atan2(ps.y, ps.x);
        img.angle_end = a.full_circle() ? img.angle_start : std::atan2(pe.y, pe.x);
        img.ccw = !a.ccw;
        return img;
    }
    const auto& inv = std::get<CircleInversion>(map);
    if (distance_to_piece(inv.center, piece) <= tol)
        throw GeometryError("piece passes through the inversion center");
    const Point2 s0 = start_point(piece), s1 = end_point(piece), sm = mid_point(piece);
    const Point2 i0 = apply(inv, s0), i1 = apply(inv, s1), im = apply(inv, sm);

    bool through_center = false;
    if (const auto* s = std::get_if<Segment>(&piece)) {
        const Point2 d = s->end - s->start;
        through_center = std::abs(cross(d, inv.center - s->start)) / norm(d) <= tol;
    } else {
        const auto& a = std::get<Arc>(piece);
        through_center = std::abs(distance(a.center, inv.center) - a.radius) <= tol;
        if (a.full_circle() && !through_center) {
            // Full circle: image is the full circle through three image points.
            const Point2 q = apply(inv, a.point_at(a.angle_start + kTwoPi / 3.0));
            Arc img = arc_through(i0, q, apply(inv, a.point_at(a.angle_start + 2.0 * kTwoPi / 3.0)));
            img.angle_end = img.angle_start;
            return img;
        }
    }
    if (through_center) return Segment{i0, i1};
    return arc_through(i0, im, i1);
}

/// Flat, branch-light form of a piece for the walker's inner loop.
struct CompiledPiece {
    bool is_arc = false;
    Point2 a, b;            // segment endpoints, or arc endpoints
    Point2 center;          // arc only
    double radius = 0.0;
    Point2 u0, u1;          // ccw-normalized end directions (arc only)
    double ccw_sweep = 0.0; // in (0, 2pi]
    bool interior_inside = true;  // arc: domain lies inside its circle

    static CompiledPiece from(const Piece& piece) {
        CompiledPiece c;
        if (const auto* s = std::get_if<Segment>(&piece)) {
            c.a = s->start;
            c.b = s->end;
            return c;
        }
        const auto& arc = std::get<Arc>(piece);
        c.is_arc = true;
        c.center = arc.center;
        c.radius = arc.radius;
        c.a = arc.start_point();
        c.b = arc.end_point();
        const double sw = arc.sweep();
        const double a0 = arc.angle_start, a1 = arc.angle_start + sw;
        const Point2 d0{std::cos(a0), std::sin(a0)}, d1{std::cos(a1), std::sin(a1)};
        if (sw > 0.0) {
            c.u0 = d0, c.u1 = d1, c.ccw_sweep = sw;
        } else {
            c.u0 = d1, c.u1 = d0, c.ccw_sweep = -sw;
        }
        c.interior_inside = arc.ccw;
        return c;
    }

    double distance(Point2 p) const {
        if (!is_arc) {
            const Point2 d = b - a;
            double t = dot(p - a, d) / norm2(d);
            t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
            return norm(p - (a + d * t));
        }
        const Point2 rel = p - center;
        if (detail::in_ccw_range(rel, u0, u1, ccw_sweep)) return std::abs(norm(rel) - radius);
        return std::sqrt(std::min(norm2(p - a), norm2(p - b)));
    }
};

namespace detail {

// Parameters t in (0, 1) (fraction of length / sweep) where `piece` meets the
// carrier line or circle of `mirror`.
inline std::vector<double> carrier_crossings(const Piece& piece, const CompiledPiece& mirror) {
    std::vector<double> ts;
    auto keep = [&ts](double t) {
        if (t > 1e-12 && t < 1.0 - 1e-12) ts.push_back(t);
    };
    if (const auto* s = std::get_if<Segment>(&piece)) {
        const Point2 d = s->end - s->start;
        if (!mirror.is_arc) {
            const Point2 m = mirror.b - mirror.a;
            const double den = cross(m, d);
            if (den != 0.0) keep(cross(m, mirror.a - s->start) / den);
        } else {
            const Point2 f = s->start - mirror.center;
            const double A = norm2(d), B = 2.0 * dot(f, d), C = norm2(f) - mirror.radius * mirror.radius;
            const double disc = B * B - 4.0 * A * C;
            if (disc > 0.0) {
                const double sq = std::sqrt(disc);
                keep((-B - sq) / (2.0 * A));
                keep((-B + sq) / (2.0 * A));
            }
        }
    } else {
        const auto& a = std::get<Arc>(piece);
        const double sw = a.sweep();
        std::vector<double> angles;
        if (!mirror.is_arc) {
            // Unit normal n of the line; points x with n.x = k.
            const Point2 m = mirror.b - mirror.a;
            const Point2 n = Point2{-m.y, m.x} / norm(m);
            const double k = dot(n, mirror.a);
            const double cosv = (k - dot(n, a.center)) / a.radius;
            if (std::abs(cosv) < 1.0) {
                const double phi = std::atan2(n.y, n.x), dv = std::acos(cosv);
                angles = {phi + dv, phi - dv};
            }
        } else {
            const Point2 dc = mirror.center - a.center;
            const double dist = norm(dc);
            const double r0 = a.radius, r1 = mirror.radius;
            if (dist > 0.0 && dist < r0 + r1 && dist > std::abs(r0 - r1)) {
                const double cosv = (dist * dist + r0 * r0 - r1 * r1) / (2.0 * dist * r0);
                const double phi = std::atan2(dc.y, dc.x), dv = std::acos(std::clamp(cosv, -1.0, 1.0));
                angles = {phi + dv, phi - dv};
            }
        }
        for (double th : angles) {
            double rel = std::fmod(th - a.angle_start, kTwoPi);
            if (sw > 0.0) {
                if (rel < 0.0) rel += kTwoPi;
            } else {
                if (rel > 0.0) rel -= kTwoPi;
            }
            keep(rel / sw);
        }
    }
    std::sort(ts.begin(), ts.end());
    return ts;
}

inline Piece sub_piece(const Piece& piece, double t0, double t1) {
    if (const auto* s = std::get_if<Segment>(&piece))
        return Segment{point_along(piece, t0), point_along(piece, t1)};
    Arc a = std::get<Arc>(piece);
    const double sw = a.sweep();
    const double start = a.angle_start;
    a.angle_start = start + t0 * sw;
    a.angle_end = start + t1 * sw;
    return a;
}

// Signed offset of p from the carrier of `mirror`, positive on the far
// (non-domain) side.
inline double far_side_offset(const CompiledPiece& mirror, Point2 p) {
    if (!mirror.is_arc) {
        const Point2 m = mirror.b - mirror.a;
        return -cross(m, p - mirror.a) / norm(m);
    }
    const double d = norm(p - mirror.center) - mirror.radius;
    return mirror.interior_inside ? d : -d;
}

// Parts of `piece` on the closed far side of the mirror's carrier.
inline std::vector<Piece> clip_to_far_side(const Piece& piece, const CompiledPiece& mirror, double tol) {
    std::vector<double> ts{0.0};
    for (double t : carrier_crossings(piece, mirror)) ts.push_back(t);
    ts.push_back(1.0);
    std::vector<Piece> out;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const Piece sub = (ts.size() == 2) ? piece : sub_piece(piece, ts[k], ts[k + 1]);
        if (far_side_offset(mirror, point_along(piece, 0.5 * (ts[k] + ts[k + 1]))) >= -tol)
            out.push_back(sub);
    }
    return out;
}

}  // namespace detail

/// Walk radius and the Neumann piece whose reflection the next step may use.
struct WalkRadius {
    double radius = 0.0;
    std::optional<std::size_t> active;  // single Neumann piece that may be crossed
    std::optional<std::size_t> corner;  // or a folding corner (index into corners())
    std::optional<std::size_t> snap;    // or a snapping corner (index into snap_corners())
    double dirichlet_distance = 0.0;
};

/// Snap distance to a non-folding Neumann–Neumann corner, relative to the diameter.
inline constexpr double kCornerSnap = 1e-6;

/**
 * Junction S of two straight Neumann pieces that cannot be folded (for
 * instance a re-entrant corner). Near S the walk radius shrinks with |z - S|,
 * so within kCornerSnap * diameter the walker moves to S and jumps to a
 * uniform point of the circle around S restricted to the domain: with
 * straight sides and zero flux across them, the circular mean of u over that
 * part equals u(S) for any corner angle.
 */
struct SnapCorner {
    Point2 vertex;
    std::size_t first = 0, second = 0;
    Point2 first_dir, second_dir;
    bool convex = false;

    bool inside(Point2 q) const {
        const bool a = cross(first_dir, q - vertex) > 0.0, b = cross(second_dir, q - vertex) > 0.0;
        return convex ? (a && b) : (a || b);
    }
};

/**
 * Junction S of two straight Neumann pieces meeting at interior angle pi/m,
 * m in {1, 2, 3, 4}. The reflections in the two carriers generate a finite
 * dihedral group whose chamber is the wedge W at S, and folding a point into
 * W never increases its distance to a point of W. Near S the walk can then
 * use a sphere that ignores both pieces and S itself.
 */
struct CornerFold {
    Point2 vertex;
    std::size_t first = 0, second = 0;  // incoming and outgoing piece
    LineReflection first_map, second_map;
    Point2 first_dir, second_dir;       // unit piece directions
    double first_length = 0.0, second_length = 0.0;
    unsigned order = 2;                 // m

    bool in_wedge(Point2 p) const {
        return cross(first_dir, p - vertex) >= 0.0 && cross(second_dir, p - vertex) >= 0.0;
    }

    /// Whether the jump from -> to leaves the wedge through one of the two
    /// pieces (rather than through a carrier line beyond a piece's far end).
    bool exits_through_pieces(Point2 from, Point2 to) const {
        const double f1 = cross(first_dir, from - vertex), t1 = cross(first_dir, to - vertex);
        const double f2 = cross(second_dir, from - vertex), t2 = cross(second_dir, to - vertex);
        if (t1 >= 0.0 && t2 >= 0.0) return false;
        constexpr double inf = std::numeric_limits<double>::infinity();
        const double s1 = (t1 < 0.0 && f1 >= 0.0) ? f1 / (f1 - t1) : inf;
        const double s2 = (t2 < 0.0 && f2 >= 0.0) ? f2 / (f2 - t2) : inf;
        if (s1 == inf && s2 == inf) return true;  // start already outside by rounding
        const Point2 x = from + (to - from) * std::min(s1, s2);
        if (s1 <= s2) {
            const double along = dot(vertex - x, first_dir);
            return along >= 0.0 && along <= first_length;
        }
        const double along = dot(x - vertex, second_dir);
        return along >= 0.0 && along <= second_length;
    }

    /// Folds p into the wedge; returns the number of reflections used, or
    /// `cap + 1` if it did not settle within `cap`.
    unsigned fold(Point2& p, unsigned cap) const {
        unsigned k = 0;
        for (;;) {
            if (cross(first_dir, p - vertex) < 0.0) p = apply(first_map, p);
            else if (cross(second_dir, p - vertex) < 0.0) p = apply(second_map, p);
            else return k;
            if (++k > cap) return k;
        }
    }
};

/**
 * Domain plus everything the reflected walk precomputes once: compiled
 * pieces, reflection maps of the Neumann pieces and, for each Neumann piece,
 * the far-side parts of the images of all other pieces under its map.
 * Immutable after construction and safe to share between threads.
 */
class WalkGeometry {
public:
    explicit WalkGeometry(DomainSpec2D domain) : domain_(std::move(domain)) {
        if (!domain_.has_dirichlet()) throw SpecError("domain has no Dirichlet boundary");
        const double tol = domain_.length_tolerance();
        const std::size_t n = domain_.size();
        pieces_.reserve(n);
        for (const auto& bp : domain_.pieces()) pieces_.push_back(CompiledPiece::from(bp.geometry));
        dirichlet_.resize(n);
        maps_.resize(n);
        images_.resize(n);
        images_bind_.resize(n);
        piece_corners_.resize(n);
        piece_snaps_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = (i + 1) % n;
            const auto* si = std::get_if<Segment>(&domain_.piece(i).geometry);
            const auto* sk = std::get_if<Segment>(&domain_.piece(k).geometry);
            if (!si || !sk || domain_.piece(i).bc.is_dirichlet() || domain_.piece(k).bc.is_dirichlet()) continue;
            const Point2 di = (si->end - si->start) / norm(si->end - si->start);
            const Point2 dk = (sk->end - sk->start) / norm(sk->end - sk->start);
            const double turn = std::atan2(cross(di, dk), dot(di, dk));
            const double m = std::numbers::pi / (std::numbers::pi - turn);
            const double order = std::round(m);
            if (order < 1.0 || order > 4.0 || std::abs(m - order) > 1e-9) {
                piece_snaps_[i].push_back(snaps_.size());
                piece_snaps_[k].push_back(snaps_.size());
                snaps_.push_back({si->end, i, k, di, dk, turn > 0.0});
                continue;
            }
            CornerFold c;
            c.vertex = si->end;
            c.first = i, c.second = k;
            c.first_map = LineReflection{si->start, di};
            c.second_map = LineReflection{sk->start, dk};
            c.first_dir = di, c.second_dir = dk;
            c.first_length = norm(si->end - si->start);
            c.second_length = norm(sk->end - sk->start);
            c.order = static_cast<unsigned>(order);
            piece_corners_[i].push_back(corners_.size());
            piece_corners_[k].push_back(corners_.size());
            corners_.push_back(c);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto& bp = domain_.piece(i);
            dirichlet_[i] = bp.bc.is_dirichlet();
            if (dirichlet_[i]) continue;
            maps_[i] = reflection_for(bp.geometry);
            images_bind_[i] = pieces_[i].is_arc && !pieces_[i].interior_inside;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                Piece img;
                try {
                    img = image_of_piece(domain_.piece(j).geometry, *maps_[i], tol);
                } catch (const GeometryError&) {
                    throw GeometryError("piece " + std::to_string(j) +
                                        " passes through the inversion center of Neumann piece " +
                                        std::to_string(i));
                }
                for (const Piece& part : detail::clip_to_far_side(img, pieces_[i], 1e-9 * domain_.diameter()))
                    images_[i].push_back(CompiledPiece::from(part));
            }
        }
    }

    const DomainSpec2D& domain() const { return domain_; }
    const CompiledPiece& compiled(std::size_t i) const { return pieces_[i]; }
    bool is_dirichlet(std::size_t i) const { return dirichlet_[i]; }
    const ReflectionMap& map(std::size_t i) const { return *maps_[i]; }

    /// Far-side parts of g_i(boundary minus N_i).
    const std::vector<CompiledPiece>& reflected_obstacles(std::size_t i) const { return images_[i]; }

    const std::vector<CornerFold>& corners() const { return corners_; }
    const std::vector<SnapCorner>& snap_corners() const { return snaps_; }

    /// Whether the reflected obstacles of piece i can limit the walk radius.
    bool reflected_obstacles_bind(std::size_t i) const { return images_bind_[i]; }

    /// The walk radius at p (see file comment). With `all_obstacles` the
    /// reflected obstacles are included even where they cannot bind.
    WalkRadius walk_radius(Point2 p, bool all_obstacles = false) const {
        const std::size_t n = pieces_.size();
        double nearest = std::numeric_limits<double>::infinity();
        double d_dir = nearest;
        std::size_t nearest_index = 0;
        thread_local std::vector<double> dist;
        dist.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = pieces_[i].distance(p);
            dist[i] = d;
            if (d < nearest) nearest = d, nearest_index = i;
            if (dirichlet_[i] && d < d_dir) d_dir = d;
        }
        WalkRadius out;
        out.dirichlet_distance = d_dir;
        if (dirichlet_[nearest_index]) {
            out.radius = nearest;
            return out;
        }
        double r = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            if (j != nearest_index) r = std::min(r, dist[j]);
        for (Point2 s : domain_.splitting_points()) r = std::min(r, distance(p, s));
        if (all_obstacles || images_bind_[nearest_index])
            for (const auto& img : images_[nearest_index]) r = std::min(r, img.distance(p));
        out.radius = r;
        out.active = nearest_index;
        for (std::size_t si : piece_snaps_[nearest_index]) {
            const SnapCorner& c = snaps_[si];
            if (distance(p, c.vertex) >= kCornerSnap * domain_.diameter()) continue;
            double rc = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j)
                if (j != c.first && j != c.second) rc = std::min(rc, pieces_[j].distance(c.vertex));
            for (Point2 s : domain_.splitting_points())
                if (!(s == c.vertex)) rc = std::min(rc, distance(c.vertex, s));
            if (rc > r) {
                out.radius = rc;
                out.active.reset();
                out.snap = si;
                return out;
            }
        }
        for (std::size_t ci : piece_corners_[nearest_index]) {
            const CornerFold& c = corners_[ci];
            if (!c.in_wedge(p)) continue;
            double rc = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j)
                if (j != c.first && j != c.second) rc = std::min(rc, dist[j]);
            for (Point2 s : domain_.splitting_points())
                if (!(s == c.vertex)) rc = std::min(rc, distance(p, s));
            if (rc > out.radius) {
                out.radius = rc;
                out.active.reset();
                out.corner = ci;
            }
        }
        return out;
    }

    /// Whether the jump from `from` to `to` left the domain through Neumann
    /// piece i: `to` is on the far side of the carrier and the segment
    /// crosses the carrier inside the piece. Within a walk sphere for active
    /// piece i this is exactly "`to` lies outside the domain".
    bool crossed(std::size_t i, Point2 from, Point2 to) const {
        const auto& c = pieces_[i];
        if (detail::far_side_offset(c, to) <= 0.0) return false;
        const Point2 d = to - from;
        if (!c.is_arc) {
            const Point2 m = c.b - c.a;
            const double s_from = cross(m, from - c.a), s_to = cross(m, to - c.a);
            const double t = s_from == s_to ? 0.0 : std::clamp(s_from / (s_from - s_to), 0.0, 1.0);
            const double u = dot(from + d * t - c.a, m) / norm2(m);
            return u >= 0.0 && u <= 1.0;
        }
        const Point2 f = from - c.center;
        const double A = norm2(d), B = 2.0 * dot(f, d), C = norm2(f) - c.radius * c.radius;
        const double disc = B * B - 4.0 * A * C;
        double t = 1.0;
        if (disc >= 0.0 && A > 0.0) {
            const double sq = std::sqrt(disc);
            t = c.interior_inside ? (-B + sq) / (2.0 * A) : (-B - sq) / (2.0 * A);
            t = std::clamp(t, 0.0, 1.0);
        }
        return detail::in_ccw_range(from + d * t - c.center, c.u0, c.u1, c.ccw_sweep);
    }

    /// Nearest Neumann piece to p, if any.
    std::optional<std::size_t> nearest_neumann(Point2 p) const {
        std::optional<std::size_t> best;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            if (dirichlet_[i]) continue;
            const double d = pieces_[i].distance(p);
            if (d < bd) bd = d, best = i;
        }
        return best;
    }

private:
    DomainSpec2D domain_;
    std::vector<CompiledPiece> pieces_;
    std::vector<bool> dirichlet_;
    std::vector<std::optional<ReflectionMap>> maps_;
    std::vector<std::vector<CompiledPiece>> images_;
    std::vector<bool> images_bind_;
    std::vector<CornerFold> corners_;
    std::vector<std::vector<std::size_t>> piece_corners_;
    std::vector<SnapCorner> snaps_;
    std::vector<std::vector<std::size_t>> piece_snaps_;
};

/// Convenience form of the walk-radius rule for one-off queries.
inline WalkRadius walk_radius(const WalkGeometry& geometry, Point2 p) { return geometry.walk_radius(p); }

}  // namespace rwos
