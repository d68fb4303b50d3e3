#pragma once
/**
 * @file wos3d.hpp
 * @brief Reflected Walk-on-Spheres in polyhedral domains: Dirichlet faces,
 * zero-Neumann faces handled by plane reflections, and edge folding where
 * two Neumann faces meet at a dihedral angle pi/m.
 *
 * Radius rule, as in the plane: if the nearest face is Dirichlet the sphere
 * is the largest inside the domain; if it is a Neumann face F, the sphere may
 * cross F and is limited by every other face and by the Neumann–Neumann
 * edges S3. A plane reflection maps the cap beyond F into the sphere itself,
 * so the reflected images of the other faces never bind and are not tested.
 *
 * A Neumann–Neumann edge that cannot be folded (for instance a re-entrant
 * one) would trap the walker: the radius shrinks with the distance to the
 * edge. Within kEdgeSnap * diameter of such an edge the walker moves to the
 * nearest edge point c and jumps to a uniform point of the sphere around c
 * restricted to the domain. With flat faces through c and zero flux across
 * them, the spherical mean of u over that part equals u(c), for any wedge
 * angle. Snapping changes u by O(kEdgeSnap^(2/3)).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rwos/domain.hpp"
#include "rwos/errors.hpp"
#include "rwos/estimator.hpp"
#include "rwos/geometry2d.hpp"
#include "rwos/rng.hpp"
#include "rwos/walker.hpp"

namespace rwos {

struct Point3 {
    double x = 0.0, y = 0.0, z = 0.0;
    bool operator==(const Point3&) const = default;
};

inline Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(Point3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline Point3 operator/(Point3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(Point3 a, Point3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(Point3 a) { return dot(a, a); }
inline double norm(Point3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Point3 a, Point3 b) { return norm(a - b); }
inline bool is_finite(Point3 p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); }

inline double distance_to_segment(Point3 p, Point3 a, Point3 b) {
    const Point3 d = b - a;
    double t = dot(p - a, d) / norm2(d);
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + d * t));
}

/// Plane n.x = offset with unit normal n.
struct Plane {
    Point3 normal{0, 0, 1};
    double offset = 0.0;
    double signed_distance(Point3 p) const { return dot(normal, p) - offset; }
};

inline Point3 reflect_across_plane(Point3 p, const Plane& plane) {
    return p - plane.normal * (2.0 * plane.signed_distance(p));
}

/// Uniform direction on the unit sphere: a normalized Gaussian triple.
template <class Rng>
Point3 uniform_unit_vector3(Rng& rng) {
    for (;;) {
        const Point3 g{rng.normal(), rng.normal(), rng.normal()};
        const double n = norm(g);
        if (n > 1e-300) return g / n;
    }
}

/// Planar polygonal face. Vertices are listed counterclockwise as seen from
/// outside the domain, so the plane normal points outward.
struct Face {
    std::vector<Point3> vertices;
    BoundaryCondition bc;

    // Derived on validation.
    Plane plane;
    Point3 axis_u, axis_v;          // in-plane orthonormal basis
    std::vector<Point2> local;      // vertices in that basis

    Point2 to_local(Point3 p) const {
        const Point3 r = p - vertices.front();
        return {dot(r, axis_u), dot(r, axis_v)};
    }

    /// Point-in-polygon for a point of the face's plane (even-odd rule).
    bool contains_in_plane(Point2 q) const {
        bool inside = false;
        const std::size_t n = local.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Point2 a = local[i], b = local[j];
            if ((a.y > q.y) != (b.y > q.y) && q.x < (b.x - a.x) * (q.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
        }
        return inside;
    }

    double distance(Point3 p) const {
        const double h = plane.signed_distance(p);
        const Point2 q = to_local(p);
        if (contains_in_plane(q)) return std::abs(h);
        double d2 = std::numeric_limits<double>::infinity();
        const std::size_t n = local.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = local[i], b = local[(i + 1) % n];
            const Point2 d = b - a;
            const double t = std::clamp(rwos::dot(q - a, d) / rwos::norm2(d), 0.0, 1.0);
            d2 = std::min(d2, rwos::norm2(q - (a + d * t)));
        }
        return std::sqrt(h * h + d2);
    }
};

/// Edge shared by two faces; `first` traverses it a -> b, `second` b -> a.
struct Edge3 {
    Point3 a, b;
    std::size_t first = 0, second = 0;
};

/**
 * Two Neumann faces meeting at interior dihedral angle pi/m, m in 1..4.
 * Folding into the wedge bounded by their planes is 1-Lipschitz.
 */
struct EdgeFold {
    std::size_t edge = 0;
    std::size_t first = 0, second = 0;
    unsigned order = 2;
};

class DomainSpec3D {
public:
    explicit DomainSpec3D(std::vector<Face> faces) : faces_(std::move(faces)) { finalize(); }

    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(std::size_t i) const { return faces_[i]; }
    std::size_t size() const { return faces_.size(); }
    const std::vector<Edge3>& edges() const { return edges_; }
    /// Indices into edges() of Neumann–Neumann edges.
    const std::vector<std::size_t>& splitting_edges() const { return splitting_; }
    const std::vector<EdgeFold>& folds() const { return folds_; }
    bool is_fold_edge(std::size_t e) const { return fold_edge_[e]; }
    double diameter() const { return diameter_; }
    double volume() const { return volume_; }
    Point3 lo() const { return lo_; }
    Point3 hi() const { return hi_; }
    double length_tolerance() const { return 1e-12 * diameter_; }

private:
    void finalize();

    std::vector<Face> faces_;
    std::vector<Edge3> edges_;
    std::vector<std::size_t> splitting_;
    std::vector<EdgeFold> folds_;
    std::vector<char> fold_edge_;
    double diameter_ = 0.0, volume_ = 0.0;
    Point3 lo_, hi_;
};

inline void DomainSpec3D::finalize() {
    if (faces_.size() < 4) throw SpecError("a polyhedron needs at least 4 faces");
    lo_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
    hi_ = lo_ * -1.0;
    std::vector<Point3> all;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& vs = faces_[f].vertices;
        if (vs.size() < 3) throw SpecError("face " + std::to_string(f) + " has fewer than 3 vertices");
        if (faces_[f].bc.is_dirichlet() && !std::isfinite(faces_[f].bc.value))
            throw SpecError("face " + std::to_string(f) + " has a non-finite Dirichlet value");
        for (const auto& v : vs) {
            if (!is_finite(v)) throw SpecError("face " + std::to_string(f) + " has a non-finite vertex");
            lo_ = {std::min(lo_.x, v.x), std::min(lo_.y, v.y), std::min(lo_.z, v.z)};
            hi_ = {std::max(hi_.x, v.x), std::max(hi_.y, v.y), std::max(hi_.z, v.z)};
            all.push_back(v);
        }
    }
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) diameter_ = std::max(diameter_, distance(all[i], all[j]));
    if (!(diameter_ > 0.0)) throw SpecError("degenerate polyhedron");
    const double tol = 1e-9 * diameter_;

    for (std::size_t f = 0; f < faces_.size(); ++f) {
        Face& face = faces_[f];
        const auto& vs = face.vertices;
        // Newell normal.
        Point3 n{};
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const Point3 a = vs[i], b = vs[(i + 1) % vs.size()];
            n = n + Point3{(a.y - b.y) * (a.z + b.z), (a.z - b.z) * (a.x + b.x), (a.x - b.x) * (a.y + b.y)};
        }
        const double nn = norm(n);
        if (!(nn > tol * tol)) throw SpecError("face " + std::to_string(f) + " is degenerate");
        face.plane.normal = n / nn;
        face.plane.offset = dot(face.plane.normal, vs.front());
        for (const auto& v : vs)
            if (std::abs(face.plane.signed_distance(v)) > tol)
                throw SpecError("face " + std::to_string(f) + " is not planar");
        Point3 u{};
        for (std::size_t i = 1; i < vs.size() && norm(u) <= tol; ++i) u = vs[i] - vs[0];
        face.axis_u = u / norm(u);
        face.axis_v = cross(face.plane.normal, face.axis_u);
        face.local.clear();
        for (const auto& v : vs) face.local.push_back(face.to_local(v));
        for (std::size_t i = 0; i < vs.size(); ++i)
            if (distance(vs[i], vs[(i + 1) % vs.size()]) <= tol)
                throw SpecError("face " + std::to_string(f) + " has a zero-length edge");
    }

    // Pair every directed edge with its reverse in another face.
    edges_.clear();
    struct Directed {
        Point3 a, b;
        std::size_t face;
        bool matched;
    };
    std::vector<Directed> dir;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& vs = faces_[f].vertices;
        for (std::size_t i = 0; i < vs.size(); ++i) dir.push_back({vs[i], vs[(i + 1) % vs.size()], f, false});
    }
    for (std::size_t i = 0; i < dir.size(); ++i) {
        if (dir[i].matched) continue;
        std::optional<std::size_t> mate;
        for (std::size_t j = 0; j < dir.size(); ++j) {
            if (j == i || dir[j].face == dir[i].face) continue;
            if (distance(dir[j].a, dir[i].b) <= tol && distance(dir[j].b, dir[i].a) <= tol) {
                if (mate || dir[j].matched)
                    throw SpecError("edge of face " + std::to_string(dir[i].face) + " is shared by more than two faces");
                mate = j;
            }
        }
        if (!mate) {
            for (std::size_t j = 0; j < dir.size(); ++j)
                if (j != i && distance(dir[j].a, dir[i].a) <= tol && distance(dir[j].b, dir[i].b) <= tol)
                    throw SpecError("faces " + std::to_string(dir[i].face) + " and " + std::to_string(dir[j].face) +
                                    " are not consistently oriented");
            throw SpecError("boundary is not closed at an edge of face " + std::to_string(dir[i].face));
        }
        dir[i].matched = dir[*mate].matched = true;
        edges_.push_back({dir[i].a, dir[i].b, dir[i].face, dir[*mate].face});
    }

    // Volume by the divergence theorem over fan triangles.
    volume_ = 0.0;
    for (const auto& face : faces_)
        for (std::size_t i = 1; i + 1 < face.vertices.size(); ++i)
            volume_ += dot(face.vertices[0], cross(face.vertices[i], face.vertices[i + 1])) / 6.0;
    if (!(volume_ > 0.0)) throw SpecError("face normals do not point outward (non-positive volume)");

    bool any_dirichlet = false;
    for (const auto& f : faces_) any_dirichlet = any_dirichlet || f.bc.is_dirichlet();
    if (!any_dirichlet) throw SpecError("domain has no Dirichlet boundary");

    splitting_.clear();
    folds_.clear();
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge3& ed = edges_[e];
        const Face& f1 = faces_[ed.first];
        const Face& f2 = faces_[ed.second];
        if (f1.bc.is_dirichlet() || f2.bc.is_dirichlet()) continue;
        splitting_.push_back(e);
        // Unit in-face directions pointing from the edge into each face.
        const Point3 t = (ed.b - ed.a) / norm(ed.b - ed.a);
        const Point3 in1 = cross(f1.plane.normal, t);
        const Point3 in2 = cross(t, f2.plane.normal);
        const double c = std::clamp(dot(in1, in2), -1.0, 1.0);
        const bool convex = dot(f1.plane.normal, in2) <= 1e-12;
        if (!convex) continue;
        const double alpha = std::acos(c);
        const double m = std::numbers::pi / alpha;
        const double order = std::round(m);
        if (order < 1.0 || order > 4.0 || std::abs(m - order) > 1e-9) continue;
        folds_.push_back({e, ed.first, ed.second, static_cast<unsigned>(order)});
    }
    fold_edge_.assign(edges_.size(), 0);
    for (const auto& f : folds_) fold_edge_[f.edge] = 1;
}

namespace detail {

// Signed solid angle of triangle (a, b, c) seen from the origin.
inline double solid_angle(Point3 a, Point3 b, Point3 c) {
    const double la = norm(a), lb = norm(b), lc = norm(c);
    const double num = dot(a, cross(b, c));
    const double den = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
    return 2.0 * std::atan2(num, den);
}

}  // namespace detail

/// Containment by the winding number (total solid angle / 4 pi).
inline bool contains(const DomainSpec3D& domain, Point3 p) {
    double total = 0.0;
    for (const auto& f : domain.faces()) {
        const auto& vs = f.vertices;
        for (std::size_t i = 1; i + 1 < vs.size(); ++i)
            total += detail::solid_angle(vs[0] - p, vs[i] - p, vs[i + 1] - p);
    }
    return total < -2.0 * std::numbers::pi || total > 2.0 * std::numbers::pi;
}

inline double boundary_distance(const DomainSpec3D& domain, Point3 p) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& f : domain.faces()) d = std::min(d, f.distance(p));
    return d;
}

/// Snap distance to a non-folding Neumann–Neumann edge, relative to the diameter.
inline constexpr double kEdgeSnap = 1e-6;

struct WalkRadius3 {
    double radius = 0.0;
    std::optional<std::size_t> active;  // Neumann face that may be crossed
    std::optional<std::size_t> fold;    // or an edge fold (index into folds())
    std::optional<std::size_t> snap;    // or a snapping edge (index into edges())
    Point3 snap_point;                  // sphere center when snapping
    double dirichlet_distance = 0.0;
};

/// Walk radius at p (see file comment). Near a folding edge the sphere
/// ignores both of its faces and the edge when that gives a larger radius.
inline WalkRadius3 walk_radius3(const DomainSpec3D& domain, Point3 p) {
    const std::size_t n = domain.size();
    thread_local std::vector<double> dist;
    dist.resize(n);
    double nearest = std::numeric_limits<double>::infinity(), d_dir = nearest;
    std::size_t ni = 0;
    for (std::size_t i = 0; i < n; ++i) {
        dist[i] = domain.face(i).distance(p);
        if (dist[i] < nearest) nearest = dist[i], ni = i;
        if (domain.face(i).bc.is_dirichlet()) d_dir = std::min(d_dir, dist[i]);
    }
    WalkRadius3 out;
    out.dirichlet_distance = d_dir;
    if (domain.face(ni).bc.is_dirichlet()) {
        out.radius = nearest;
        return out;
    }
    auto edge_distance = [&](std::size_t e) {
        const Edge3& ed = domain.edges()[e];
        return distance_to_segment(p, ed.a, ed.b);
    };
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
        if (j != ni) r = std::min(r, dist[j]);
    for (std::size_t e : domain.splitting_edges()) r = std::min(r, edge_distance(e));
    out.radius = r;
    out.active = ni;
    const double snap = kEdgeSnap * domain.diameter();
    for (std::size_t e : domain.splitting_edges()) {
        if (domain.is_fold_edge(e)) continue;
        const Edge3& ed = domain.edges()[e];
        if (ed.first != ni && ed.second != ni) continue;
        if (edge_distance(e) >= snap) continue;
        const Point3 d = ed.b - ed.a;
        const Point3 c = ed.a + d * std::clamp(dot(p - ed.a, d) / norm2(d), 0.0, 1.0);
        double rc = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            if (j != ed.first && j != ed.second) rc = std::min(rc, domain.face(j).distance(c));
        for (std::size_t e2 : domain.splitting_edges())
            if (e2 != e) rc = std::min(rc, distance_to_segment(c, domain.edges()[e2].a, domain.edges()[e2].b));
        if (rc > r) {
            out.radius = rc;
            out.active.reset();
            out.snap = e;
            out.snap_point = c;
            return out;
        }
    }
    for (std::size_t k = 0; k < domain.folds().size(); ++k) {
        const EdgeFold& f = domain.folds()[k];
        if (f.first != ni && f.second != ni) continue;
        if (domain.face(f.first).plane.signed_distance(p) > 0.0 || domain.face(f.second).plane.signed_distance(p) > 0.0)
            continue;
        double rc = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            if (j != f.first && j != f.second) rc = std::min(rc, dist[j]);
        for (std::size_t e : domain.splitting_edges())
            if (e != f.edge) rc = std::min(rc, edge_distance(e));
        if (rc > out.radius) {
            out.radius = rc;
            out.active.reset();
            out.fold = k;
        }
    }
    return out;
}

namespace detail {

// Whether the segment from -> to leaves through face i's polygon into the
// far side of its plane.
inline bool crossed_face(const Face& face, Point3 from, Point3 to) {
    const double s_to = face.plane.signed_distance(to);
    if (s_to <= 0.0) return false;
    const double s_from = face.plane.signed_distance(from);
    const double t = s_from >= 0.0 ? 0.0 : s_from / (s_from - s_to);
    return face.contains_in_plane(face.to_local(from + (to - from) * t));
}

// Edge-fold counterpart: true if the jump leaves the wedge through one of the
// two faces.
inline bool crossed_fold(const DomainSpec3D& domain, const EdgeFold& f, Point3 from, Point3 to) {
    const Face& a = domain.face(f.first);
    const Face& b = domain.face(f.second);
    const double ta = a.plane.signed_distance(to), tb = b.plane.signed_distance(to);
    if (ta <= 0.0 && tb <= 0.0) return false;
    const double fa = a.plane.signed_distance(from), fb = b.plane.signed_distance(from);
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double sa = (ta > 0.0 && fa <= 0.0) ? fa / (fa - ta) : inf;
    const double sb = (tb > 0.0 && fb <= 0.0) ? fb / (fb - tb) : inf;
    if (sa == inf && sb == inf) return true;
    const Point3 x = from + (to - from) * std::min(sa, sb);
    const Face& through = sa <= sb ? a : b;
    return through.contains_in_plane(through.to_local(x));
}

}  // namespace detail

struct ExitSample3 {
    Point3 point;
    std::size_t face = 0;
    double value = 0.0;
    std::uint64_t steps = 0;
    std::uint64_t reflections = 0;
};

/// Non-throwing 3D sampler; same loop as the planar walker.
template <class Rng>
WalkStatus try_sample_exit3(const DomainSpec3D& domain, Point3 start, const WalkConfig& cfg, Rng& rng,
                            ExitSample3& out) {
    const double stall = domain.length_tolerance();
    Point3 z = start;
    std::uint64_t steps = 0, reflections = 0;
    for (;;) {
        const WalkRadius3 wr = walk_radius3(domain, z);
        if (wr.dirichlet_distance <= cfg.epsilon) break;
        if (steps >= cfg.max_steps) return WalkStatus::step_limit;
        if (wr.radius < stall) return WalkStatus::stalled;
        if (wr.snap) {
            // Uniform point on the part of the sphere inside the domain.
            const Edge3& ed = domain.edges()[*wr.snap];
            const Plane& pa = domain.face(ed.first).plane;
            const Plane& pb = domain.face(ed.second).plane;
            const bool convex = domain.face(ed.first).plane.signed_distance(domain.face(ed.second).vertices.front()) <= 0.0 &&
                                domain.face(ed.second).plane.signed_distance(domain.face(ed.first).vertices.front()) <= 0.0;
            for (;;) {
                const Point3 q = wr.snap_point + uniform_unit_vector3(rng) * wr.radius;
                const bool in_a = pa.signed_distance(q) < 0.0, in_b = pb.signed_distance(q) < 0.0;
                if (convex ? (in_a && in_b) : (in_a || in_b)) {
                    z = q;
                    break;
                }
            }
            ++steps;
            continue;
        }
        const Point3 from = z;
        z = z + uniform_unit_vector3(rng) * wr.radius;
        ++steps;
        unsigned bounces = 0;
        if (wr.active && detail::crossed_face(domain.face(*wr.active), from, z)) {
            const Plane& pl = domain.face(*wr.active).plane;
            do {
                if (bounces == cfg.max_reflections) return WalkStatus::reflection_limit;
                z = reflect_across_plane(z, pl);
                ++bounces;
            } while (pl.signed_distance(z) > 0.0);
        } else if (wr.fold && detail::crossed_fold(domain, domain.folds()[*wr.fold], from, z)) {
            const EdgeFold& f = domain.folds()[*wr.fold];
            const Plane& pa = domain.face(f.first).plane;
            const Plane& pb = domain.face(f.second).plane;
            for (;;) {
                if (pa.signed_distance(z) > 0.0) z = reflect_across_plane(z, pa);
                else if (pb.signed_distance(z) > 0.0) z = reflect_across_plane(z, pb);
                else break;
                if (++bounces > cfg.max_reflections) return WalkStatus::reflection_limit;
            }
        }
        reflections += bounces;
    }
    // Project onto the nearest Dirichlet face (lowest index on ties).
    double best = std::numeric_limits<double>::infinity();
    std::size_t bf = 0;
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (!domain.face(i).bc.is_dirichlet()) continue;
        const double d = domain.face(i).distance(z);
        if (d < best) best = d, bf = i;
    }
    const Face& f = domain.face(bf);
    Point3 proj = z - f.plane.normal * f.plane.signed_distance(z);
    if (!f.contains_in_plane(f.to_local(proj))) {
        // Nearest point lies on the face boundary.
        double bd = std::numeric_limits<double>::infinity();
        const auto& vs = f.vertices;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const Point3 a = vs[i], d = vs[(i + 1) % vs.size()] - a;
            const double t = std::clamp(dot(z - a, d) / norm2(d), 0.0, 1.0);
            const Point3 c = a + d * t;
            if (distance(z, c) < bd) bd = distance(z, c), proj = c;
        }
    }
    out.point = proj;
    out.face = bf;
    out.value = f.bc.value;
    out.steps = steps;
    out.reflections = reflections;
    return WalkStatus::ok;
}

template <class Rng>
ExitSample3 sample_exit3(const DomainSpec3D& domain, Point3 start, const WalkConfig& cfg, Rng& rng) {
    ExitSample3 out;
    const WalkStatus s = try_sample_exit3(domain, start, cfg, rng, out);
    if (s != WalkStatus::ok) throw WalkError(s);
    return out;
}

struct SpatialSampler {
    using Sample = ExitSample3;
    const DomainSpec3D& domain;
    WalkStatus sample(Point3 start, const WalkConfig& cfg, PathRng& rng, ExitSample3& out) const {
        return try_sample_exit3(domain, start, cfg, rng, out);
    }
};

inline Estimate estimate_u3(const DomainSpec3D& domain, Point3 point, std::uint64_t n_paths, const WalkConfig& cfg,
                            const EstimatorOptions& opt = {}) {
    validate(cfg, domain);
    detail::require_interior(domain, point, 0);
    const std::uint64_t seed = cfg.rng_seed;
    return estimate_points(SpatialSampler{domain}, std::span<const Point3>(&point, 1),
                           std::span<const std::uint64_t>(&seed, 1), n_paths, cfg, opt)
        .front();
}

/// Values on an nx x ny x nz grid over the bounding box; node (i, j, k) is
/// stored at (k * ny + j) * nx + i.
struct FieldGrid3 {
    Point3 lo, hi;
    std::size_t nx = 0, ny = 0, nz = 0;
    std::vector<double> u, u_stderr;
    std::vector<char> mask;
    std::uint64_t resampled = 0;
    bool flagged = false;

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (k * ny + j) * nx + i; }
    Point3 node(std::size_t i, std::size_t j, std::size_t k) const {
        auto at = [](double a, double b, std::size_t t, std::size_t n) { return a + (b - a) * double(t) / double(n - 1); };
        return {at(lo.x, hi.x, i, nx), at(lo.y, hi.y, j, ny), at(lo.z, hi.z, k, nz)};
    }
};

/// Estimates at every interior node; node seeds are derive_seed(seed, index).
inline FieldGrid3 estimate_field3(const DomainSpec3D& domain, std::size_t nx, std::size_t ny, std::size_t nz,
                                  std::uint64_t n_paths, const WalkConfig& cfg, const EstimatorOptions& opt = {}) {
    if (nx < 2 || ny < 2 || nz < 2) throw ConfigError("grid needs at least 2 nodes per axis");
    validate(cfg, domain);
    FieldGrid3 g;
    g.lo = domain.lo(), g.hi = domain.hi();
    g.nx = nx, g.ny = ny, g.nz = nz;
    const std::size_t total = nx * ny * nz;
    g.u.assign(total, 0.0), g.u_stderr.assign(total, 0.0), g.mask.assign(total, 0);
    const double tol = 1e-9 * domain.diameter();
    std::vector<Point3> pts;
    std::vector<std::uint64_t> seeds;
    std::vector<std::size_t> where;
    for (std::size_t k = 0; k < nz; ++k)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                const Point3 p = g.node(i, j, k);
                if (!contains(domain, p) || boundary_distance(domain, p) <= tol) continue;
                const std::size_t idx = g.index(i, j, k);
                g.mask[idx] = 1;
                pts.push_back(p);
                seeds.push_back(derive_seed(cfg.rng_seed, idx));
                where.push_back(idx);
            }
    if (pts.empty()) return g;
    const auto es = estimate_points(SpatialSampler{domain}, std::span<const Point3>(pts),
                                    std::span<const std::uint64_t>(seeds), n_paths, cfg, opt);
    for (std::size_t m = 0; m < pts.size(); ++m) {
        g.u[where[m]] = es[m].mean;
        g.u_stderr[where[m]] = es[m].std_error;
        g.resampled += es[m].resampled;
        g.flagged = g.flagged || es[m].flagged;
    }
    return g;
}

namespace shapes {

/// Axis-aligned box [lo, hi] with one boundary condition per face, in the
/// order x-, x+, y-, y+, z-, z+.
inline DomainSpec3D box(Point3 lo, Point3 hi, const std::array<BoundaryCondition, 6>& bc) {
    const Point3 v000{lo.x, lo.y, lo.z}, v100{hi.x, lo.y, lo.z}, v010{lo.x, hi.y, lo.z}, v110{hi.x, hi.y, lo.z};
    const Point3 v001{lo.x, lo.y, hi.z}, v101{hi.x, lo.y, hi.z}, v011{lo.x, hi.y, hi.z}, v111{hi.x, hi.y, hi.z};
    std::vector<Face> f(6);
    f[0].vertices = {v000, v001, v011, v010};
    f[1].vertices = {v100, v110, v111, v101};
    f[2].vertices = {v000, v100, v101, v001};
    f[3].vertices = {v010, v011, v111, v110};
    f[4].vertices = {v000, v010, v110, v100};
    f[5].vertices = {v001, v101, v111, v011};
    for (int i = 0; i < 6; ++i) f[i].bc = bc[i];
    return DomainSpec3D(std::move(f));
}

/// Unit cube, u = 0 on x = 0 and u = 1 on x = 1, other faces insulated.
inline DomainSpec3D insulated_cube() {
    const auto N = BoundaryCondition::neumann();
    return box({0, 0, 0}, {1, 1, 1},
               {BoundaryCondition::dirichlet(0.0), BoundaryCondition::dirichlet(1.0), N, N, N, N});
}

/// The L-shaped region (0,0),(3,0),(3,1),(2,1),(2,2),(0,2) extruded over
/// z in [0, 1]. The wall y = 2 holds value 1, the wall x = 3 value 0, and
/// every other face is insulated.
inline DomainSpec3D l_prism() {
    const std::array<Point2, 6> L{{{0, 0}, {3, 0}, {3, 1}, {2, 1}, {2, 2}, {0, 2}}};
    const auto N = BoundaryCondition::neumann();
    std::vector<Face> f;
    Face bottom, top;
    for (int i = 5; i >= 0; --i) bottom.vertices.push_back({L[i].x, L[i].y, 0.0});
    for (int i = 0; i < 6; ++i) top.vertices.push_back({L[i].x, L[i].y, 1.0});
    bottom.bc = top.bc = N;
    f.push_back(bottom);
    f.push_back(top);
    for (int i = 0; i < 6; ++i) {
        const Point2 a = L[i], b = L[(i + 1) % 6];
        Face w;
        w.vertices = {{a.x, a.y, 0.0}, {b.x, b.y, 0.0}, {b.x, b.y, 1.0}, {a.x, a.y, 1.0}};
        w.bc = N;
        if (i == 1) w.bc = BoundaryCondition::dirichlet(0.0);  // x = 3
        if (i == 4) w.bc = BoundaryCondition::dirichlet(1.0);  // y = 2
        f.push_back(w);
    }
    return DomainSpec3D(std::move(f));
}

}  // namespace shapes

}  // namespace rwos
