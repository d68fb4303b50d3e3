#pragma once
/**
 * @file domain.hpp
 * @brief Boundary-value problems on planar domains bounded by segments and
 * circular arcs, and the quadrilateral labeling used by the conjugate
 * function method.
 *
 * A labeled domain carries a side label 1..4 on every piece. Sides 1 and 3
 * are zero-Neumann, sides 2 and 4 are Dirichlet with per-side constants
 * (0 and 1 by default). Unlabeled ("general") domains carry an explicit
 * boundary condition per piece instead; they can be solved but not used as
 * quadrilaterals.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rwos/errors.hpp"
#include "rwos/geometry2d.hpp"

namespace rwos {

struct BoundaryCondition {
    enum class Kind { dirichlet, neumann_zero };

    Kind kind = Kind::neumann_zero;
    double value = 0.0;

    static BoundaryCondition dirichlet(double v) { return {Kind::dirichlet, v}; }
    static BoundaryCondition neumann() { return {Kind::neumann_zero, 0.0}; }
    bool is_dirichlet() const { return kind == Kind::dirichlet; }
    bool operator==(const BoundaryCondition&) const = default;
};

struct BoundaryPiece {
    Piece geometry;
    BoundaryCondition bc;
    int side = 0;  // 1..4 on labeled domains, 0 otherwise
    bool operator==(const BoundaryPiece&) const = default;
};

struct DirichletValues {
    double side2 = 0.0;
    double side4 = 1.0;
    bool operator==(const DirichletValues&) const = default;
};

inline bool is_neumann_side(int side) { return side == 1 || side == 3; }

/// A piece of geometry with its quadrilateral side label.
struct LabeledPiece {
    Piece geometry;
    int side = 0;
};

class DomainSpec2D {
public:
    /// Quadrilateral-labeled domain; boundary conditions follow from the labels.
    static DomainSpec2D labeled(std::vector<LabeledPiece> pieces, DirichletValues values = {}) {
        DomainSpec2D d;
        d.labeled_ = true;
        d.values_ = values;
        d.pieces_.reserve(pieces.size());
        for (auto& p : pieces) {
            BoundaryCondition bc = BoundaryCondition::neumann();
            if (p.side == 2) bc = BoundaryCondition::dirichlet(values.side2);
            if (p.side == 4) bc = BoundaryCondition::dirichlet(values.side4);
            d.pieces_.push_back({std::move(p.geometry), bc, p.side});
        }
        d.finalize();
        return d;
    }

    /// Domain with an explicit boundary condition on every piece.
    static DomainSpec2D general(std::vector<BoundaryPiece> pieces) {
        DomainSpec2D d;
        d.pieces_ = std::move(pieces);
        for (auto& p : d.pieces_) p.side = 0;
        d.finalize();
        return d;
    }

    const std::vector<BoundaryPiece>& pieces() const { return pieces_; }
    std::size_t size() const { return pieces_.size(); }
    const BoundaryPiece& piece(std::size_t i) const { return pieces_[i]; }
    const std::vector<Point2>& splitting_points() const { return splitting_; }
    double diameter() const { return diameter_; }
    const Box2& bounds() const { return bounds_; }
    double signed_area() const { return area_; }
    bool is_labeled() const { return labeled_; }
    const DirichletValues& dirichlet_values() const { return values_; }

    /// Absolute length below which geometry is considered coincident.
    double length_tolerance() const { return 1e-12 * diameter_; }

    bool has_dirichlet() const {
        for (const auto& p : pieces_)
            if (p.bc.is_dirichlet()) return true;
        return false;
    }

    bool operator==(const DomainSpec2D&) const = default;

private:
    DomainSpec2D() = default;

    void finalize();

    std::vector<BoundaryPiece> pieces_;
    std::vector<Point2> splitting_;
    DirichletValues values_{};
    Box2 bounds_{};
    double diameter_ = 0.0;
    double area_ = 0.0;
    bool labeled_ = false;
};

namespace detail {

// Contribution of one piece to  (1/2) * closed-curve integral of (x dy - y dx).
inline double area_term(const Piece& piece) {
    if (const auto* s = std::get_if<Segment>(&piece)) return 0.5 * cross(s->start, s->end);
    const auto& a = std::get<Arc>(piece);
    const double t0 = a.angle_start;
    const double sw = a.sweep();
    const double t1 = t0 + sw;
    const double r = a.radius;
    return 0.5 * (r * r * sw + a.center.x * r * (std::sin(t1) - std::sin(t0)) -
                  a.center.y * r * (std::cos(t1) - std::cos(t0)));
}

inline double approximate_diameter(const std::vector<BoundaryPiece>& pieces) {
    std::vector<Point2> samples;
    for (const auto& p : pieces) {
        const int n = std::holds_alternative<Arc>(p.geometry) ? 128 : 1;
        for (int k = 0; k <= n; ++k) samples.push_back(point_along(p.geometry, double(k) / n));
    }
    double best = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            best = std::max(best, norm2(samples[i] - samples[j]));
    return std::sqrt(best);
}

inline void validate_labels(const std::vector<BoundaryPiece>& pieces) {
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (pieces[i].side < 1 || pieces[i].side > 4)
            throw SpecError("piece " + std::to_string(i) + ": side label must be 1..4");
    // Collapse the cyclic label sequence into runs.
    std::vector<int> runs;
    for (const auto& p : pieces)
        if (runs.empty() || runs.back() != p.side) runs.push_back(p.side);
    if (runs.size() > 1 && runs.front() == runs.back()) runs.pop_back();
    std::array<int, 5> count{};
    for (int s : runs) ++count[s];
    for (int s = 1; s <= 4; ++s) {
        if (count[s] == 0) throw SpecError("side " + std::to_string(s) + " is missing");
        if (count[s] > 1) throw SpecError("side " + std::to_string(s) + " is not contiguous");
    }
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const int next = runs[(k + 1) % runs.size()];
        if (next != runs[k] % 4 + 1)
            throw SpecError("side labels are not in cyclic order 1,2,3,4 along the boundary");
    }
}

}  // namespace detail

inline void DomainSpec2D::finalize() {
    if (pieces_.size() < 2) throw SpecError("a domain needs at least two boundary pieces");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& bp = pieces_[i];
        const std::string where = "piece " + std::to_string(i);
        if (bp.bc.is_dirichlet() && !std::isfinite(bp.bc.value))
            throw SpecError(where + ": Dirichlet value is not finite");
        if (const auto* s = std::get_if<Segment>(&bp.geometry)) {
            if (!is_finite(s->start) || !is_finite(s->end))
                throw SpecError(where + ": non-finite coordinates");
        } else {
            const auto& a = std::get<Arc>(bp.geometry);
            if (!is_finite(a.center) || !std::isfinite(a.angle_start) || !std::isfinite(a.angle_end))
                throw SpecError(where + ": non-finite arc parameters");
            if (!(a.radius > 0.0) || !std::isfinite(a.radius))
                throw SpecError(where + ": arc radius must be positive");
        }
    }
    diameter_ = detail::approximate_diameter(pieces_);
    if (!(diameter_ > 0.0)) throw SpecError("degenerate domain (zero diameter)");

    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (const auto* s = std::get_if<Segment>(&pieces_[i].geometry))
            if (distance(s->start, s->end) <= 1e-12 * diameter_)
                throw SpecError("piece " + std::to_string(i) + ": degenerate segment");
    }
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const std::size_t j = (i + 1) % pieces_.size();
        if (distance(end_point(pieces_[i].geometry), start_point(pieces_[j].geometry)) >
            1e-9 * diameter_)
            throw SpecError("open chain at piece " + std::to_string(i));
    }
    area_ = 0.0;
    for (const auto& p : pieces_) area_ += detail::area_term(p.geometry);
    if (!(area_ > 0.0))
        throw SpecError("boundary is not positively oriented (signed area " +
                        std::to_string(area_) + ")");
    if (labeled_) detail::validate_labels(pieces_);

    bounds_ = {};
    for (const auto& p : pieces_) expand_box(bounds_, p.geometry);

    splitting_.clear();
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const std::size_t j = (i + 1) % pieces_.size();
        if (!pieces_[i].bc.is_dirichlet() && !pieces_[j].bc.is_dirichlet())
            splitting_.push_back(end_point(pieces_[i].geometry));
    }
}

/// Constant boundary value on a Dirichlet side of a labeled domain.
inline double dirichlet_value(const DomainSpec2D& domain, int side) {
    if (side == 2) return domain.dirichlet_values().side2;
    if (side == 4) return domain.dirichlet_values().side4;
    throw SpecError("side " + std::to_string(side) + " is not a Dirichlet side");
}

/// True iff p is strictly inside the domain. Uses the winding number of the
/// boundary around p: segments contribute their subtended angle, arcs the
/// subtended angle of their chord plus a full turn when p lies between the
/// arc and its chord. Points within ~1e-12 diameter of the boundary may be
/// classified either way.
inline bool contains(const DomainSpec2D& domain, Point2 p) {
    double total = 0.0;
    for (const auto& bp : domain.pieces()) {
        if (const auto* s = std::get_if<Segment>(&bp.geometry)) {
            const Point2 a = s->start - p, b = s->end - p;
            total += std::atan2(cross(a, b), dot(a, b));
            continue;
        }
        const auto& arc = std::get<Arc>(bp.geometry);
        const bool inside_circle = norm2(p - arc.center) < arc.radius * arc.radius;
        const double turn = arc.ccw ? kTwoPi : -kTwoPi;
        if (arc.full_circle()) {
            if (inside_circle) total += turn;
            continue;
        }
        const Point2 ps = arc.start_point(), pe = arc.end_point();
        const Point2 a = ps - p, b = pe - p;
        total += std::atan2(cross(a, b), dot(a, b));
        const double side = cross(pe - ps, p - ps);
        if (inside_circle && (arc.ccw ? side < 0.0 : side > 0.0)) total += turn;
    }
    return std::lround(total / kTwoPi) == 1;
}

/// Nearest point on the Dirichlet boundary; ties go to the lowest piece index.
struct DirichletProjection {
    Point2 point;
    std::size_t piece = 0;
    int side = 0;
    double distance = 0.0;
};

inline DirichletProjection project_to_dirichlet(const DomainSpec2D& domain, Point2 p) {
    DirichletProjection best;
    best.distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < domain.size(); ++i) {
        const auto& bp = domain.piece(i);
        if (!bp.bc.is_dirichlet()) continue;
        const Point2 q = closest_point(p, bp.geometry);
        const double d = distance(p, q);
        if (d < best.distance) best = {q, i, bp.side, d};
    }
    if (!std::isfinite(best.distance)) throw SpecError("domain has no Dirichlet boundary");
    return best;
}

/// Distance from p to the whole boundary.
inline double boundary_distance(const DomainSpec2D& domain, Point2 p) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& bp : domain.pieces()) d = std::min(d, distance_to_piece(p, bp.geometry));
    return d;
}

/// Q = (domain; z1, z2, z3, z4); z_j is where side j begins.
struct Quadrilateral {
    DomainSpec2D domain;
    std::array<Point2, 4> vertices;

    explicit Quadrilateral(DomainSpec2D d) : domain(std::move(d)) {
        if (!domain.is_labeled()) throw SpecError("domain has no quadrilateral side labels");
        const auto& ps = domain.pieces();
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const auto& prev = ps[(i + ps.size() - 1) % ps.size()];
            if (prev.side != ps[i].side) vertices[ps[i].side - 1] = start_point(ps[i].geometry);
        }
    }
    bool operator==(const Quadrilateral&) const = default;
};

/// Conjugate quadrilateral (z2, z3, z4, z1): old side j becomes side j-1.
inline Quadrilateral conjugate(const Quadrilateral& q) {
    std::vector<LabeledPiece> pieces;
    pieces.reserve(q.domain.size());
    for (const auto& bp : q.domain.pieces())
        pieces.push_back({bp.geometry, bp.side == 1 ? 4 : bp.side - 1});
    return Quadrilateral(DomainSpec2D::labeled(std::move(pieces), q.domain.dirichlet_values()));
}

}  // namespace rwos
