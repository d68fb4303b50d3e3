#pragma once
/**
 * @file walker.hpp
 * @brief Reflected Walk-on-Spheres: one reflected Brownian path from a start
 * point to its first hit of the Dirichlet boundary.
 */

#include <cstddef>
#include <cstdint>
#include <string>

#include "rwos/domain.hpp"
#include "rwos/errors.hpp"
#include "rwos/geometry2d.hpp"
#include "rwos/reflection.hpp"
#include "rwos/rng.hpp"

namespace rwos {

struct WalkConfig {
    double epsilon = 1e-4;            // absolute width of the Dirichlet shell
    std::uint64_t max_steps = 100000;
    unsigned max_reflections = 4;
    std::uint64_t rng_seed = 1;
};

/// Default configuration for a domain: epsilon = 1e-4 * diameter.
template <class Domain>
WalkConfig default_walk_config(const Domain& domain, std::uint64_t seed = 1) {
    WalkConfig cfg;
    cfg.epsilon = 1e-4 * domain.diameter();
    cfg.rng_seed = seed;
    return cfg;
}

template <class Domain>
void validate(const WalkConfig& cfg, const Domain& domain) {
    if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(cfg.epsilon < 0.1 * domain.diameter()))
        throw ConfigError("epsilon must be below 0.1 * domain diameter");
    if (cfg.max_steps < 1) throw ConfigError("max_steps must be at least 1");
    if (cfg.max_reflections < 1) throw ConfigError("max_reflections must be at least 1");
}

struct ExitSample {
    Point2 point;
    std::size_t piece = 0;
    int side = 0;
    double value = 0.0;  // Dirichlet value at the exit piece
    std::uint64_t steps = 0;
    std::uint64_t reflections = 0;
};

enum class WalkStatus { ok, stalled, step_limit, reflection_limit };

inline const char* to_string(WalkStatus s) {
    switch (s) {
        case WalkStatus::ok: return "ok";
        case WalkStatus::stalled: return "stalled walker (walk radius underflow)";
        case WalkStatus::step_limit: return "step limit exceeded";
        case WalkStatus::reflection_limit: return "reflection limit exceeded";
    }
    return "?";
}

class WalkError : public NumericError {
public:
    explicit WalkError(WalkStatus s) : NumericError(to_string(s)), status_(s) {}
    WalkStatus status() const { return status_; }

private:
    WalkStatus status_;
};

/// Observer hook called after every jump (and reflection) of a walk.
struct NoWalkObserver {
    void operator()(Point2 /*z*/, bool /*reflected*/) const {}
};

/**
 * Non-throwing sampler used by the estimator. Iterates: while the distance
 * to the Dirichlet boundary exceeds epsilon, jump to a uniform point on the
 * circle of the current walk radius; a point that lands beyond the active
 * Neumann piece is mapped back by that piece's reflection, and near a
 * folding corner it is folded back into the corner's wedge. Next to a
 * snapping corner the jump starts from the corner itself. On exit the
 * position is projected orthogonally onto the Dirichlet boundary.
 */
template <class Rng, class Observer = NoWalkObserver>
WalkStatus try_sample_exit(const WalkGeometry& geo, Point2 start, const WalkConfig& cfg, Rng& rng,
                           ExitSample& out, Observer&& observe = {}) {
    const double stall = geo.domain().length_tolerance();
    Point2 z = start;
    std::uint64_t steps = 0, reflections = 0;
    for (;;) {
        const WalkRadius wr = geo.walk_radius(z);
        if (wr.dirichlet_distance <= cfg.epsilon) break;
        if (steps >= cfg.max_steps) return WalkStatus::step_limit;
        if (wr.radius < stall) return WalkStatus::stalled;
        if (wr.snap) {
            const SnapCorner& c = geo.snap_corners()[*wr.snap];
            Point2 q;
            do q = c.vertex + uniform_unit_vector2(rng) * wr.radius;
            while (!c.inside(q));
            z = q;
            ++steps;
            observe(z, false);
            continue;
        }
        const Point2 from = z;
        z = z + uniform_unit_vector2(rng) * wr.radius;
        ++steps;
        unsigned bounces = 0;
        if (wr.active && geo.crossed(*wr.active, from, z)) {
            // One application of the active map returns the point; further
            // bounces only happen when rounding leaves it on the far side.
            do {
                if (bounces == cfg.max_reflections) return WalkStatus::reflection_limit;
                z = apply(geo.map(*wr.active), z);
                ++bounces;
            } while (detail::far_side_offset(geo.compiled(*wr.active), z) > 0.0);
            reflections += bounces;
        } else if (wr.corner && geo.corners()[*wr.corner].exits_through_pieces(from, z)) {
            bounces = geo.corners()[*wr.corner].fold(z, cfg.max_reflections);
            if (bounces > cfg.max_reflections) return WalkStatus::reflection_limit;
            reflections += bounces;
        }
        observe(z, bounces > 0);
    }
    const DirichletProjection proj = project_to_dirichlet(geo.domain(), z);
    out.point = proj.point;
    out.piece = proj.piece;
    out.side = proj.side;
    out.value = geo.domain().piece(proj.piece).bc.value;
    out.steps = steps;
    out.reflections = reflections;
    return WalkStatus::ok;
}

/// Throwing form: one exit sample, or WalkError on stall / cap violations.
template <class Rng>
ExitSample sample_exit(const WalkGeometry& geo, Point2 start, const WalkConfig& cfg, Rng& rng) {
    ExitSample out;
    const WalkStatus s = try_sample_exit(geo, start, cfg, rng, out);
    if (s != WalkStatus::ok) throw WalkError(s);
    return out;
}

}  // namespace rwos
