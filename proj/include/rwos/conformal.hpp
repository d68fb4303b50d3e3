#pragma once
/**
 * @file conformal.hpp
 * @brief Conjugate function method: conformal modulus from Cauchy–Riemann
 * ratios of five-point derivatives, the canonical map f = u + i h u~ on a
 * grid, and marching-squares contours of both components.
 *
 * u solves the Dirichlet–Neumann problem of Q and u~ the one of the
 * conjugate quadrilateral. In any positively oriented orthonormal frame
 * (e1, e2) the Cauchy–Riemann equations give
 *
 *     h = d_e1 u / d_e2 u~ = -d_e2 u / d_e1 u~.
 *
 * The stencil frame is rotated so that grad u makes a 45 degree angle with
 * e1; then neither ratio has a vanishing denominator.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "rwos/domain.hpp"
#include "rwos/errors.hpp"
#include "rwos/estimator.hpp"
#include "rwos/geometry2d.hpp"
#include "rwos/reflection.hpp"
#include "rwos/rng.hpp"
#include "rwos/walker.hpp"

namespace rwos {

struct Derivative {
    double value = 0.0;
    double std_error = 0.0;
};

/// Five-point central difference from estimates at offsets -2D, -D, +D, +2D.
inline Derivative five_point_partial(const std::array<Estimate, 4>& v, double delta) {
    if (!(delta > 0.0)) throw ConfigError("stencil spacing must be positive");
    Derivative d;
    d.value = (-v[3].mean + 8.0 * v[2].mean - 8.0 * v[1].mean + v[0].mean) / (12.0 * delta);
    const double var = v[0].std_error * v[0].std_error + 64.0 * v[1].std_error * v[1].std_error +
                       64.0 * v[2].std_error * v[2].std_error + v[3].std_error * v[3].std_error;
    d.std_error = std::sqrt(var) / (12.0 * delta);
    return d;
}

/// Same formula on plain values (no uncertainty).
inline double five_point_partial(const std::array<double, 4>& v, double delta) {
    return (-v[3] + 8.0 * v[2] - 8.0 * v[1] + v[0]) / (12.0 * delta);
}

struct ModulusConfig {
    std::optional<Point2> eval_point;
    std::optional<double> delta;
    std::optional<double> frame_angle;    // radians; default from a pilot run
    std::uint64_t n_paths = 200000;       // per stencil point, u problem
    std::uint64_t conjugate_paths = 0;    // per stencil point, u~ problem; 0: n_paths
    std::uint64_t seed = 1;
    std::optional<double> epsilon;        // absolute; default 1e-4 * diameter
    std::uint64_t max_steps = 100000;
    unsigned max_reflections = 4;
    EstimatorOptions estimator;
};

/// Stencil spacing as a fraction of the clearance at the evaluation point.
inline constexpr double kDefaultDeltaFraction = 0.25;

struct ModulusResult {
    double h_from_x = std::numeric_limits<double>::quiet_NaN();  // d_e1 u / d_e2 u~
    double h_from_y = std::numeric_limits<double>::quiet_NaN();  // -d_e2 u / d_e1 u~
    double stderr_x = std::numeric_limits<double>::quiet_NaN();
    double stderr_y = std::numeric_limits<double>::quiet_NaN();
    bool x_used = false, y_used = false;
    double h = 0.0;
    double std_error = 0.0;
    double consistency = 0.0;         // |h_from_x - h_from_y| (0 if one ratio was dropped)
    double consistency_stderr = 0.0;  // stderr of that difference
    Point2 eval_point;
    double delta = 0.0;
    double frame_angle = 0.0;
    std::uint64_t n_paths = 0, conjugate_paths = 0;
    std::uint64_t resampled = 0;
    bool flagged = false;
    double mean_steps = 0.0;
};

/// Walk configuration for a domain from the modulus options.
template <class Domain>
WalkConfig modulus_walk_config(const Domain& domain, const ModulusConfig& cfg, std::uint64_t seed) {
    WalkConfig w = default_walk_config(domain, seed);
    if (cfg.epsilon) w.epsilon = *cfg.epsilon;
    w.max_steps = cfg.max_steps;
    w.max_reflections = cfg.max_reflections;
    validate(w, domain);
    return w;
}

/// Interior node of a 101 x 101 grid over the bounding box with the largest
/// distance to the boundary. Ties (within 1e-9 * diameter) go to the node
/// nearest the box center, then to the first in row-major order.
inline Point2 default_eval_point(const DomainSpec2D& domain) {
    const Box2& b = domain.bounds();
    const Point2 mid = (b.lo + b.hi) * 0.5;
    const double tie = 1e-9 * domain.diameter();
    Point2 best{};
    double best_d = -1.0;
    for (int j = 0; j <= 100; ++j) {
        for (int i = 0; i <= 100; ++i) {
            const Point2 p{b.lo.x + (b.hi.x - b.lo.x) * i / 100.0, b.lo.y + (b.hi.y - b.lo.y) * j / 100.0};
            if (!contains(domain, p)) continue;
            const double d = boundary_distance(domain, p);
            if (d > best_d + tie || (d > best_d - tie && distance(p, mid) < distance(best, mid)))
                best_d = std::max(best_d, d), best = p;
        }
    }
    if (best_d <= 0.0) throw SpecError("no interior candidate point found");
    return best;
}

namespace detail {

inline std::array<Point2, 4> stencil(Point2 c, Point2 dir, double delta) {
    return {c - dir * (2.0 * delta), c - dir * delta, c + dir * delta, c + dir * (2.0 * delta)};
}

struct Ratio {
    double value = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    bool used = false;
};

// num / den with delta-method error; unusable if den is within 3 sigma of 0.
inline Ratio ratio(Derivative num, Derivative den, double sign) {
    Ratio r;
    if (!(std::abs(den.value) > 3.0 * den.std_error)) return r;
    r.value = sign * num.value / den.value;
    r.std_error = std::abs(r.value) * std::sqrt(std::pow(num.std_error / num.value, 2) +
                                                std::pow(den.std_error / den.value, 2));
    if (num.value == 0.0) r.std_error = num.std_error / std::abs(den.value);
    r.used = true;
    return r;
}

inline void accumulate(ModulusResult& r, std::span<const Estimate> es) {
    for (const auto& e : es) {
        r.resampled += e.resampled;
        r.flagged = r.flagged || e.flagged;
    }
}

// Seed streams used by estimate_modulus, kept apart by index ranges.
inline constexpr std::uint64_t kPilotStream = 0, kUStream = 16, kConjStream = 32;

}  // namespace detail

/// Conformal modulus M(Q) by the conjugate function method.
inline ModulusResult estimate_modulus(const Quadrilateral& q, const ModulusConfig& cfg) {
    if (cfg.n_paths < 2) throw ConfigError("n_paths must be at least 2");
    const Quadrilateral qc = conjugate(q);
    const WalkGeometry geo(q.domain), geo_c(qc.domain);
    const DomainSpec2D& dom = q.domain;

    ModulusResult r;
    r.eval_point = cfg.eval_point ? *cfg.eval_point : default_eval_point(dom);
    if (!contains(dom, r.eval_point)) throw ConfigError("evaluation point is not inside the domain");
    const double clearance = boundary_distance(dom, r.eval_point);
    r.delta = cfg.delta ? *cfg.delta : kDefaultDeltaFraction * clearance;
    if (!(r.delta > 0.0)) throw ConfigError("stencil spacing must be positive");
    if (!(clearance > 2.0 * r.delta)) {
        std::ostringstream msg;
        msg << "stencil leaves the domain: use a smaller delta (below " << 0.5 * clearance
            << ") or another evaluation point";
        throw ConfigError(msg.str());
    }
    r.n_paths = cfg.n_paths;
    r.conjugate_paths = cfg.conjugate_paths ? cfg.conjugate_paths : cfg.n_paths;

    const WalkConfig walk = modulus_walk_config(dom, cfg, cfg.seed);
    const WalkConfig walk_c = modulus_walk_config(qc.domain, cfg, cfg.seed);
    auto seeds = [&](std::uint64_t stream, std::size_t n) {
        std::vector<std::uint64_t> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = derive_seed(cfg.seed, stream + i);
        return s;
    };

    if (cfg.frame_angle) {
        r.frame_angle = *cfg.frame_angle;
    } else {
        // Pilot: direction of grad u from central differences.
        const Point2 c = r.eval_point;
        const std::array<Point2, 4> pts{c - Point2{r.delta, 0}, c + Point2{r.delta, 0}, c - Point2{0, r.delta},
                                        c + Point2{0, r.delta}};
        const auto s = seeds(detail::kPilotStream, 4);
        const std::uint64_t n_pilot = std::max<std::uint64_t>(kChunkPaths, cfg.n_paths / 16);
        const auto e = estimate_points(PlanarSampler{geo}, std::span<const Point2>(pts),
                                       std::span<const std::uint64_t>(s), n_pilot, walk, cfg.estimator);
        detail::accumulate(r, e);
        const double gx = e[1].mean - e[0].mean, gy = e[3].mean - e[2].mean;
        r.frame_angle = std::atan2(gy, gx) - 0.25 * std::numbers::pi;
    }
    const Point2 e1{std::cos(r.frame_angle), std::sin(r.frame_angle)};
    const Point2 e2{-e1.y, e1.x};

    std::vector<Point2> pts;
    for (Point2 dir : {e1, e2})
        for (Point2 p : detail::stencil(r.eval_point, dir, r.delta)) pts.push_back(p);
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!contains(dom, pts[i])) throw ConfigError("stencil point " + std::to_string(i) + " is outside the domain");

    const auto su = seeds(detail::kUStream, pts.size());
    const auto sc = seeds(detail::kConjStream, pts.size());
    const auto eu = estimate_points(PlanarSampler{geo}, std::span<const Point2>(pts),
                                    std::span<const std::uint64_t>(su), r.n_paths, walk, cfg.estimator);
    const auto ec = estimate_points(PlanarSampler{geo_c}, std::span<const Point2>(pts),
                                    std::span<const std::uint64_t>(sc), r.conjugate_paths, walk_c, cfg.estimator);
    detail::accumulate(r, eu);
    detail::accumulate(r, ec);
    double steps = 0.0;
    for (const auto& e : eu) steps += e.mean_steps * double(e.n_paths);
    for (const auto& e : ec) steps += e.mean_steps * double(e.n_paths);
    r.mean_steps = steps / (8.0 * double(r.n_paths + r.conjugate_paths));

    auto four = [](const std::vector<Estimate>& e, std::size_t off) {
        return std::array<Estimate, 4>{e[off], e[off + 1], e[off + 2], e[off + 3]};
    };
    const Derivative u1 = five_point_partial(four(eu, 0), r.delta);
    const Derivative u2 = five_point_partial(four(eu, 4), r.delta);
    const Derivative w1 = five_point_partial(four(ec, 0), r.delta);
    const Derivative w2 = five_point_partial(four(ec, 4), r.delta);

    const detail::Ratio hx = detail::ratio(u1, w2, 1.0);
    const detail::Ratio hy = detail::ratio(u2, w1, -1.0);
    if (!hx.used && !hy.used)
        throw NumericError("ill-conditioned modulus: both conjugate derivatives are within 3 stderr of zero");
    r.h_from_x = hx.value, r.stderr_x = hx.std_error, r.x_used = hx.used;
    r.h_from_y = hy.value, r.stderr_y = hy.std_error, r.y_used = hy.used;

    double wsum = 0.0, hsum = 0.0;
    for (const auto* t : {&hx, &hy}) {
        if (!t->used) continue;
        const double w = t->std_error > 0.0 ? 1.0 / (t->std_error * t->std_error) : 1e300;
        wsum += w;
        hsum += w * t->value;
    }
    r.h = hsum / wsum;
    r.std_error = std::sqrt(1.0 / wsum);
    if (hx.used && hy.used) {
        r.consistency = std::abs(hx.value - hy.value);
        r.consistency_stderr = std::hypot(hx.std_error, hy.std_error);
    }
    if (!(r.h > 0.0)) throw NumericError("estimated modulus is not positive");
    return r;
}

/// Sampled canonical map on a regular grid over a bounding box. Node (i, j)
/// sits at x_i = lo.x + i (hi.x - lo.x)/(nx - 1), similarly y_j, and is
/// stored at index j * nx + i.
struct FieldGrid {
    Box2 bounds;
    std::size_t nx = 0, ny = 0;
    double h = 1.0;
    std::vector<double> u, u_stderr, v, v_stderr;
    std::vector<char> mask;  // 1: interior node with values
    std::uint64_t resampled = 0;
    bool flagged = false;

    static FieldGrid make(Box2 bounds, std::size_t nx, std::size_t ny) {
        if (nx < 2 || ny < 2) throw ConfigError("grid needs at least 2 x 2 nodes");
        FieldGrid g;
        g.bounds = bounds;
        g.nx = nx, g.ny = ny;
        const std::size_t n = nx * ny;
        g.u.assign(n, 0.0), g.u_stderr.assign(n, 0.0);
        g.v.assign(n, 0.0), g.v_stderr.assign(n, 0.0);
        g.mask.assign(n, 0);
        return g;
    }
    std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
    double x(std::size_t i) const { return bounds.lo.x + (bounds.hi.x - bounds.lo.x) * double(i) / double(nx - 1); }
    double y(std::size_t j) const { return bounds.lo.y + (bounds.hi.y - bounds.lo.y) * double(j) / double(ny - 1); }
    Point2 node(std::size_t i, std::size_t j) const { return {x(i), y(j)}; }
    bool empty() const { return nx == 0 || ny == 0; }
};

/// u of Q and v = h u~ of its conjugate at every interior node of an nx x ny
/// grid over the domain's bounding box.
inline FieldGrid evaluate_map_grid(const Quadrilateral& q, double h, std::size_t nx, std::size_t ny,
                                   std::uint64_t n_paths, const ModulusConfig& cfg) {
    if (!(h > 0.0)) throw ConfigError("modulus must be positive");
    const Quadrilateral qc = conjugate(q);
    const WalkGeometry geo(q.domain), geo_c(qc.domain);
    FieldGrid g = FieldGrid::make(q.domain.bounds(), nx, ny);
    g.h = h;
    const double tol = 1e-9 * q.domain.diameter();
    std::vector<Point2> pts;
    std::vector<std::size_t> where;
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const Point2 p = g.node(i, j);
            if (contains(q.domain, p) && boundary_distance(q.domain, p) > tol) {
                g.mask[g.index(i, j)] = 1;
                pts.push_back(p);
                where.push_back(g.index(i, j));
            }
        }
    if (pts.empty()) return g;
    const WalkConfig walk = modulus_walk_config(q.domain, cfg, cfg.seed);
    const WalkConfig walk_c = modulus_walk_config(qc.domain, cfg, cfg.seed);
    std::vector<std::uint64_t> su(pts.size()), sc(pts.size());
    const std::uint64_t conj_seed = mix64(cfg.seed ^ 0x636F6E6A75676174ULL);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        su[k] = derive_seed(cfg.seed, where[k]);
        sc[k] = derive_seed(conj_seed, where[k]);
    }
    const auto eu = estimate_points(PlanarSampler{geo}, std::span<const Point2>(pts),
                                    std::span<const std::uint64_t>(su), n_paths, walk, cfg.estimator);
    const auto ec = estimate_points(PlanarSampler{geo_c}, std::span<const Point2>(pts),
                                    std::span<const std::uint64_t>(sc), n_paths, walk_c, cfg.estimator);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const std::size_t idx = where[k];
        g.u[idx] = eu[k].mean, g.u_stderr[idx] = eu[k].std_error;
        g.v[idx] = h * ec[k].mean, g.v_stderr[idx] = h * ec[k].std_error;
        g.resampled += eu[k].resampled + ec[k].resampled;
        g.flagged = g.flagged || eu[k].flagged || ec[k].flagged;
    }
    return g;
}

using Polyline = std::vector<Point2>;

struct LevelContours {
    double level = 0.0;
    std::vector<Polyline> lines;
};

enum class GridField { u, v };

/// Marching-squares isolines of one field at the given levels. Cells with a
/// masked corner are skipped; crossings are interpolated linearly along
/// cell edges, and ambiguous saddles are resolved by the cell-center average.
inline std::vector<LevelContours> extract_contours(const FieldGrid& grid, std::span<const double> levels,
                                                   GridField field = GridField::u) {
    if (grid.empty() || grid.nx < 2 || grid.ny < 2) throw ConfigError("cannot contour an empty grid");
    const std::vector<double>& f = field == GridField::u ? grid.u : grid.v;
    const std::size_t nx = grid.nx, ny = grid.ny;
    std::vector<LevelContours> out;
    for (double level : levels) {
        // Crossing points keyed by edge id: 2*node for the edge to the right,
        // 2*node + 1 for the edge upwards.
        std::map<std::size_t, Point2> cross_pt;
        std::vector<std::array<std::size_t, 2>> segs;
        auto edge_point = [&](std::size_t a, std::size_t b, std::size_t key) {
            if (!cross_pt.count(key)) {
                const double fa = f[a], fb = f[b];
                const double t = (level - fa) / (fb - fa);
                const Point2 pa = grid.node(a % nx, a / nx), pb = grid.node(b % nx, b / nx);
                cross_pt[key] = pa + (pb - pa) * t;
            }
            return key;
        };
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            for (std::size_t i = 0; i + 1 < nx; ++i) {
                const std::size_t n00 = grid.index(i, j), n10 = grid.index(i + 1, j);
                const std::size_t n01 = grid.index(i, j + 1), n11 = grid.index(i + 1, j + 1);
                if (!grid.mask[n00] || !grid.mask[n10] || !grid.mask[n01] || !grid.mask[n11]) continue;
                const int code = (f[n00] >= level) | (f[n10] >= level) << 1 | (f[n11] >= level) << 2 |
                                 (f[n01] >= level) << 3;
                if (code == 0 || code == 15) continue;
                // Edges: bottom (n00-n10), right (n10-n11), top (n01-n11), left (n00-n01).
                auto bottom = [&] { return edge_point(n00, n10, 2 * n00); };
                auto right = [&] { return edge_point(n10, n11, 2 * n10 + 1); };
                auto top = [&] { return edge_point(n01, n11, 2 * n01); };
                auto left = [&] { return edge_point(n00, n01, 2 * n00 + 1); };
                const bool center_high = 0.25 * (f[n00] + f[n10] + f[n01] + f[n11]) >= level;
                switch (code) {
                    case 1: case 14: segs.push_back({left(), bottom()}); break;
                    case 2: case 13: segs.push_back({bottom(), right()}); break;
                    case 3: case 12: segs.push_back({left(), right()}); break;
                    case 4: case 11: segs.push_back({right(), top()}); break;
                    case 6: case 9: segs.push_back({bottom(), top()}); break;
                    case 7: case 8: segs.push_back({left(), top()}); break;
                    case 5:
                        if (center_high) segs.push_back({left(), top()}), segs.push_back({bottom(), right()});
                        else segs.push_back({left(), bottom()}), segs.push_back({right(), top()});
                        break;
                    case 10:
                        if (center_high) segs.push_back({left(), bottom()}), segs.push_back({right(), top()});
                        else segs.push_back({left(), top()}), segs.push_back({bottom(), right()});
                        break;
                    default: break;
                }
            }
        }
        // Chain segments through shared edge points.
        std::map<std::size_t, std::vector<std::size_t>> at;
        for (std::size_t s = 0; s < segs.size(); ++s) {
            at[segs[s][0]].push_back(s);
            at[segs[s][1]].push_back(s);
        }
        std::vector<char> used(segs.size(), 0);
        auto next_seg = [&](std::size_t key, std::size_t from) -> std::optional<std::size_t> {
            for (std::size_t s : at[key])
                if (s != from && !used[s]) return s;
            return std::nullopt;
        };
        LevelContours lc;
        lc.level = level;
        for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
            if (used[s0]) continue;
            used[s0] = 1;
            std::vector<std::size_t> keys{segs[s0][0], segs[s0][1]};
            // Extend forward, then backward.
            for (int dir = 0; dir < 2; ++dir) {
                std::size_t cur = s0;
                for (;;) {
                    const std::size_t key = keys.back();
                    const auto s = next_seg(key, cur);
                    if (!s) break;
                    used[*s] = 1;
                    keys.push_back(segs[*s][0] == key ? segs[*s][1] : segs[*s][0]);
                    cur = *s;
                }
                std::reverse(keys.begin(), keys.end());
            }
            Polyline line;
            line.reserve(keys.size());
            for (std::size_t k : keys) line.push_back(cross_pt.at(k));
            lc.lines.push_back(std::move(line));
        }
        out.push_back(std::move(lc));
    }
    return out;
}

}  // namespace rwos
