#pragma once
/**
 * @file output.hpp
 * @brief Deterministic artifact writers: CSV grids, SVG contour meshes and
 * JSON run manifests.
 */

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rwos/conformal.hpp"
#include "rwos/domain.hpp"
#include "rwos/errors.hpp"
#include "rwos/geometry2d.hpp"
#include "rwos/wos3d.hpp"

namespace rwos {

inline constexpr const char* kToolVersion = "1.0.0";

/// Decimal text of x with at most 9 significant digits (shortest form that
/// rounds to the 9-digit value). Independent of locale and platform.
inline std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 9);
    if (r.ec != std::errc{}) throw NumericError("number formatting failed");
    return std::string(buf, r.ptr);
}

/// Same with 10 significant digits, for printed references.
inline std::string format_number10(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 10);
    if (r.ec != std::errc{}) throw NumericError("number formatting failed");
    return std::string(buf, r.ptr);
}

/// 64-bit FNV-1a hash.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[std::size_t(i)] = digits[v & 0xF];
    return s;
}

/// Grid CSV: header x,y,u,u_stderr,v,v_stderr; one row per unmasked node.
inline std::string grid_csv(const FieldGrid& g) {
    std::string out = "x,y,u,u_stderr,v,v_stderr\n";
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            if (!g.mask[k]) continue;
            for (double x : {g.x(i), g.y(j), g.u[k], g.u_stderr[k], g.v[k]}) out += format_number(x) + ",";
            out += format_number(g.v_stderr[k]) + "\n";
        }
    return out;
}

/// 3D field CSV: header x,y,z,u,u_stderr; one row per interior node.
inline std::string field3_csv(const FieldGrid3& g) {
    std::string out = "x,y,z,u,u_stderr\n";
    for (std::size_t k = 0; k < g.nz; ++k)
        for (std::size_t j = 0; j < g.ny; ++j)
            for (std::size_t i = 0; i < g.nx; ++i) {
                const std::size_t n = g.index(i, j, k);
                if (!g.mask[n]) continue;
                const Point3 p = g.node(i, j, k);
                for (double x : {p.x, p.y, p.z, g.u[n]}) out += format_number(x) + ",";
                out += format_number(g.u_stderr[n]) + "\n";
            }
    return out;
}

/// Evenly spaced interior levels lo + k (hi - lo)/(count + 1), k = 1..count.
inline std::vector<double> contour_levels(double lo, double hi, int count) {
    if (count < 1) throw ConfigError("contour level count must be at least 1");
    std::vector<double> v;
    for (int k = 1; k <= count; ++k) v.push_back(lo + (hi - lo) * k / double(count + 1));
    return v;
}

namespace detail {

inline std::string svg_path_for(const Piece& piece) {
    std::string d;
    const Point2 a = start_point(piece);
    d += "M" + format_number(a.x) + "," + format_number(-a.y);
    if (const auto* s = std::get_if<Segment>(&piece)) {
        d += " L" + format_number(s->end.x) + "," + format_number(-s->end.y);
    } else {
        const auto& arc = std::get<Arc>(piece);
        // Split into two halves so every SVG arc command sweeps less than 2pi.
        for (Point2 p : {arc.mid_point(), arc.end_point()}) {
            const int sweep_flag = arc.ccw ? 0 : 1;  // the y axis is flipped
            d += " A" + format_number(arc.radius) + "," + format_number(arc.radius) + " 0 0," +
                 std::to_string(sweep_flag) + " " + format_number(p.x) + "," + format_number(-p.y);
        }
    }
    return d;
}

inline void svg_contour_groups(std::string& out, const std::vector<LevelContours>& levels, const char* cls) {
    for (const auto& lc : levels) {
        out += "<g class=\"" + std::string(cls) + "\" data-level=\"" + format_number(lc.level) + "\">\n";
        for (const auto& line : lc.lines) {
            out += "<polyline points=\"";
            for (std::size_t k = 0; k < line.size(); ++k) {
                if (k) out += " ";
                out += format_number(line[k].x) + "," + format_number(-line[k].y);
            }
            out += "\"/>\n";
        }
        out += "</g>\n";
    }
}

}  // namespace detail

/// Self-contained SVG: domain outline, u-contours and v-contours, one <g>
/// per level. The y axis points up (coordinates are written as (x, -y)).
inline std::string contour_svg(const DomainSpec2D& domain, const std::vector<LevelContours>& u_levels,
                               const std::vector<LevelContours>& v_levels) {
    const Box2& b = domain.bounds();
    const double pad = 0.02 * domain.diameter();
    const double w = b.hi.x - b.lo.x + 2 * pad, h = b.hi.y - b.lo.y + 2 * pad;
    const double stroke = 0.003 * domain.diameter();
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + format_number(b.lo.x - pad) + " " +
           format_number(-b.hi.y - pad) + " " + format_number(w) + " " + format_number(h) + "\">\n";
    out += "<style>path.boundary{fill:none;stroke:#000;stroke-width:" + format_number(2 * stroke) +
           "}g.u polyline{fill:none;stroke:#c0392b;stroke-width:" + format_number(stroke) +
           "}g.v polyline{fill:none;stroke:#2471a3;stroke-width:" + format_number(stroke) + "}</style>\n";
    std::string d;
    for (const auto& p : domain.pieces()) d += (d.empty() ? "" : " ") + detail::svg_path_for(p.geometry);
    out += "<path class=\"boundary\" d=\"" + d + "\"/>\n";
    detail::svg_contour_groups(out, u_levels, "u");
    detail::svg_contour_groups(out, v_levels, "v");
    out += "</svg>\n";
    return out;
}

/// Sidecar describing a run; everything except wall_clock_seconds is a
/// deterministic function of the command line and the domain file.
struct RunManifest {
    std::string command;
    std::string domain_file;
    std::uint64_t domain_hash = 0;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    std::uint64_t n_paths = 0;
    std::optional<double> delta;
    std::optional<Point2> eval_point;
    std::vector<std::size_t> grid;
    double wall_clock_seconds = 0.0;
    std::uint64_t resampled = 0;
    std::string tool_version = kToolVersion;
};

inline std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["domain_file"] = m.domain_file;
    j["domain_fnv1a64"] = hex64(m.domain_hash);
    j["seed"] = m.seed;
    j["epsilon"] = m.epsilon;
    j["n_paths"] = m.n_paths;
    if (m.delta) j["delta"] = *m.delta;
    if (m.eval_point) j["eval_point"] = {m.eval_point->x, m.eval_point->y};
    if (!m.grid.empty()) j["grid"] = m.grid;
    j["resampled"] = m.resampled;
    j["tool_version"] = m.tool_version;
    j["wall_clock_seconds"] = m.wall_clock_seconds;
    return j.dump(2) + "\n";
}

inline void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path);
    out.write(text.data(), std::streamsize(text.size()));
    if (!out) throw ConfigError("write failed: " + path);
}

/// Path of the manifest sidecar for an output file.
inline std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

}  // namespace rwos
