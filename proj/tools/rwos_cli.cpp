/// @file rwos_cli.cpp
/// @brief Command-line front end: solve, modulus, map, reference, field3d.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rwos/rwos.hpp"

namespace {

using namespace rwos;

/// Exit codes: 2 for invalid input or configuration, 3 for numeric failure.
constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

struct Common {
    std::string domain;
    std::uint64_t seed = 1;
    std::optional<double> epsilon;
    unsigned threads = 0;
    std::uint64_t paths = 0;
};

std::vector<double> parse_list(const std::string& text, std::size_t count, const char* what) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": cannot parse \"" + item + "\" as a number");
        }
    }
    if (count && v.size() != count)
        throw ConfigError(std::string(what) + ": expected " + std::to_string(count) + " comma-separated values");
    return v;
}

std::vector<std::size_t> parse_grid(const std::string& text, std::size_t count) {
    std::vector<std::size_t> g;
    for (double x : parse_list(text, count, "--grid")) {
        if (!(x >= 2.0 && x == double(std::size_t(x)))) throw ConfigError("--grid: sizes must be integers >= 2");
        g.push_back(std::size_t(x));
    }
    return g;
}

EstimatorOptions estimator_options(const Common& c) {
    EstimatorOptions o;
    o.threads = c.threads;
    return o;
}

void add_common(CLI::App* cmd, Common& c, bool domain = true) {
    if (domain) cmd->add_option("--domain", c.domain, "Domain spec file (JSON)")->required();
    cmd->add_option("--seed", c.seed, "Master seed");
    cmd->add_option("--epsilon", c.epsilon, "Absolute width of the Dirichlet shell (default 1e-4 * diameter)");
    cmd->add_option("--threads", c.threads, "Worker threads (default: RWOS_THREADS, else all cores)");
}

RunManifest manifest_for(const std::string& command, const Common& c, const std::string& text, double epsilon) {
    RunManifest m;
    m.command = command;
    m.domain_file = c.domain;
    m.domain_hash = fnv1a64(text);
    m.seed = c.seed;
    m.epsilon = epsilon;
    m.n_paths = c.paths;
    return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) std::cout << (i ? "\t" : "") << cells[i];
    std::cout << "\n";
}

void print_field(const char* name, const std::string& value) { std::cout << name << "\t" << value << "\n"; }

int cmd_solve(const Common& c, const std::string& point, const std::string& manifest) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string text = read_text_file(c.domain);
    Estimate e;
    double eps = 0.0;
    if (document_dimension(text) == 3) {
        const DomainSpec3D d = parse_domain3(text);
        const auto p = parse_list(point, 3, "--point");
        WalkConfig w = default_walk_config(d, c.seed);
        if (c.epsilon) w.epsilon = *c.epsilon;
        eps = w.epsilon;
        e = estimate_u3(d, {p[0], p[1], p[2]}, c.paths, w, estimator_options(c));
    } else {
        const DomainSpec2D d = parse_domain(text);
        const auto p = parse_list(point, 2, "--point");
        WalkConfig w = default_walk_config(d, c.seed);
        if (c.epsilon) w.epsilon = *c.epsilon;
        eps = w.epsilon;
        e = estimate_u(WalkGeometry(d), {p[0], p[1]}, c.paths, w, estimator_options(c));
    }
    print_row({format_number(e.mean), format_number(e.std_error), std::to_string(e.n_paths),
               format_number(e.mean_steps)});
    if (!manifest.empty()) {
        RunManifest m = manifest_for("solve", c, text, eps);
        m.resampled = e.resampled;
        m.wall_clock_seconds = seconds_since(t0);
        write_text_file(manifest, manifest_json(m));
    }
    return 0;
}

struct ModulusFlags {
    std::string point;
    std::optional<double> delta;
    bool reciprocal = false;
    std::string manifest;
};

int cmd_modulus(const Common& c, const ModulusFlags& f) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string text = read_text_file(c.domain);
    const Quadrilateral q(parse_domain(text));
    ModulusConfig cfg;
    if (!f.point.empty()) {
        const auto p = parse_list(f.point, 2, "--point");
        cfg.eval_point = Point2{p[0], p[1]};
    }
    cfg.delta = f.delta;
    cfg.n_paths = c.paths;
    cfg.seed = c.seed;
    cfg.epsilon = c.epsilon;
    cfg.estimator = estimator_options(c);
    const ModulusResult r = estimate_modulus(q, cfg);

    print_field("h", format_number(r.h));
    print_field("h_from_x", r.x_used ? format_number(r.h_from_x) : "unused");
    print_field("h_from_y", r.y_used ? format_number(r.h_from_y) : "unused");
    print_field("stderr", format_number(r.std_error));
    print_field("consistency", format_number(r.consistency));
    print_field("consistency_stderr", format_number(r.consistency_stderr));
    print_field("eval_point", format_number(r.eval_point.x) + "," + format_number(r.eval_point.y));
    print_field("delta", format_number(r.delta));
    print_field("mean_steps", format_number(r.mean_steps));
    print_field("resampled", std::to_string(r.resampled));
    std::uint64_t resampled = r.resampled;
    if (f.reciprocal) {
        // Same stencil on the conjugate quadrilateral, from an independent stream.
        ModulusConfig cc = cfg;
        cc.eval_point = r.eval_point;
        cc.delta = r.delta;
        cc.seed = derive_seed(c.seed, 0x7265636970ULL);
        const ModulusResult rc = estimate_modulus(conjugate(q), cc);
        const double product = r.h * rc.h;
        const double product_se = product * std::hypot(r.std_error / r.h, rc.std_error / rc.h);
        print_field("conjugate_h", format_number(rc.h));
        print_field("conjugate_stderr", format_number(rc.std_error));
        print_field("conjugate_consistency", format_number(rc.consistency));
        print_field("conjugate_consistency_stderr", format_number(rc.consistency_stderr));
        print_field("product", format_number(product));
        print_field("product_stderr", format_number(product_se));
        print_field("conjugate_resampled", std::to_string(rc.resampled));
        resampled += rc.resampled;
    }
    if (!f.manifest.empty()) {
        RunManifest m = manifest_for("modulus", c, text, c.epsilon ? *c.epsilon : 1e-4 * q.domain.diameter());
        m.delta = r.delta;
        m.eval_point = r.eval_point;
        m.resampled = resampled;
        m.wall_clock_seconds = seconds_since(t0);
        write_text_file(f.manifest, manifest_json(m));
    }
    return 0;
}

struct MapFlags {
    std::string grid, out, svg;
    int levels = 9;
    std::optional<double> modulus;
    std::uint64_t modulus_paths = 100000;
};

int cmd_map(const Common& c, const MapFlags& f) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string text = read_text_file(c.domain);
    const Quadrilateral q(parse_domain(text));
    const auto g = parse_grid(f.grid, 2);
    if (f.levels < 1) throw ConfigError("--levels must be at least 1");
    ModulusConfig cfg;
    cfg.seed = c.seed;
    cfg.epsilon = c.epsilon;
    cfg.estimator = estimator_options(c);
    std::uint64_t resampled = 0;
    std::optional<ModulusResult> mr;
    double h = 0.0;
    if (f.modulus) {
        h = *f.modulus;
    } else {
        ModulusConfig mc = cfg;
        mc.n_paths = f.modulus_paths;
        mc.seed = derive_seed(c.seed, 0x6d6f64ULL);
        mr = estimate_modulus(q, mc);
        h = mr->h;
        resampled += mr->resampled;
    }
    const FieldGrid grid = evaluate_map_grid(q, h, g[0], g[1], c.paths, cfg);
    resampled += grid.resampled;
    write_text_file(f.out, grid_csv(grid));
    RunManifest m = manifest_for("map", c, text, c.epsilon ? *c.epsilon : 1e-4 * q.domain.diameter());
    m.grid = g;
    if (mr) m.delta = mr->delta, m.eval_point = mr->eval_point;
    m.resampled = resampled;
    if (!f.svg.empty()) {
        const auto ul = contour_levels(0.0, 1.0, f.levels);
        const auto vl = contour_levels(0.0, h, f.levels);
        const std::string svg = contour_svg(q.domain, extract_contours(grid, ul, GridField::u),
                                            extract_contours(grid, vl, GridField::v));
        write_text_file(f.svg, svg);
    }
    m.wall_clock_seconds = seconds_since(t0);
    const std::string mj = manifest_json(m);
    write_text_file(manifest_path(f.out), mj);
    if (!f.svg.empty()) write_text_file(manifest_path(f.svg), mj);
    print_field("modulus", format_number(h));
    print_field("nodes", std::to_string(std::count(grid.mask.begin(), grid.mask.end(), 1)));
    print_field("resampled", std::to_string(resampled));
    return 0;
}

int cmd_reference(const std::string& type, const std::string& params) {
    double value = 0.0;
    if (type == "rect") {
        value = rectangle_modulus(parse_list(params, 1, "--params")[0]);
    } else if (type == "typeA" || type == "typeB") {
        const auto p = parse_list(params, 3, "--params");
        const double s = std::numbers::pi / 24.0;
        const ArcQuadAngles a{p[0] * s, p[1] * s, p[2] * s};
        a.validate();
        value = type == "typeA" ? type_a_modulus(a) : type_b_modulus(a);
    } else {
        throw ConfigError("--type must be rect, typeA or typeB");
    }
    std::cout << format_number10(value) << "\n";
    return 0;
}

int cmd_field3d(const Common& c, const std::string& grid_text, const std::string& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string text = read_text_file(c.domain);
    const DomainSpec3D d = parse_domain3(text);
    const auto g = parse_grid(grid_text, 3);
    WalkConfig w = default_walk_config(d, c.seed);
    if (c.epsilon) w.epsilon = *c.epsilon;
    const FieldGrid3 f = estimate_field3(d, g[0], g[1], g[2], c.paths, w, estimator_options(c));
    write_text_file(out, field3_csv(f));
    RunManifest m = manifest_for("field3d", c, text, w.epsilon);
    m.grid = g;
    m.resampled = f.resampled;
    m.wall_clock_seconds = seconds_since(t0);
    write_text_file(manifest_path(out), manifest_json(m));
    print_field("nodes", std::to_string(std::count(f.mask.begin(), f.mask.end(), 1)));
    print_field("resampled", std::to_string(f.resampled));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reflected walk-on-spheres solver for mixed Dirichlet/Neumann Laplace problems"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    Common solve_c, mod_c, map_c, f3_c;
    std::string solve_point, solve_manifest;
    auto* solve = app.add_subcommand("solve", "Estimate u at one point");
    add_common(solve, solve_c);
    solve->add_option("--point", solve_point, "X,Y (or X,Y,Z for 3D domains)")->required();
    solve->add_option("--paths", solve_c.paths, "Number of paths")->required();
    solve->add_option("--manifest", solve_manifest, "Write a run manifest to this file");

    ModulusFlags mf;
    auto* modulus = app.add_subcommand("modulus", "Conformal modulus of a quadrilateral");
    add_common(modulus, mod_c);
    modulus->add_option("--point", mf.point, "Evaluation point X,Y (default: max-clearance grid node)");
    modulus->add_option("--delta", mf.delta, "Stencil spacing (default: clearance / 4)");
    modulus->add_option("--paths", mod_c.paths, "Paths per stencil point")->required();
    modulus->add_flag("--reciprocal", mf.reciprocal, "Also estimate the conjugate modulus and the product");
    modulus->add_option("--manifest", mf.manifest, "Write a run manifest to this file");

    MapFlags mp;
    auto* map = app.add_subcommand("map", "Canonical conformal map on a grid");
    add_common(map, map_c);
    map->add_option("--grid", mp.grid, "NX,NY")->required();
    map->add_option("--paths", map_c.paths, "Paths per grid node")->required();
    map->add_option("--out", mp.out, "Grid CSV output")->required();
    map->add_option("--svg", mp.svg, "Contour SVG output");
    map->add_option("--levels", mp.levels, "Contour levels per field");
    map->add_option("--modulus", mp.modulus, "Known modulus h (skips its estimation)");
    map->add_option("--modulus-paths", mp.modulus_paths, "Paths per stencil point when estimating h");

    std::string ref_type, ref_params;
    auto* reference = app.add_subcommand("reference", "Closed-form reference modulus");
    reference->add_option("--type", ref_type, "rect | typeA | typeB")->required();
    reference->add_option("--params", ref_params, "h, or m,n,r for angles m pi/24, n pi/24, r pi/24")->required();

    std::string f3_grid, f3_out;
    auto* field3d = app.add_subcommand("field3d", "Solution of a 3D polyhedral problem on a grid");
    add_common(field3d, f3_c);
    field3d->add_option("--grid", f3_grid, "NX,NY,NZ")->required();
    field3d->add_option("--paths", f3_c.paths, "Paths per grid node")->required();
    field3d->add_option("--out", f3_out, "Field CSV output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*solve) return cmd_solve(solve_c, solve_point, solve_manifest);
        if (*modulus) return cmd_modulus(mod_c, mf);
        if (*map) return cmd_map(map_c, mp);
        if (*reference) return cmd_reference(ref_type, ref_params);
        if (*field3d) return cmd_field3d(f3_c, f3_grid, f3_out);
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const SpecError& e) {
        std::cerr << "invalid domain: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
