#include <gtest/gtest.h>

#include <cmath>
#include <regex>

#include "rwos/output.hpp"
#include "test_support.hpp"

using namespace rwos;
using namespace rwos::testing;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t at = s.find(needle); at != std::string::npos; at = s.find(needle, at + 1)) ++n;
    return n;
}

}  // namespace

TEST(Output, Fnv1aVectors) {
    EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
    EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
    EXPECT_EQ(hex64(fnv1a64("foobar")), "85944171f73967e8");
}

TEST(Output, NumberFormat) {
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(format_number(1e-7), "1e-07");
    EXPECT_EQ(format_number(-2.25), "-2.25");
    EXPECT_EQ(format_number(123456789012.0), "1.23456789e+11");
    EXPECT_EQ(format_number10(1.5081540123), "1.508154012");
    EXPECT_EQ(std::stod(format_number(0.1 + 0.2)), 0.3);
}

TEST(Output, GridCsv) {
    FieldGrid g = FieldGrid::make(Box2{{0, 0}, {1, 2}}, 2, 3);
    g.mask[g.index(1, 1)] = 1;
    g.u[g.index(1, 1)] = 0.25;
    g.u_stderr[g.index(1, 1)] = 0.001;
    g.v[g.index(1, 1)] = 1.0 / 3.0;
    EXPECT_EQ(grid_csv(g), "x,y,u,u_stderr,v,v_stderr\n1,1,0.25,0.001,0.333333333,0\n");
}

TEST(Output, ContourLevels) {
    const auto v = contour_levels(0.0, 1.0, 9);
    ASSERT_EQ(v.size(), 9u);
    EXPECT_DOUBLE_EQ(v.front(), 0.1);
    EXPECT_DOUBLE_EQ(v.back(), 0.9);
    EXPECT_THROW(contour_levels(0.0, 1.0, 0), ConfigError);
}

TEST(Output, SvgHasOneGroupPerLevel) {
    const DomainSpec2D d = shapes::l_shape();
    FieldGrid g = FieldGrid::make(d.bounds(), 31, 21);
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            g.mask[k] = contains(d, g.node(i, j)) && boundary_distance(d, g.node(i, j)) > 1e-9;
            g.u[k] = g.x(i) / 3.0;
            g.v[k] = g.y(j);
        }
    const auto uv = contour_levels(0.0, 1.0, 9);
    const auto vv = contour_levels(0.0, 2.0, 9);
    const std::string svg = contour_svg(d, extract_contours(g, uv, GridField::u), extract_contours(g, vv, GridField::v));
    EXPECT_EQ(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0), 0u);
    EXPECT_EQ(count(svg, "<g class=\"u\""), 9u);
    EXPECT_EQ(count(svg, "<g class=\"v\""), 9u);
    EXPECT_EQ(count(svg, "</g>"), 18u);
    EXPECT_EQ(count(svg, "class=\"boundary\""), 1u);
    EXPECT_EQ(count(svg, "<polyline"), 18u);  // straight levels of a linear field
    EXPECT_EQ(svg.substr(svg.size() - 7), "</svg>\n");
}

TEST(Output, SvgArcsAreSplit) {
    const std::string svg = contour_svg(shapes::disk_quarter_indicator(), {}, {});
    EXPECT_EQ(count(svg, " A1,1 0 0,"), 8u);
}

TEST(Output, ManifestLayout) {
    RunManifest m;
    m.command = "modulus";
    m.domain_file = "lshape.json";
    m.domain_hash = fnv1a64("a");
    m.seed = 7;
    m.epsilon = 0.0005;
    m.n_paths = 1000;
    m.delta = 0.25;
    m.eval_point = Point2{1, 1};
    m.wall_clock_seconds = 1.5;
    const auto j = nlohmann::ordered_json::parse(manifest_json(m));
    EXPECT_EQ(j["domain_fnv1a64"], "af63dc4c8601ec8c");
    EXPECT_EQ(j["tool_version"], kToolVersion);
    EXPECT_EQ(j["eval_point"][0], 1.0);
    EXPECT_FALSE(j.contains("grid"));
    EXPECT_EQ(j.items().begin().key(), "command");
    EXPECT_EQ((--j.end()).key(), "wall_clock_seconds");
    EXPECT_EQ(manifest_path("out/map.csv"), "out/map.csv.manifest.json");
}
