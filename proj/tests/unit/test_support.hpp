#pragma once
// Helpers shared by the unit tests.

#include <random>
#include <string>
#include <vector>

#include "rwos/domain.hpp"
#include "rwos/domain_io.hpp"
#include "rwos/shapes.hpp"

namespace rwos::testing {

inline std::string data_file(const std::string& name) { return std::string(RWOS_DATA_DIR) + "/domains/" + name; }

inline DomainSpec2D load2(const std::string& name) { return parse_domain(read_text_file(data_file(name))); }

/// Every shipped planar domain.
inline std::vector<std::pair<std::string, DomainSpec2D>> planar_domains() {
    std::vector<std::pair<std::string, DomainSpec2D>> out;
    for (const char* n : {"rectangle_0.6.json", "rectangle_1.0.json", "rectangle_1.4.json", "lshape.json",
                          "lshape_conjugate.json", "type_a_2_10_12.json", "type_a_2_10_14.json", "type_a_4_12_18.json",
                          "type_a_6_16_24.json", "type_a_8_22_32.json", "type_b_2_10_12.json", "type_b_2_10_14.json",
                          "type_b_4_12_18.json", "type_b_6_16_24.json", "type_b_8_22_32.json", "disk_quarter.json",
                          "square_left_neumann.json", "strip.json", "mixed_l.json"})
        out.emplace_back(n, load2(n));
    return out;
}

/// Uniform interior points by rejection from the bounding box.
inline std::vector<Point2> interior_points(const DomainSpec2D& d, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> ux(d.bounds().lo.x, d.bounds().hi.x), uy(d.bounds().lo.y, d.bounds().hi.y);
    std::vector<Point2> out;
    while (out.size() < n) {
        const Point2 p{ux(gen), uy(gen)};
        if (contains(d, p) && boundary_distance(d, p) > 1e-9 * d.diameter()) out.push_back(p);
    }
    return out;
}

}  // namespace rwos::testing
