#include <gtest/gtest.h>

#include <filesystem>

#include "rwos/domain_io.hpp"
#include "rwos/shapes.hpp"

using namespace rwos;

namespace {

std::string data_file(const std::string& name) { return std::string(RWOS_DATA_DIR) + "/domains/" + name; }

std::string spec_error(const std::string& text) {
    try {
        parse_domain(text);
    } catch (const SpecError& e) {
        return e.what();
    }
    return "";
}

const char* kSquare = R"({ "dimension": 2,
  "pieces": [
    {"kind":"segment","from":[0,0],"to":[1,0],"side":1},
    {"kind":"segment","from":[1,0],"to":[1,1],"side":2},
    {"kind":"segment","from":[1,1],"to":[0,1],"side":3},
    {"kind":"segment","from":[0,1],"to":[0,0],"side":4}
  ],
  "dirichlet_values": {"2": 0.0, "4": 1.0} })";

}  // namespace

TEST(DomainIo, ParsesUnitSquare) {
    const DomainSpec2D d = parse_domain(kSquare);
    EXPECT_EQ(d.size(), 4u);
    EXPECT_TRUE(d.is_labeled());
    EXPECT_TRUE(d.splitting_points().empty());
    EXPECT_TRUE(d.piece(1).bc.is_dirichlet());
    EXPECT_EQ(d.piece(3).bc.value, 1.0);
}

TEST(DomainIo, ParsesArcs) {
    const char* disk = R"({"dimension":2,"pieces":[
      {"kind":"arc","center":[0,0],"radius":1,"from_angle":0,"to_angle":1.5707963267948966,"ccw":true,"side":4},
      {"kind":"arc","center":[0,0],"radius":1,"from_angle":1.5707963267948966,"to_angle":3.141592653589793,"side":1},
      {"kind":"arc","center":[0,0],"radius":1,"from_angle":3.141592653589793,"to_angle":4.71238898038469,"side":2},
      {"kind":"arc","center":[0,0],"radius":1,"from_angle":4.71238898038469,"to_angle":6.283185307179586,"side":3}]})";
    const DomainSpec2D d = parse_domain(disk);
    EXPECT_NEAR(d.signed_area(), std::numbers::pi, 1e-12);
    EXPECT_TRUE(std::get<Arc>(d.piece(1).geometry).ccw);
}

TEST(DomainIo, SyntaxErrorReportsPosition) {
    const std::string msg = spec_error("{\n  \"dimension\": 2,\n  \"pieces\": [ , ]\n}");
    EXPECT_NE(msg.find("syntax error"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 3, column 15"), std::string::npos) << msg;
}

TEST(DomainIo, SchemaErrorsNameTheField) {
    EXPECT_NE(spec_error(R"({"pieces":[]})").find("missing \"dimension\""), std::string::npos);
    EXPECT_NE(spec_error(R"({"dimension":2,"pieces":[{"kind":"spline","side":1}]})").find("unknown piece kind"),
              std::string::npos);
    EXPECT_NE(spec_error(R"({"dimension":2,"pieces":[{"kind":"segment","from":[0],"to":[1,0],"side":1}]})")
                  .find("pieces[0].from: expected [x, y]"),
              std::string::npos);
    EXPECT_NE(spec_error(R"({"dimension":4,"pieces":[]})").find("must be 2 or 3"), std::string::npos);
}

TEST(DomainIo, InvariantViolationsAreReported) {
    std::string open = kSquare;
    open.replace(open.find("[0,1],\"to\":[0,0]"), 5, "[0,2]");
    EXPECT_EQ(spec_error(open), "open chain at piece 2");
    std::string wrong_bc = kSquare;
    wrong_bc.replace(wrong_bc.find("\"side\":1"), 8, "\"side\":1,\"bc\":{\"type\":\"dirichlet\",\"value\":0}");
    EXPECT_NE(spec_error(wrong_bc).find("wrong boundary condition for side 1"), std::string::npos);
    std::string mixed = kSquare;
    mixed.replace(mixed.find(",\"side\":1"), 9, ",\"bc\":{\"type\":\"neumann\"}");
    EXPECT_NE(spec_error(mixed).find("either every piece has a side label"), std::string::npos);
}

TEST(DomainIo, GeneralDomainWithExplicitConditions) {
    const DomainSpec2D d = shapes::mixed_l();
    const DomainSpec2D back = parse_domain(serialize(d));
    EXPECT_EQ(back, d);
    EXPECT_FALSE(back.is_labeled());
}

TEST(DomainIo, RoundTripOfEveryShippedDomain) {
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(std::string(RWOS_DATA_DIR) + "/domains")) {
        const std::string text = read_text_file(entry.path().string());
        if (document_dimension(text) == 2) {
            const DomainSpec2D d = parse_domain(text);
            EXPECT_EQ(serialize(d), text) << entry.path();
            EXPECT_EQ(parse_domain(serialize(d)), d);
        } else {
            const DomainSpec3D d = parse_domain3(text);
            EXPECT_EQ(serialize(d), text) << entry.path();
        }
        ++seen;
    }
    EXPECT_GE(seen, 20);
}

TEST(DomainIo, ShippedFilesMatchBuilders) {
    EXPECT_EQ(parse_domain(read_text_file(data_file("lshape.json"))), shapes::l_shape());
    EXPECT_EQ(parse_domain(read_text_file(data_file("rectangle_1.4.json"))), shapes::rectangle(1.4));
    const auto a = shapes::angles24(2, 10, 12);
    EXPECT_EQ(parse_domain(read_text_file(data_file("type_b_2_10_12.json"))), shapes::type_b(a.a, a.b, a.c));
}

TEST(DomainIo, ThreeDimensionalDocument) {
    const char* tet = R"({"dimension":3,"faces":[
      {"vertices":[[0,0,0],[0,1,0],[1,0,0]],"bc":{"type":"dirichlet","value":1}},
      {"vertices":[[0,0,0],[1,0,0],[0,0,1]],"bc":{"type":"neumann"}},
      {"vertices":[[0,0,0],[0,0,1],[0,1,0]],"bc":{"type":"neumann"}},
      {"vertices":[[1,0,0],[0,1,0],[0,0,1]],"bc":{"type":"dirichlet","value":0}}]})";
    const DomainSpec3D d = parse_domain3(tet);
    EXPECT_EQ(d.faces().size(), 4u);
    EXPECT_THROW(parse_domain(tet), SpecError);
    EXPECT_THROW(parse_domain3(kSquare), SpecError);
}
