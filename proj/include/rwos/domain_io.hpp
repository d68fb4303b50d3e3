#pragma once
/**
 * @file domain_io.hpp
 * @brief JSON domain-spec documents: parsing with position-annotated syntax
 * errors and schema checks, and serialization back to text.
 *
 * 2D documents list boundary pieces in positive cyclic order. A piece carries
 * either a quadrilateral "side" label (1..4) or an explicit "bc" object; the
 * two forms cannot be mixed within one document. 3D documents list planar
 * polygonal faces, each with a "bc" object.
 */

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rwos/domain.hpp"
#include "rwos/errors.hpp"
#include "rwos/geometry2d.hpp"
#include "rwos/wos3d.hpp"

namespace rwos {

using Json = nlohmann::ordered_json;

namespace detail {

/// 1-based line and column of a byte offset.
inline std::string text_position(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline Json parse_json_text(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // The offset reported by the parser points one past the offending byte.
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        std::string what = e.what();
        const auto colon = what.find("syntax error");
        if (colon != std::string::npos) what = what.substr(colon);
        throw SpecError("JSON " + what + " (at " + text_position(text, at) + ")");
    }
}

inline const Json& member(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw SpecError(where + ": expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw SpecError(where + ": missing \"" + key + "\"");
    return *it;
}

inline double number(const Json& v, const std::string& where) {
    if (!v.is_number()) throw SpecError(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SpecError(where + ": non-finite number");
    return x;
}

inline Point2 point2(const Json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) throw SpecError(where + ": expected [x, y]");
    return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
}

inline Point3 point3(const Json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3) throw SpecError(where + ": expected [x, y, z]");
    return {number(v[0], where + "[0]"), number(v[1], where + "[1]"), number(v[2], where + "[2]")};
}

inline BoundaryCondition boundary_condition(const Json& v, const std::string& where) {
    const Json& type = member(v, "type", where);
    if (!type.is_string()) throw SpecError(where + ".type: expected a string");
    const std::string t = type.get<std::string>();
    if (t == "dirichlet") return BoundaryCondition::dirichlet(number(member(v, "value", where), where + ".value"));
    if (t == "neumann") {
        if (v.contains("value") && number(v["value"], where + ".value") != 0.0)
            throw SpecError(where + ": only zero Neumann data is supported");
        return BoundaryCondition::neumann();
    }
    throw SpecError(where + ".type: unknown boundary condition \"" + t + "\"");
}

inline Json to_json(const BoundaryCondition& bc) {
    Json j;
    j["type"] = bc.is_dirichlet() ? "dirichlet" : "neumann";
    if (bc.is_dirichlet()) j["value"] = bc.value;
    return j;
}

inline int dimension_of(const Json& doc) {
    const Json& d = member(doc, "dimension", "document");
    if (!d.is_number_integer() || (d.get<int>() != 2 && d.get<int>() != 3))
        throw SpecError("document.dimension: must be 2 or 3");
    return d.get<int>();
}

inline Piece piece_geometry(const Json& p, const std::string& where) {
    const Json& kind = member(p, "kind", where);
    if (!kind.is_string()) throw SpecError(where + ".kind: expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "segment")
        return Segment{point2(member(p, "from", where), where + ".from"), point2(member(p, "to", where), where + ".to")};
    if (k == "arc") {
        Arc a;
        a.center = point2(member(p, "center", where), where + ".center");
        a.radius = number(member(p, "radius", where), where + ".radius");
        a.angle_start = number(member(p, "from_angle", where), where + ".from_angle");
        a.angle_end = number(member(p, "to_angle", where), where + ".to_angle");
        if (p.contains("ccw")) {
            if (!p["ccw"].is_boolean()) throw SpecError(where + ".ccw: expected true or false");
            a.ccw = p["ccw"].get<bool>();
        }
        return a;
    }
    throw SpecError(where + ".kind: unknown piece kind \"" + k + "\"");
}

inline DirichletValues dirichlet_values(const Json& doc) {
    DirichletValues v;
    if (!doc.contains("dirichlet_values")) return v;
    const Json& dv = doc["dirichlet_values"];
    if (!dv.is_object()) throw SpecError("dirichlet_values: expected an object");
    for (auto it = dv.begin(); it != dv.end(); ++it) {
        const std::string where = "dirichlet_values." + it.key();
        if (it.key() == "2")
            v.side2 = number(it.value(), where);
        else if (it.key() == "4")
            v.side4 = number(it.value(), where);
        else
            throw SpecError(where + ": only sides 2 and 4 carry Dirichlet values");
    }
    return v;
}

}  // namespace detail

/// Parses a 2D domain-spec document.
inline DomainSpec2D parse_domain(std::string_view text) {
    const Json doc = detail::parse_json_text(text);
    if (detail::dimension_of(doc) != 2) throw SpecError("document.dimension: expected 2");
    const Json& pieces = detail::member(doc, "pieces", "document");
    if (!pieces.is_array() || pieces.empty()) throw SpecError("pieces: expected a non-empty array");

    std::size_t n_side = 0, n_bc = 0;
    for (const auto& p : pieces) {
        if (p.is_object() && p.contains("side")) ++n_side;
        if (p.is_object() && p.contains("bc")) ++n_bc;
    }
    const bool labeled = n_side > 0;
    if (labeled && n_side != pieces.size()) throw SpecError("pieces: either every piece has a side label or none has");
    if (!labeled && n_bc != pieces.size()) throw SpecError("pieces: every piece needs a side label or a bc object");
    if (!labeled && doc.contains("dirichlet_values"))
        throw SpecError("dirichlet_values: only allowed with side labels");

    if (labeled) {
        const DirichletValues values = detail::dirichlet_values(doc);
        std::vector<LabeledPiece> out;
        std::vector<std::size_t> with_bc;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const std::string where = "pieces[" + std::to_string(i) + "]";
            const Json& s = detail::member(pieces[i], "side", where);
            if (!s.is_number_integer()) throw SpecError(where + ".side: expected an integer");
            out.push_back({detail::piece_geometry(pieces[i], where), s.get<int>()});
            if (pieces[i].contains("bc")) with_bc.push_back(i);
        }
        DomainSpec2D d = DomainSpec2D::labeled(std::move(out), values);
        for (std::size_t i : with_bc) {
            const std::string where = "pieces[" + std::to_string(i) + "]";
            if (detail::boundary_condition(pieces[i]["bc"], where + ".bc") != d.piece(i).bc)
                throw SpecError(where + ": wrong boundary condition for side " + std::to_string(d.piece(i).side));
        }
        return d;
    }

    std::vector<BoundaryPiece> out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const std::string where = "pieces[" + std::to_string(i) + "]";
        out.push_back({detail::piece_geometry(pieces[i], where),
                       detail::boundary_condition(pieces[i]["bc"], where + ".bc"), 0});
    }
    return DomainSpec2D::general(std::move(out));
}

/// Parses a 3D domain-spec document.
inline DomainSpec3D parse_domain3(std::string_view text) {
    const Json doc = detail::parse_json_text(text);
    if (detail::dimension_of(doc) != 3) throw SpecError("document.dimension: expected 3");
    const Json& faces = detail::member(doc, "faces", "document");
    if (!faces.is_array() || faces.size() < 4) throw SpecError("faces: expected an array of at least four faces");
    std::vector<Face> out;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const std::string where = "faces[" + std::to_string(i) + "]";
        const Json& verts = detail::member(faces[i], "vertices", where);
        if (!verts.is_array() || verts.size() < 3) throw SpecError(where + ".vertices: expected at least three vertices");
        Face f;
        for (std::size_t k = 0; k < verts.size(); ++k)
            f.vertices.push_back(detail::point3(verts[k], where + ".vertices[" + std::to_string(k) + "]"));
        f.bc = detail::boundary_condition(detail::member(faces[i], "bc", where), where + ".bc");
        out.push_back(std::move(f));
    }
    return DomainSpec3D(std::move(out));
}

/// Dimension declared by a document (2 or 3).
inline int document_dimension(std::string_view text) { return detail::dimension_of(detail::parse_json_text(text)); }

inline Json to_json(const DomainSpec2D& d) {
    Json doc;
    doc["dimension"] = 2;
    Json pieces = Json::array();
    for (const auto& bp : d.pieces()) {
        Json p;
        if (const auto* s = std::get_if<Segment>(&bp.geometry)) {
            p["kind"] = "segment";
            p["from"] = {s->start.x, s->start.y};
            p["to"] = {s->end.x, s->end.y};
        } else {
            const auto& a = std::get<Arc>(bp.geometry);
            p["kind"] = "arc";
            p["center"] = {a.center.x, a.center.y};
            p["radius"] = a.radius;
            p["from_angle"] = a.angle_start;
            p["to_angle"] = a.angle_end;
            p["ccw"] = a.ccw;
        }
        if (d.is_labeled())
            p["side"] = bp.side;
        else
            p["bc"] = detail::to_json(bp.bc);
        pieces.push_back(std::move(p));
    }
    doc["pieces"] = std::move(pieces);
    if (d.is_labeled()) doc["dirichlet_values"] = {{"2", d.dirichlet_values().side2}, {"4", d.dirichlet_values().side4}};
    return doc;
}

inline Json to_json(const DomainSpec3D& d) {
    Json doc;
    doc["dimension"] = 3;
    Json faces = Json::array();
    for (const auto& f : d.faces()) {
        Json verts = Json::array();
        for (const auto& v : f.vertices) verts.push_back({v.x, v.y, v.z});
        faces.push_back({{"vertices", std::move(verts)}, {"bc", detail::to_json(f.bc)}});
    }
    doc["faces"] = std::move(faces);
    return doc;
}

inline std::string serialize(const DomainSpec2D& d) { return to_json(d).dump(2) + "\n"; }
inline std::string serialize(const DomainSpec3D& d) { return to_json(d).dump(2) + "\n"; }

/// Whole file as a string; SpecError if it cannot be read.
inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace rwos
