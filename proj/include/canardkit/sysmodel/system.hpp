#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "canardkit/algebra/polynomial.hpp"
#include "canardkit/sysmodel/expression_parser.hpp"

namespace canardkit {

/// eps*x' = f(x, y, mu, eps), y' = g(x, y, mu, eps) in slow time.
struct SPSystem {
    std::string name;
    Polynomial f;
    Polynomial g;
    bool affine_in_y = false;
    /// Critical manifold supplied by the user; required when f is not affine in y.
    std::optional<Polynomial> F0;
};

/// A planar polynomial vector field (dx/dt, dy/dt).
struct VectorField {
    Polynomial dx;
    Polynomial dy;
};

inline SPSystem make_system(std::string name, Polynomial f, Polynomial g, std::optional<Polynomial> F0 = std::nullopt) {
    if (f.depends_on(Var::u) || g.depends_on(Var::u))
        throw Error(ErrorCode::InvalidArgument, "system '" + name + "' mentions the reserved unknown u");
    if (F0 && (F0->depends_on(Var::y) || F0->depends_on(Var::eps) || F0->depends_on(Var::u)))
        throw Error(ErrorCode::InvalidArgument, "F0 must be a function of x (and possibly mu) only");
    SPSystem s;
    s.name = std::move(name);
    s.affine_in_y = f.degree(Var::y) <= 1;
    s.f = std::move(f);
    s.g = std::move(g);
    s.F0 = std::move(F0);
    return s;
}

/// eps*x' = x + y - x^3/3, y' = mu - x.
inline SPSystem vdp() {
    const Polynomial x = var(Var::x);
    const Polynomial y = var(Var::y);
    const Polynomial mu = var(Var::mu);
    return make_system("vdp", x + y - x.pow(3) * BigRational(1, 3), mu - x);
}

/// The fast-time form x' = f, y' = eps*g, polynomial in every variable.
inline VectorField fast_time_field(const SPSystem& s) { return {s.f, var(Var::eps) * s.g}; }

/// Builds a system from the JSON definition {"name", "f", "g", optional "F0"}.
inline SPSystem parse_system_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(ErrorCode::SyntaxError, std::string("invalid system JSON: ") + e.what(), 1, e.byte);
    }
    auto field = [&](const char* key) -> std::string {
        if (!doc.contains(key) || !doc[key].is_string())
            throw Error(ErrorCode::SyntaxError, std::string("system definition lacks string field '") + key + "'");
        return doc[key].get<std::string>();
    };
    std::optional<Polynomial> F0;
    if (doc.contains("F0")) F0 = parse_polynomial(field("F0"));
    const std::string name = doc.contains("name") ? field("name") : std::string("system");
    return make_system(name, parse_polynomial(field("f")), parse_polynomial(field("g")), std::move(F0));
}

inline std::string system_to_json(const SPSystem& s) {
    nlohmann::ordered_json doc;
    doc["name"] = s.name;
    doc["f"] = s.f.to_string();
    doc["g"] = s.g.to_string();
    if (s.F0) doc["F0"] = s.F0->to_string();
    return doc.dump();
}

/// "vdp" selects the builtin Van der Pol system, anything else is read as a JSON file.
inline SPSystem load_system(const std::string& source) {
    if (source == "vdp") return vdp();
    std::ifstream in(source);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open system file '" + source + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_system_json(buffer.str());
}

} // namespace canardkit
