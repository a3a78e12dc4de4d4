#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "canardkit/algebra/gcd.hpp"
#include "canardkit/fcm/lie.hpp"

namespace canardkit {

inline constexpr unsigned kDefaultMaxPhi = 4;

/// Curvature-index cap: CANARDKIT_MAX_PHI when set, otherwise 4.
inline unsigned max_phi_index() {
    const char* env = std::getenv("CANARDKIT_MAX_PHI");
    if (env == nullptr || *env == '\0') return kDefaultMaxPhi;
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (*end != '\0' || value < 1 || value > 64)
        throw Error(ErrorCode::InvalidArgument, std::string("CANARDKIT_MAX_PHI must be an integer in [1, 64], got '") + env + "'");
    return static_cast<unsigned>(value);
}

struct CurvatureManifold {
    unsigned index = 0;
    /// Normalized: no overall eps factor, coprime integer coefficients, positive leading term.
    Polynomial phi;
    unsigned stripped_eps_power = 0;
};

/// Removes the largest eps power dividing p and its rational content.
inline CurvatureManifold normalize_curvature(unsigned index, const Polynomial& raw) {
    CurvatureManifold c;
    c.index = index;
    if (raw.is_zero()) return c;
    unsigned k = raw.degree(Var::eps);
    for (const auto& [m, coeff] : raw.terms()) k = std::min<unsigned>(k, m[Var::eps]);
    Polynomial stripped;
    for (const auto& [m, coeff] : raw.terms()) stripped.add_term(m.with(Var::eps, static_cast<Monomial::Exponent>(m[Var::eps] - k)), coeff);
    c.phi = integer_primitive(stripped).primitive;
    c.stripped_eps_power = k;
    return c;
}

/// det(X', X'') of the field.
inline Polynomial curvature_determinant(const VectorField& v) {
    const JetVector j = jets(v, 2);
    return j.components[0].dx * j.components[1].dy - j.components[0].dy * j.components[1].dx;
}

/// phi_1..phi_count with phi_1 = det(X', X'') and phi_i = L_V phi_{i-1}, each normalized.
inline std::vector<CurvatureManifold> curvature_chain(const VectorField& v, unsigned count, unsigned max_index = max_phi_index()) {
    if (count > max_index)
        throw Error(ErrorCode::CurvatureIndexLimit,
                    "curvature index " + std::to_string(count) + " exceeds the cap " + std::to_string(max_index));
    std::vector<CurvatureManifold> out;
    if (count == 0) return out;
    out.push_back(normalize_curvature(1, curvature_determinant(v)));
    for (unsigned i = 2; i <= count; ++i) out.push_back(normalize_curvature(i, lie_derivative(out.back().phi, v)));
    return out;
}

inline std::vector<CurvatureManifold> curvature_chain(const SPSystem& s, unsigned count, unsigned max_index = max_phi_index()) {
    return curvature_chain(fast_time_field(s), count, max_index);
}

inline CurvatureManifold curvature_manifold(const SPSystem& s, unsigned index, unsigned max_index = max_phi_index()) {
    if (index < 1) throw Error(ErrorCode::InvalidArgument, "curvature index starts at 1");
    return curvature_chain(s, index, max_index).back();
}

inline nlohmann::ordered_json curvature_to_json(const CurvatureManifold& c) {
    nlohmann::ordered_json doc;
    doc["index"] = c.index;
    doc["stripped_eps_power"] = c.stripped_eps_power;
    doc["phi"] = c.phi.to_string();
    return doc;
}

} // namespace canardkit
