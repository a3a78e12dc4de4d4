#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "canardkit/sysmodel/critical_manifold.hpp"

namespace canardkit {

enum class Method { gspm, fcm };

inline std::string_view method_name(Method m) noexcept { return m == Method::gspm ? "gspm" : "fcm"; }

/// F_0..F_N and mu_0..mu_{N-1} of a canard expansion at one fold.
struct CanardExpansion {
    unsigned order = 0;
    std::vector<RationalFunction> F;
    std::vector<BigRational> mu;
    FoldPoint fold;
    Method method = Method::gspm;
    std::string system;
};

/// Horner evaluation of mu_0 + mu_1 eps + ... + mu_degree eps^degree (all terms by default).
inline double mu_series_eval(const CanardExpansion& e, double eps, std::optional<unsigned> degree = std::nullopt) {
    if (e.mu.empty()) throw Error(ErrorCode::InvalidArgument, "expansion carries no mu coefficients");
    const std::size_t last = degree ? *degree : e.mu.size() - 1;
    if (last >= e.mu.size())
        throw Error(ErrorCode::InvalidArgument, "mu series known only through degree " + std::to_string(e.mu.size() - 1));
    double acc = 0.0;
    for (std::size_t k = last + 1; k-- > 0;) acc = acc * eps + to_double(e.mu[k]);
    return acc;
}

inline nlohmann::ordered_json expansion_to_json(const CanardExpansion& e) {
    nlohmann::ordered_json doc;
    doc["method"] = std::string(method_name(e.method));
    doc["order"] = e.order;
    if (!e.system.empty()) doc["system"] = e.system;
    nlohmann::ordered_json fold;
    fold["x0"] = e.fold.exact_x0 ? to_string(*e.fold.exact_x0) : std::to_string(e.fold.x0);
    fold["y0"] = e.fold.exact_y0 ? to_string(*e.fold.exact_y0) : std::to_string(e.fold.y0);
    doc["fold"] = fold;
    doc["mu"] = nlohmann::ordered_json::array();
    for (const auto& m : e.mu) doc["mu"].push_back(to_string(m));
    doc["F"] = nlohmann::ordered_json::array();
    for (const auto& f : e.F) doc["F"].push_back({{"num", f.num().to_string()}, {"den", f.den().to_string()}});
    return doc;
}

/// Reads the export format back; "fold" and "system" are optional.
inline CanardExpansion expansion_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(ErrorCode::SyntaxError, std::string("invalid expansion JSON: ") + e.what(), 1, e.byte);
    }
    try {
        CanardExpansion e;
        const std::string method = doc.at("method").get<std::string>();
        if (method != "gspm" && method != "fcm") throw Error(ErrorCode::SyntaxError, "unknown method '" + method + "'");
        e.method = method == "gspm" ? Method::gspm : Method::fcm;
        e.order = doc.at("order").get<unsigned>();
        if (doc.contains("system")) e.system = doc["system"].get<std::string>();
        for (const auto& m : doc.at("mu")) e.mu.push_back(parse_rational(m.get<std::string>()));
        const ParseOptions opts{.allow_u = false};
        for (const auto& f : doc.at("F"))
            e.F.emplace_back(parse_polynomial(f.at("num").get<std::string>(), opts),
                             parse_polynomial(f.at("den").get<std::string>(), opts));
        if (doc.contains("fold")) {
            const BigRational x0 = parse_rational(doc["fold"].at("x0").get<std::string>());
            e.fold = e.F.empty() ? FoldPoint{to_double(x0), 0.0, x0, std::nullopt} : exact_fold(e.F[0], x0);
        }
        if (e.F.size() != e.order + 1 || e.mu.size() != e.order)
            throw Error(ErrorCode::SyntaxError, "expansion of order " + std::to_string(e.order) + " needs " +
                                                    std::to_string(e.order + 1) + " F entries and " +
                                                    std::to_string(e.order) + " mu entries");
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::SyntaxError, std::string("malformed expansion JSON: ") + ex.what());
    }
}

/// Affine-in-u candidate F_k = (n0 + u*n1)/den with polynomial parts free of u.
struct AffineCandidate {
    Polynomial n0;
    Polynomial n1;
    Polynomial den;
};

inline AffineCandidate split_affine_in_u(const RationalFunction& r) {
    if (r.den().depends_on(Var::u) || r.num().degree(Var::u) > 1)
        throw Error(ErrorCode::NonlinearParameterEntry, "order relation is not affine in the unknown: " + r.to_string());
    return {r.num().substitute(Var::u, BigRational(0)), r.num().derivative(Var::u), r.den()};
}

struct RemovableSolution {
    BigRational u;
    RationalFunction Fk;
};

/// Chooses u so that (n0 + u*n1)/den has no pole at x0. `parameter_free` marks the case
/// where the system gives u no way in (g independent of mu at the fold).
inline RemovableSolution solve_removable(const RationalFunction& candidate, const BigRational& x0, unsigned k,
                                         bool parameter_free) {
    const AffineCandidate c = split_affine_in_u(candidate);
    const Point at{{Var::x, x0}};
    if (c.den.evaluate(at) != 0)
        throw Error(ErrorCode::ParameterUnsolvable,
                    "F_" + std::to_string(k) + " has no pole at the fold, so mu_" + std::to_string(k - 1) + " is undetermined");
    const BigRational slope = c.n1.evaluate(at);
    if (slope == 0) {
        if (parameter_free)
            throw Error(ErrorCode::ParameterUnsolvable, "g does not depend on mu at the fold");
        throw Error(ErrorCode::UnremovableSingularity,
                    "the unknown mu_" + std::to_string(k - 1) + " does not enter the numerator of F_" + std::to_string(k) +
                        " at the fold");
    }
    RemovableSolution s;
    s.u = -c.n0.evaluate(at) / slope;
    s.Fk = RationalFunction(c.n0 + c.n1 * s.u, c.den);
    if (s.Fk.den().evaluate(at) == 0)
        throw Error(ErrorCode::UnremovableSingularity,
                    "F_" + std::to_string(k) + " keeps a pole at the fold: " + s.Fk.to_string());
    return s;
}

inline BigRational require_exact_fold(const FoldPoint& fold) {
    if (!fold.exact())
        throw Error(ErrorCode::InexactFold, "fold at x0 = " + std::to_string(fold.x0) + " is irrational; exact pole cancellation needs a rational fold");
    return *fold.exact_x0;
}

/// True when dg/dmu vanishes at the fold point (x0, F0(x0)) for every mu and eps = 0.
inline bool parameter_free_at_fold(const SPSystem& s, const FoldPoint& fold) {
    const Polynomial g_mu = s.g.derivative(Var::mu).substitute(Var::eps, BigRational(0));
    const Polynomial at_fold = g_mu.substitute(Var::x, *fold.exact_x0).substitute(Var::y, *fold.exact_y0);
    return at_fold.is_zero();
}

} // namespace canardkit
