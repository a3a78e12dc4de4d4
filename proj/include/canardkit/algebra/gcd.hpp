#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "canardkit/algebra/polynomial.hpp"

namespace canardkit {

/// p = scale * primitive, where primitive has coprime integer coefficients and a
/// positive leading coefficient. Zero maps to (0, 0).
struct IntegerPrimitive {
    BigRational scale;
    Polynomial primitive;
};

inline IntegerPrimitive integer_primitive(const Polynomial& p) {
    if (p.is_zero()) return {BigRational(0), Polynomial{}};
    BigInteger den_lcm(1);
    for (const auto& [m, c] : p.terms()) den_lcm = integer_lcm(den_lcm, c.get_den());
    BigInteger num_gcd(0);
    for (const auto& [m, c] : p.terms()) {
        BigInteger scaled = c.get_num() * (den_lcm / c.get_den());
        num_gcd = integer_gcd(num_gcd, scaled);
    }
    BigRational scale(num_gcd, den_lcm);
    scale.canonicalize();
    if (p.leading_coefficient() < 0) scale = -scale;
    BigRational inv = 1 / scale;
    return {scale, p * inv};
}

struct PolynomialDivision {
    Polynomial quotient;
    Polynomial remainder;
};

/// Multivariate division by a single divisor in graded lex order: a = q*b + r with no
/// term of r divisible by the leading monomial of b.
inline PolynomialDivision divide(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error(ErrorCode::ZeroDenominator, "division by the zero polynomial");
    PolynomialDivision out;
    Polynomial p = a;
    const Monomial& lm = b.leading_monomial();
    const BigRational lc_inv = 1 / b.leading_coefficient();
    while (!p.is_zero()) {
        const Monomial m = p.leading_monomial();
        const BigRational c = p.leading_coefficient();
        if (lm.divides(m)) {
            const Monomial t = m / lm;
            const BigRational tc = c * lc_inv;
            out.quotient.add_term(t, tc);
            p.add_scaled(b, -tc, t);
        } else {
            out.remainder.add_term(m, c);
            p.add_term(m, -c);
        }
    }
    return out;
}

/// Exact quotient a / b; nullopt when b does not divide a.
inline std::optional<Polynomial> try_divide_exact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error(ErrorCode::ZeroDenominator, "division by the zero polynomial");
    if (b.is_constant()) return a * (1 / b.constant_term());
    Polynomial q;
    Polynomial p = a;
    const Monomial& lm = b.leading_monomial();
    const BigRational lc_inv = 1 / b.leading_coefficient();
    while (!p.is_zero()) {
        const Monomial m = p.leading_monomial();
        if (!lm.divides(m)) return std::nullopt;
        const Monomial t = m / lm;
        const BigRational tc = p.leading_coefficient() * lc_inv;
        q.add_term(t, tc);
        p.add_scaled(b, -tc, t);
    }
    return q;
}

inline Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
    auto q = try_divide_exact(a, b);
    if (!q) throw Error(ErrorCode::NotDivisible, b.to_string() + " does not divide " + a.to_string());
    return std::move(*q);
}

Polynomial gcd(const Polynomial& a, const Polynomial& b);

namespace detail {

/// gcd of the coefficients of p viewed in v (a polynomial free of v).
inline Polynomial content_in(const Polynomial& p, Var v) {
    Polynomial g;
    for (const auto& c : p.coefficients_in(v)) {
        if (c.is_zero()) continue;
        g = gcd(g, c);
        if (g.is_constant()) break;
    }
    return g;
}

inline Polynomial leading_in(const Polynomial& p, Var v) { return p.coefficients_in(v).back(); }

/// Pseudo-remainder of a by b with respect to v: lc(b)^(deg a - deg b + 1) * a mod b.
inline Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, Var v) {
    const unsigned db = b.degree(v);
    const Polynomial lcb = leading_in(b, v);
    const Polynomial rest = b - lcb * Polynomial::term(Monomial::power(v, static_cast<Monomial::Exponent>(db)), 1);
    Polynomial r = a;
    int steps = static_cast<int>(a.degree(v)) - static_cast<int>(db) + 1;
    while (!r.is_zero() && r.degree(v) >= db) {
        const unsigned dr = r.degree(v);
        const auto by_v = r.coefficients_in(v);
        Polynomial low;
        for (unsigned k = 0; k < dr; ++k)
            if (!by_v[k].is_zero())
                low += by_v[k] * Polynomial::term(Monomial::power(v, static_cast<Monomial::Exponent>(k)), 1);
        r = lcb * low - by_v[dr] * rest * Polynomial::term(Monomial::power(v, static_cast<Monomial::Exponent>(dr - db)), 1);
        --steps;
    }
    for (; steps > 0; --steps) r = lcb * r;
    return r;
}

/// Subresultant PRS gcd of two polynomials that are primitive in v, up to a factor free of v.
inline Polynomial subresultant_prs(Polynomial a, Polynomial b, Var v) {
    if (a.degree(v) < b.degree(v)) std::swap(a, b);
    Polynomial g(BigRational(1));
    Polynomial h(BigRational(1));
    while (true) {
        const unsigned delta = a.degree(v) - b.degree(v);
        Polynomial r = pseudo_remainder(a, b, v);
        if (r.is_zero()) break;
        if (r.degree(v) == 0) return Polynomial(BigRational(1));
        a = std::move(b);
        b = divide_exact(r, g * h.pow(delta));
        g = leading_in(a, v);
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            h = divide_exact(g.pow(delta), h.pow(delta - 1));
        }
    }
    return divide_exact(b, content_in(b, v));
}

// Dense univariate images used to bound gcd degrees.
using DenseQ = std::vector<BigRational>;

inline DenseQ dense_image(const Polynomial& p, Var v, const Point& at) {
    DenseQ out(p.degree(v) + 1, BigRational(0));
    for (const auto& [m, c] : p.terms()) {
        BigRational t = c;
        for (Var w : kAllVars) {
            if (w == v || m[w] == 0) continue;
            t *= rational_pow(at.at(w), m[w]);
        }
        out[m[v]] += t;
    }
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
}

inline std::size_t dense_gcd_degree(DenseQ a, DenseQ b) {
    auto is_zero = [](const DenseQ& p) { return p.size() == 1 && p[0] == 0; };
    while (!is_zero(b)) {
        while (!is_zero(a) && a.size() >= b.size()) {
            const BigRational f = a.back() / b.back();
            const std::size_t shift = a.size() - b.size();
            for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= f * b[k];
            a.pop_back();
            while (a.size() > 1 && a.back() == 0) a.pop_back();
            if (a.empty()) a.push_back(BigRational(0));
        }
        std::swap(a, b);
    }
    return a.size() - 1;
}

/// Upper bound on deg_v gcd(a, b) from an image at an integer point where both leading
/// coefficients in v survive; nullopt if no such point was found.
inline std::optional<std::size_t> gcd_degree_bound(const Polynomial& a, const Polynomial& b, Var v) {
    const Polynomial la = leading_in(a, v);
    const Polynomial lb = leading_in(b, v);
    static constexpr long kSeeds[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (int attempt = 0; attempt < 4; ++attempt) {
        Point at;
        int k = attempt;
        for (Var w : kAllVars) {
            if (w == v) continue;
            at[w] = BigRational(kSeeds[k % 12] * (attempt % 2 == 0 ? 1 : -1) + attempt, 1);
            ++k;
        }
        if (la.evaluate(at) == 0 || lb.evaluate(at) == 0) continue;
        return dense_gcd_degree(dense_image(a, v, at), dense_image(b, v, at));
    }
    return std::nullopt;
}

} // namespace detail

/// Greatest common divisor over Q, normalized to a primitive integer polynomial with
/// positive leading coefficient (gcd(0, 0) = 0). Recursive primitive PRS over the
/// shared variables.
inline Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return integer_primitive(b).primitive;
    if (b.is_zero()) return integer_primitive(a).primitive;
    if (a.is_constant() || b.is_constant()) return Polynomial(BigRational(1));
    if (a == b) return integer_primitive(a).primitive;

    // A variable present in only one argument cannot occur in the gcd.
    for (Var v : kAllVars) {
        const bool in_a = a.depends_on(v);
        const bool in_b = b.depends_on(v);
        if (in_a && !in_b) return gcd(detail::content_in(a, v), b);
        if (in_b && !in_a) return gcd(a, detail::content_in(b, v));
    }

    // Cheap exits: one argument divides the other, or images prove coprimality.
    const Polynomial ia = integer_primitive(a).primitive;
    const Polynomial ib = integer_primitive(b).primitive;
    if (ib.total_degree() <= ia.total_degree() && try_divide_exact(ia, ib)) return ib;
    if (ia.total_degree() <= ib.total_degree() && try_divide_exact(ib, ia)) return ia;

    std::optional<Var> main;
    std::size_t best = 0;
    bool coprime = true;
    for (Var v : kAllVars) {
        if (!a.depends_on(v)) continue;
        const auto bound = detail::gcd_degree_bound(a, b, v);
        const std::size_t d = bound ? *bound : std::min(a.degree(v), b.degree(v));
        if (d > 0) coprime = false;
        const std::size_t cost = a.degree(v) + b.degree(v);
        if (!main || cost < best) {
            main = v;
            best = cost;
        }
    }
    if (coprime) return Polynomial(BigRational(1));

    const Var v = *main;
    const Polynomial ca = detail::content_in(ia, v);
    const Polynomial cb = detail::content_in(ib, v);
    const Polynomial c = gcd(ca, cb);
    const Polynomial pa = divide_exact(ia, ca);
    const Polynomial pb = divide_exact(ib, cb);
    const Polynomial g = detail::subresultant_prs(pa, pb, v);
    return integer_primitive(c * g).primitive;
}

} // namespace canardkit
