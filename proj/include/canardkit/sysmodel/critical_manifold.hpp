#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "canardkit/algebra/rational_function.hpp"
#include "canardkit/sysmodel/system.hpp"

namespace canardkit {

/// Graph y = F0(x) of the eps = 0 zero set of f.
struct CriticalManifold {
    RationalFunction F0;
    std::string validity_note;
};

/// A root of F0'(x). Rational roots are exact; irrational ones carry only the double.
struct FoldPoint {
    double x0 = 0.0;
    double y0 = 0.0;
    std::optional<BigRational> exact_x0;
    std::optional<BigRational> exact_y0;

    bool exact() const noexcept { return exact_x0.has_value(); }
};

inline FoldPoint exact_fold(const RationalFunction& F0, const BigRational& x0) {
    FoldPoint p;
    p.exact_x0 = x0;
    p.exact_y0 = F0.evaluate({{Var::x, x0}});
    p.x0 = to_double(x0);
    p.y0 = to_double(*p.exact_y0);
    return p;
}

inline CriticalManifold critical_manifold(const SPSystem& s) {
    const Polynomial f0 = s.f.substitute(Var::eps, BigRational(0));
    CriticalManifold m;
    if (s.F0) {
        m.F0 = RationalFunction(*s.F0);
        m.validity_note = "user-supplied F0, verified against f(x, F0, mu, 0) = 0";
    } else {
        if (!s.affine_in_y)
            throw Error(ErrorCode::NotAffineInY, "f of '" + s.name + "' is not affine in y; supply F0 explicitly");
        const auto by_y = f0.coefficients_in(Var::y);
        if (by_y.size() < 2 || by_y[1].is_zero())
            throw Error(ErrorCode::DegenerateFastEquation, "f|eps=0 of '" + s.name + "' does not depend on y");
        m.F0 = RationalFunction(-by_y[0], by_y[1]);
        m.validity_note = "graph y = F0(x) valid where the y-coefficient " + by_y[1].to_string() + " is nonzero";
    }
    if (m.F0.depends_on(Var::mu))
        throw Error(ErrorCode::MuDependentCriticalManifold, "critical manifold " + m.F0.to_string() + " depends on mu");
    const RationalFunction residual = RationalFunction(f0).substitute(Var::y, m.F0);
    if (!residual.is_zero())
        throw Error(ErrorCode::InvalidCriticalManifold, "f(x, F0, mu, 0) = " + residual.to_string() + " is not zero");
    const RationalFunction f_mu = RationalFunction(f0.derivative(Var::mu)).substitute(Var::y, m.F0);
    if (!f_mu.is_zero())
        throw Error(ErrorCode::MuDependentCriticalManifold, "df/dmu on the critical manifold is " + f_mu.to_string());
    return m;
}

namespace detail {

// Dense univariate helpers in x, coefficient k multiplies x^k.
using Dense = std::vector<BigRational>;

inline void trim(Dense& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline Dense to_dense(const Polynomial& p) {
    Dense out(p.degree(Var::x) + 1, BigRational(0));
    for (const auto& [m, c] : p.terms()) out[m[Var::x]] = c;
    trim(out);
    return out;
}

inline BigRational eval_dense(const Dense& p, const BigRational& x) {
    BigRational acc(0);
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
    return acc;
}

inline int sign_at(const Dense& p, const BigRational& x) { return sgn(eval_dense(p, x)); }

inline Dense derivative(const Dense& p) {
    if (p.size() <= 1) return {BigRational(0)};
    Dense out(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) out[k - 1] = p[k] * static_cast<unsigned long>(k);
    return out;
}

inline bool is_zero(const Dense& p) { return p.size() == 1 && p[0] == 0; }

/// Remainder of a by b (b nonzero).
inline Dense remainder(Dense a, const Dense& b) {
    while (!is_zero(a) && a.size() >= b.size()) {
        const BigRational factor = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= factor * b[k];
        a.pop_back();
        trim(a);
        if (a.empty()) a.push_back(BigRational(0));
    }
    return a;
}

inline Dense quotient(Dense a, const Dense& b) {
    if (a.size() < b.size()) return {BigRational(0)};
    Dense q(a.size() - b.size() + 1, BigRational(0));
    while (!is_zero(a) && a.size() >= b.size()) {
        const BigRational factor = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        q[shift] = factor;
        for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= factor * b[k];
        a.pop_back();
        trim(a);
        if (a.empty()) a.push_back(BigRational(0));
    }
    return q;
}

inline Dense dense_gcd(Dense a, Dense b) {
    while (!is_zero(b)) {
        Dense r = remainder(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline std::vector<BigInteger> divisors(BigInteger n) {
    if (n < 0) n = -n;
    std::vector<BigInteger> out;
    for (BigInteger d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    }
    return out;
}

inline std::vector<Dense> sturm_chain(const Dense& p) {
    std::vector<Dense> chain{p, derivative(p)};
    while (!is_zero(chain.back()) && chain.back().size() > 1) {
        Dense r = remainder(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        if (is_zero(r)) break;
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int sign_changes(const std::vector<Dense>& chain, const BigRational& x) {
    int changes = 0;
    int previous = 0;
    for (const auto& p : chain) {
        const int s = sign_at(p, x);
        if (s == 0) continue;
        if (previous != 0 && s != previous) ++changes;
        previous = s;
    }
    return changes;
}

} // namespace detail

/// All real roots of F0'(x): rational ones exactly (rational-root search with exact
/// deflation), irrational ones by Sturm isolation and bisection to 1e-12.
inline std::vector<FoldPoint> fold_points(const CriticalManifold& m) {
    using namespace detail;
    if (!m.F0.is_polynomial()) throw Error(ErrorCode::InvalidArgument, "fold search needs a polynomial F0");
    const Polynomial F0 = m.F0.as_polynomial();
    Dense p = to_dense(F0.derivative(Var::x));
    if (is_zero(p)) throw Error(ErrorCode::InvalidArgument, "F0' vanishes identically");
    if (p.size() == 1) throw Error(ErrorCode::NoFold, "F0' = " + p[0].get_str() + " has no real root");

    std::vector<BigRational> exact_roots;
    auto deflate_all = [&](const BigRational& r) {
        const Dense linear{-r, BigRational(1)};
        while (p.size() > 1 && eval_dense(p, r) == 0) p = quotient(p, linear);
    };
    if (p[0] == 0) {
        exact_roots.push_back(BigRational(0));
        deflate_all(BigRational(0));
    }
    if (p.size() > 1) {
        // Integer coefficients for the rational root theorem.
        BigInteger den_lcm(1);
        for (const auto& c : p) den_lcm = integer_lcm(den_lcm, c.get_den());
        const BigRational lead_q = p.back() * den_lcm;
        const BigRational trail_q = p.front() * den_lcm;
        const BigInteger lead = lead_q.get_num();
        const BigInteger trail = trail_q.get_num();
        const BigInteger limit("1000000000000");
        if (abs(lead) <= limit && abs(trail) <= limit) {
            for (const auto& num : divisors(trail)) {
                for (const auto& den : divisors(lead)) {
                    for (int sign : {1, -1}) {
                        BigRational r(num * sign, den);
                        r.canonicalize();
                        if (p.size() > 1 && eval_dense(p, r) == 0) {
                            exact_roots.push_back(r);
                            deflate_all(r);
                        }
                    }
                }
            }
        }
    }

    std::vector<double> numeric_roots;
    if (p.size() > 1) {
        const Dense square_free = quotient(p, dense_gcd(p, derivative(p)));
        const auto chain = sturm_chain(square_free);
        BigRational bound(0);
        for (const auto& c : square_free) bound = std::max(bound, BigRational(abs(c / square_free.back())));
        bound += 1;
        const BigRational width(1, BigInteger("10000000000000"));
        // Recursive isolation by sign-variation counts.
        std::vector<std::pair<BigRational, BigRational>> stack{{-bound, bound}};
        while (!stack.empty()) {
            auto [lo, hi] = stack.back();
            stack.pop_back();
            const int count = sign_changes(chain, lo) - sign_changes(chain, hi);
            if (count == 0) continue;
            if (count == 1 && sign_at(square_free, lo) * sign_at(square_free, hi) < 0) {
                while (hi - lo > width) {
                    BigRational mid = (lo + hi) / 2;
                    if (sign_at(square_free, mid) * sign_at(square_free, lo) <= 0) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                numeric_roots.push_back(to_double((lo + hi) / 2));
                continue;
            }
            const BigRational mid = (lo + hi) / 2;
            stack.emplace_back(lo, mid);
            stack.emplace_back(mid, hi);
        }
    }

    std::vector<FoldPoint> out;
    for (const auto& r : exact_roots) out.push_back(exact_fold(m.F0, r));
    for (double r : numeric_roots) {
        FoldPoint fp;
        fp.x0 = r;
        fp.y0 = F0.evaluate_double({r, 0.0, 0.0, 0.0, 0.0});
        out.push_back(fp);
    }
    if (out.empty()) throw Error(ErrorCode::NoFold, "F0' has no real root");
    std::sort(out.begin(), out.end(), [](const FoldPoint& a, const FoldPoint& b) { return a.x0 < b.x0; });
    return out;
}

/// Default: the fold with the largest x0. With a selector, the fold nearest to it.
inline FoldPoint select_fold(const std::vector<FoldPoint>& folds, std::optional<double> selector = std::nullopt) {
    if (folds.empty()) throw Error(ErrorCode::NoFold, "no fold to select");
    if (!selector) return folds.back();
    return *std::min_element(folds.begin(), folds.end(), [&](const FoldPoint& a, const FoldPoint& b) {
        return std::abs(a.x0 - *selector) < std::abs(b.x0 - *selector);
    });
}

} // namespace canardkit
