#pragma once

#include <map>
#include <vector>

#include "canardkit/algebra/eps_series.hpp"
#include "canardkit/fcm/curvature.hpp"
#include "canardkit/gspm/expansion.hpp"

namespace canardkit {

/// Data extracted at one order. For n >= 1, a01 is the eps^(n-1) coefficient of
/// -phi_eps/phi_y divided by n, with u standing for mu_{n-1}; a10 is the eps^n coefficient
/// of -phi_x/phi_y once u is fixed. At n = 0 both are plain eps -> 0 limits with mu free.
struct FcmStep {
    unsigned n = 0;
    RationalFunction a10;
    RationalFunction a01;
    unsigned phi_index_used = 0;
};

struct FcmResult {
    CanardExpansion expansion;
    std::vector<FcmStep> steps;
    std::vector<CurvatureManifold> phis;
};

namespace detail {

/// The series quotient num/den after y := y_series, retried once two orders deeper when
/// the first truncation is too short to decide.
inline EpsSeries quotient_on_manifold(const Polynomial& num, const Polynomial& den, const EpsSeries& y_series,
                                      unsigned order) {
    auto attempt = [&](unsigned T) {
        const std::map<Var, EpsSeries> bind{{Var::y, y_series.truncated(T)}};
        return SeriesQuotient{compose(num, bind, T), compose(den, bind, T)}.reduced();
    };
    try {
        return attempt(order);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DivergentLimit && e.code() != ErrorCode::ZeroDenominator &&
            e.code() != ErrorCode::SeriesTruncation)
            throw;
        return attempt(order + 2);
    }
}

inline RationalFunction coefficient_or_throw(const EpsSeries& s, unsigned index) {
    if (index > s.order())
        throw Error(ErrorCode::SeriesTruncation, "quotient known only through eps^" + std::to_string(s.order()));
    return s[index];
}

/// mu_0 + ... + mu_{n-2} eps^(n-2) + tail eps^(n-1) as a polynomial in eps.
inline Polynomial mu_polynomial(const std::vector<BigRational>& mu, const Polynomial& tail) {
    Polynomial out = tail * Polynomial::term(Monomial::power(Var::eps, static_cast<Monomial::Exponent>(mu.size())), 1);
    for (std::size_t i = 0; i < mu.size(); ++i)
        out += Polynomial::term(Monomial::power(Var::eps, static_cast<Monomial::Exponent>(i)), mu[i]);
    return out;
}

inline EpsSeries y_series(const std::vector<RationalFunction>& F, unsigned order) {
    EpsSeries s(order);
    for (std::size_t i = 0; i < F.size() && i <= order; ++i) s[i] = F[i];
    return s;
}

/// Polynomial antiderivative in x with zero constant term.
inline Polynomial integrate_x(const Polynomial& p) {
    Polynomial out;
    for (const auto& [m, c] : p.terms()) {
        const unsigned e = m[Var::x] + 1;
        out.add_term(m.with(Var::x, static_cast<Monomial::Exponent>(e)), c / BigRational(e));
    }
    return out;
}

} // namespace detail

/// Canard expansion read off the curvature manifolds: order n uses phi_n.
inline FcmResult fcm_expand_detailed(const SPSystem& s, unsigned N, const FoldPoint& fold, unsigned max_index = max_phi_index()) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "expansion order must be at least 1");
    const BigRational x0 = require_exact_fold(fold);
    const CriticalManifold m = critical_manifold(s);
    if (m.F0.derivative(Var::x).is_zero()) throw Error(ErrorCode::NoFold, "F0' vanishes identically");

    FcmResult out;
    out.phis = curvature_chain(s, N, max_index);
    CanardExpansion& e = out.expansion;
    e.order = N;
    e.method = Method::fcm;
    e.system = s.name;
    e.fold = exact_fold(m.F0, x0);

    // Order 0: F0' is the limit of a10 on the critical manifold, mu left free.
    {
        const Polynomial& phi = out.phis[0].phi;
        const EpsSeries y0 = detail::y_series({m.F0}, 2);
        const RationalFunction a10 = detail::quotient_on_manifold(-phi.derivative(Var::x), phi.derivative(Var::y), y0, 2)[0];
        const RationalFunction a01 = detail::quotient_on_manifold(-phi.derivative(Var::eps), phi.derivative(Var::y), y0, 2)[0];
        const RationalFunction dF0 = m.F0.derivative(Var::x);
        if (a10 != dF0)
            throw Error(ErrorCode::DerivativeMismatch, "lim a10 = " + a10.to_string() + " differs from F0' = " + dF0.to_string());
        RationalFunction F0 = m.F0;
        if (a10.is_polynomial()) {
            // Fix the integration constant at the first integer point where F0 is defined.
            const Polynomial antiderivative = detail::integrate_x(a10.as_polynomial());
            for (long k = 0;; ++k) {
                const BigRational xs(k % 2 == 0 ? k / 2 : -(k + 1) / 2);
                if (m.F0.den().evaluate({{Var::x, xs}}) == 0) continue;
                const BigRational C0 = m.F0.evaluate({{Var::x, xs}}) - antiderivative.evaluate({{Var::x, xs}});
                F0 = RationalFunction(antiderivative + Polynomial(C0));
                break;
            }
            if (F0 != m.F0)
                throw Error(ErrorCode::DerivativeMismatch, "integrated F0 = " + F0.to_string() + " differs from the critical manifold");
        }
        e.F.push_back(F0);
        out.steps.push_back({0, a10, a01, 1});
    }

    const bool parameter_free = parameter_free_at_fold(s, e.fold);
    for (unsigned n = 1; n <= N; ++n) {
        const Polynomial& phi = out.phis[n - 1].phi;
        const unsigned T = n + 2;

        const Polynomial psi = phi.substitute(Var::mu, detail::mu_polynomial(e.mu, var(Var::u)));
        const EpsSeries a01 = detail::quotient_on_manifold(-psi.derivative(Var::eps), psi.derivative(Var::y), detail::y_series(e.F, T), T);
        const RationalFunction candidate = detail::coefficient_or_throw(a01, n - 1) * RationalFunction(BigRational(1, n));
        const RemovableSolution sol = solve_removable(candidate, x0, n, parameter_free);
        e.mu.push_back(sol.u);
        e.F.push_back(sol.Fk);

        // Derivative-level check through a10 with mu_{n-1} fixed.
        const Polynomial psi_fixed = psi.substitute(Var::u, sol.u);
        const EpsSeries a10 = detail::quotient_on_manifold(-psi_fixed.derivative(Var::x), psi_fixed.derivative(Var::y),
                                                           detail::y_series(e.F, T), T);
        const RationalFunction dFn = detail::coefficient_or_throw(a10, n);
        if (dFn != sol.Fk.derivative(Var::x))
            throw Error(ErrorCode::DerivativeMismatch, "order " + std::to_string(n) + ": a10 gives F_n' = " + dFn.to_string() +
                                                           " but d/dx F_n = " + sol.Fk.derivative(Var::x).to_string());
        out.steps.push_back({n, dFn, candidate, n});
    }
    return out;
}

inline CanardExpansion fcm_expand(const SPSystem& s, unsigned N, const FoldPoint& fold, unsigned max_index = max_phi_index()) {
    return fcm_expand_detailed(s, N, fold, max_index).expansion;
}

} // namespace canardkit
