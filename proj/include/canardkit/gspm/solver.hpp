#pragma once

#include <map>
#include <vector>

#include "canardkit/algebra/eps_series.hpp"
#include "canardkit/gspm/expansion.hpp"

namespace canardkit {

namespace detail {

/// sum_i coeffs[i] eps^i as a series of the given order.
inline EpsSeries partial_sum(const std::vector<RationalFunction>& coeffs, std::size_t count, unsigned order) {
    EpsSeries s(order);
    for (std::size_t i = 0; i < count && i <= order; ++i) s[i] = coeffs[i];
    return s;
}

/// mu_0 + ... + mu_{k-2} eps^{k-2} + u eps^{k-1}.
inline EpsSeries mu_with_unknown(const std::vector<BigRational>& mu, unsigned k, unsigned order) {
    EpsSeries s(order);
    for (unsigned i = 0; i + 1 < k && i <= order; ++i) s[i] = RationalFunction(mu[i]);
    if (k - 1 <= order) s[k - 1] = RationalFunction(var(Var::u));
    return s;
}

inline EpsSeries mu_known(const std::vector<BigRational>& mu, unsigned order) {
    EpsSeries s(order);
    for (std::size_t i = 0; i < mu.size() && i <= order; ++i) s[i] = RationalFunction(mu[i]);
    return s;
}

/// F_x f(x, F, mu, eps) - eps g(x, F, mu, eps) through the given order.
inline EpsSeries invariance_series(const SPSystem& s, const EpsSeries& F, const std::optional<EpsSeries>& mu, unsigned order) {
    std::map<Var, EpsSeries> bind{{Var::y, F}};
    if (mu) bind.emplace(Var::mu, *mu);
    const EpsSeries f = compose(s.f, bind, order);
    const EpsSeries g = compose(s.g, bind, order);
    return F.truncated(order).derivative(Var::x) * f - g.shifted(1);
}

} // namespace detail

/// Order-k candidate for F_k with the unknown u = mu_{k-1} left symbolic; F and mu hold the
/// lower orders (F_0..F_{k-1}, mu_0..mu_{k-2}).
inline RationalFunction gspm_candidate(const SPSystem& s, const std::vector<RationalFunction>& F,
                                       const std::vector<BigRational>& mu, unsigned k) {
    const EpsSeries Fs = detail::partial_sum(F, k, k);
    const EpsSeries Ms = detail::mu_with_unknown(mu, k, k);
    const RationalFunction B = detail::invariance_series(s, Fs, Ms, k)[k];

    // F_k enters the eps^k coefficient only through F_0' f_y(x, F_0, mu_0, 0) F_k.
    const Polynomial fy = s.f.derivative(Var::y).substitute(Var::eps, BigRational(0));
    const RationalFunction mu0 = k == 1 ? RationalFunction(var(Var::u)) : RationalFunction(mu[0]);
    const RationalFunction A = F[0].derivative(Var::x) * RationalFunction(fy).substitute(Var::y, F[0]).substitute(Var::mu, mu0);
    if (A.is_zero()) throw Error(ErrorCode::DegenerateFastEquation, "F_0' f_y vanishes identically on the critical manifold");
    return -(B / A);
}

/// Canard expansion of order N by order-by-order solution of the invariance equation with
/// pole cancellation at the fold.
inline CanardExpansion expand_canard(const SPSystem& s, unsigned N, const FoldPoint& fold) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "expansion order must be at least 1");
    const BigRational x0 = require_exact_fold(fold);
    const CriticalManifold m = critical_manifold(s);
    if (m.F0.derivative(Var::x).is_zero()) throw Error(ErrorCode::NoFold, "F0' vanishes identically");

    CanardExpansion e;
    e.order = N;
    e.fold = exact_fold(m.F0, x0);
    e.method = Method::gspm;
    e.system = s.name;
    e.F.push_back(m.F0);
    const bool parameter_free = parameter_free_at_fold(s, e.fold);
    for (unsigned k = 1; k <= N; ++k) {
        const RemovableSolution sol = solve_removable(gspm_candidate(s, e.F, e.mu, k), x0, k, parameter_free);
        e.mu.push_back(sol.u);
        e.F.push_back(sol.Fk);
    }
    return e;
}

struct InvarianceResidual {
    EpsSeries series;
    /// Largest k with coefficients 0..k identically zero; -1 if the eps^0 coefficient is not.
    int verified_order = -1;
};

/// Residual F_x f - eps g of the expansion through order N+1. With no mu coefficients, mu
/// stays symbolic.
inline InvarianceResidual invariance_residual(const SPSystem& s, const CanardExpansion& e) {
    const unsigned order = e.order + 1;
    const EpsSeries Fs = detail::partial_sum(e.F, e.F.size(), order);
    std::optional<EpsSeries> mu;
    if (!e.mu.empty()) mu = detail::mu_known(e.mu, order);
    InvarianceResidual r{detail::invariance_series(s, Fs, mu, order), -1};
    while (r.verified_order < static_cast<int>(order) && r.series[static_cast<std::size_t>(r.verified_order + 1)].is_zero())
        ++r.verified_order;
    return r;
}

} // namespace canardkit
