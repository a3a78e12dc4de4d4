#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "canardkit/sysmodel/critical_manifold.hpp"

namespace canardkit {

/// Polynomial in (x, y) with double coefficients, mu and eps already substituted.
class CompiledPolynomial {
public:
    CompiledPolynomial() = default;
    CompiledPolynomial(const Polynomial& p, double mu, double eps) {
        std::map<std::pair<unsigned, unsigned>, double> merged;
        for (const auto& [m, c] : p.terms()) {
            double coeff = c.get_d();
            for (unsigned k = 0; k < m[Var::mu]; ++k) coeff *= mu;
            for (unsigned k = 0; k < m[Var::eps]; ++k) coeff *= eps;
            merged[{m[Var::x], m[Var::y]}] += coeff;
        }
        for (const auto& [e, c] : merged) {
            if (c == 0.0) continue;
            terms_.push_back({c, e.first, e.second});
            max_x_ = std::max(max_x_, e.first);
            max_y_ = std::max(max_y_, e.second);
        }
    }

    double operator()(double x, double y) const {
        std::array<double, 16> xp{};
        std::array<double, 16> yp{};
        xp[0] = yp[0] = 1.0;
        for (unsigned k = 1; k <= max_x_ && k < 16; ++k) xp[k] = xp[k - 1] * x;
        for (unsigned k = 1; k <= max_y_ && k < 16; ++k) yp[k] = yp[k - 1] * y;
        double sum = 0.0;
        for (const Term& t : terms_) sum += t.c * power(xp, x, t.ex) * power(yp, y, t.ey);
        return sum;
    }

private:
    struct Term {
        double c;
        unsigned ex;
        unsigned ey;
    };

    static double power(const std::array<double, 16>& table, double base, unsigned e) {
        if (e < 16) return table[e];
        double r = table[15];
        for (unsigned k = 15; k < e; ++k) r *= base;
        return r;
    }

    std::vector<Term> terms_;
    unsigned max_x_ = 0;
    unsigned max_y_ = 0;
};

/// dx/dt = f/eps, dy/dt = g in slow time at fixed numeric mu and eps.
struct NumericSystem {
    double mu = 0.0;
    double eps = 0.0;
    CompiledPolynomial f;
    CompiledPolynomial g;
    std::array<CompiledPolynomial, 4> jacobian; // f_x, f_y, g_x, g_y
    /// Critical manifold y = F0(x) = num/den and f_x at eps = 0, when the system has one.
    std::optional<std::array<CompiledPolynomial, 3>> manifold;

    std::array<double, 2> rhs(double x, double y) const { return {f(x, y) / eps, g(x, y)}; }

    /// Eigenvalues of the slow-time Jacobian at (x, y).
    std::array<std::complex<double>, 2> eigenvalues(double x, double y) const {
        const double a = jacobian[0](x, y) / eps;
        const double b = jacobian[1](x, y) / eps;
        const double c = jacobian[2](x, y);
        const double d = jacobian[3](x, y);
        const double half_trace = 0.5 * (a + d);
        const std::complex<double> root = std::sqrt(std::complex<double>(half_trace * half_trace - (a * d - b * c), 0.0));
        return {half_trace + root, half_trace - root};
    }

    /// True near a repelling part of the critical manifold: |y - F0(x)| <= 0.05 and
    /// f_x(x, F0(x)) >= 0.5.
    bool near_repelling_branch(double x, double y) const {
        if (!manifold) return false;
        const double den = (*manifold)[1](x, 0.0);
        if (den == 0.0) return false;
        const double F0 = (*manifold)[0](x, 0.0) / den;
        return std::abs(y - F0) <= 0.05 && (*manifold)[2](x, F0) >= 0.5;
    }
};

inline NumericSystem make_numeric_system(const SPSystem& s, double mu, double eps) {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive for numerical integration");
    NumericSystem n;
    n.mu = mu;
    n.eps = eps;
    n.f = CompiledPolynomial(s.f, mu, eps);
    n.g = CompiledPolynomial(s.g, mu, eps);
    n.jacobian = {CompiledPolynomial(s.f.derivative(Var::x), mu, eps), CompiledPolynomial(s.f.derivative(Var::y), mu, eps),
                  CompiledPolynomial(s.g.derivative(Var::x), mu, eps), CompiledPolynomial(s.g.derivative(Var::y), mu, eps)};
    try {
        const CriticalManifold m = critical_manifold(s);
        n.manifold = std::array<CompiledPolynomial, 3>{CompiledPolynomial(m.F0.num(), mu, eps), CompiledPolynomial(m.F0.den(), mu, eps),
                                                       CompiledPolynomial(s.f.derivative(Var::x).substitute(Var::eps, BigRational(0)), mu, eps)};
    } catch (const Error&) {
        n.manifold.reset();
    }
    return n;
}

} // namespace canardkit
