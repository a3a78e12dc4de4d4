#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "canardkit/algebra/bigrational.hpp"
#include "canardkit/algebra/monomial.hpp"
#include "canardkit/error.hpp"

namespace canardkit {

/// Assignment of exact values to (some of) the ring variables.
using Point = std::map<Var, BigRational>;

/// Sparse multivariate polynomial over Q. Zero coefficients are never stored and terms
/// iterate from the leading monomial down (graded lex), which makes printing canonical.
class Polynomial {
public:
    using TermMap = std::map<Monomial, BigRational, GradedLexGreater>;

    Polynomial() = default;
    Polynomial(const BigRational& c) { // NOLINT: implicit constant embedding
        if (c != 0) terms_.emplace(Monomial{}, c);
    }
    explicit Polynomial(long c) : Polynomial(BigRational(c)) {}

    static Polynomial variable(Var v) { return term(Monomial::power(v, 1), BigRational(1)); }

    static Polynomial term(const Monomial& m, const BigRational& c) {
        Polynomial p;
        if (c != 0) p.terms_.emplace(m, c);
        return p;
    }

    const TermMap& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
    }
    BigRational constant_term() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? BigRational(0) : it->second;
    }

    /// Leading term in graded lex order; requires !is_zero().
    const Monomial& leading_monomial() const { return terms_.begin()->first; }
    const BigRational& leading_coefficient() const { return terms_.begin()->second; }

    BigRational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? BigRational(0) : it->second;
    }

    unsigned degree(Var v) const noexcept {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max<unsigned>(d, m[v]);
        return d;
    }

    unsigned total_degree() const noexcept {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    bool depends_on(Var v) const noexcept {
        for (const auto& [m, c] : terms_)
            if (m[v] != 0) return true;
        return false;
    }

    /// Adds c*m in place.
    void add_term(const Monomial& m, const BigRational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    /// this += c * m * other.
    void add_scaled(const Polynomial& other, const BigRational& c, const Monomial& m = Monomial{}) {
        if (c == 0) return;
        for (const auto& [om, oc] : other.terms_) add_term(om * m, oc * c);
    }

    Polynomial& operator+=(const Polynomial& rhs) {
        for (const auto& [m, c] : rhs.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& rhs) {
        for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
        return *this;
    }
    Polynomial& operator*=(const BigRational& c) {
        if (c == 0) {
            terms_.clear();
        } else {
            for (auto& [m, v] : terms_) v *= c;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) {
        for (auto& [m, c] : a.terms_) c = -c;
        return a;
    }
    friend Polynomial operator*(Polynomial a, const BigRational& c) { return a *= c; }
    friend Polynomial operator*(const BigRational& c, Polynomial a) { return a *= c; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        if (a.is_zero() || b.is_zero()) return out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
        return out;
    }
    Polynomial& operator*=(const Polynomial& rhs) { return *this = *this * rhs; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

    Polynomial pow(unsigned e) const {
        Polynomial result(BigRational(1));
        Polynomial base = *this;
        while (e != 0) {
            if (e & 1U) result *= base;
            e >>= 1U;
            if (e != 0) base *= base;
        }
        return result;
    }

    Polynomial derivative(Var v) const {
        Polynomial out;
        for (const auto& [m, c] : terms_) {
            const auto e = m[v];
            if (e == 0) continue;
            out.terms_.emplace(m.with(v, static_cast<Monomial::Exponent>(e - 1)), c * e);
        }
        return out;
    }

    /// Coefficients of *this viewed as a univariate polynomial in v; entry k multiplies v^k.
    std::vector<Polynomial> coefficients_in(Var v) const {
        std::vector<Polynomial> out(degree(v) + 1);
        for (const auto& [m, c] : terms_) out[m[v]].terms_.emplace(m.with(v, 0), c);
        return out;
    }

    /// Partial evaluation v := value.
    Polynomial substitute(Var v, const BigRational& value) const {
        Polynomial out;
        std::vector<BigRational> powers{BigRational(1)};
        for (const auto& [m, c] : terms_) {
            const auto e = m[v];
            while (powers.size() <= e) powers.push_back(powers.back() * value);
            out.add_term(m.with(v, 0), c * powers[e]);
        }
        return out;
    }

    /// Composition v := value.
    Polynomial substitute(Var v, const Polynomial& value) const {
        if (!depends_on(v)) return *this;
        const auto coeffs = coefficients_in(v);
        Polynomial out = coeffs.back();
        for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
            out *= value;
            out += coeffs[k];
        }
        return out;
    }

    /// Full evaluation; every variable the polynomial depends on must be assigned.
    BigRational evaluate(const Point& point) const {
        Polynomial p = *this;
        for (const auto& [v, value] : point) p = p.substitute(v, value);
        if (!p.is_constant())
            throw Error(ErrorCode::InvalidArgument, "evaluation point leaves free variables in " + p.to_string());
        return p.constant_term();
    }

    double evaluate_double(const std::array<double, kNumVars>& values) const {
        double sum = 0.0;
        for (const auto& [m, c] : terms_) {
            double t = c.get_d();
            for (std::size_t i = 0; i < kNumVars; ++i)
                for (unsigned k = 0; k < m.exponent(i); ++k) t *= values[i];
            sum += t;
        }
        return sum;
    }

    /// Canonical text form, e.g. "-1/3*x^3 + x + y"; re-parses to the same polynomial.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            const bool negative = c < 0;
            const BigRational mag = negative ? BigRational(-c) : c;
            if (first) {
                if (negative) out += '-';
            } else {
                out += negative ? " - " : " + ";
            }
            first = false;
            if (m.is_one()) {
                out += mag.get_str();
            } else {
                if (mag != 1) out += mag.get_str() + '*';
                out += m.to_string();
            }
        }
        return out;
    }

private:
    TermMap terms_;
};

inline Polynomial var(Var v) { return Polynomial::variable(v); }

} // namespace canardkit
