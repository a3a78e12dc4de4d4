#pragma once

#include <string>
#include <utility>

#include "canardkit/algebra/gcd.hpp"

namespace canardkit {

/// Reduced quotient num/den of polynomials.
///
/// Canonical form: gcd(num, den) = 1, both have integer coefficients with no common
/// integer factor, and den has a positive leading coefficient. Two equal rational
/// functions therefore have identical representations, so == is structural.
class RationalFunction {
public:
    RationalFunction() : den_(BigRational(1)) {}
    RationalFunction(const BigRational& c) : num_(c), den_(BigRational(1)) { normalize_constant_den(); } // NOLINT
    RationalFunction(const Polynomial& p) : num_(p), den_(BigRational(1)) { normalize_constant_den(); } // NOLINT
    RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw Error(ErrorCode::ZeroDenominator, "rational function with zero denominator");
        normalize();
    }

    const Polynomial& num() const noexcept { return num_; }
    const Polynomial& den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const noexcept { return den_.is_constant(); }
    bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }

    /// Requires is_polynomial().
    Polynomial as_polynomial() const {
        if (!is_polynomial()) throw Error(ErrorCode::InvalidArgument, to_string() + " is not a polynomial");
        return num_ * (1 / den_.constant_term());
    }
    BigRational constant_value() const { return num_.constant_term() / den_.constant_term(); }

    bool depends_on(Var v) const noexcept { return num_.depends_on(v) || den_.depends_on(v); }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
        if (a.is_polynomial() && b.is_polynomial()) return RationalFunction(a.as_polynomial() + b.as_polynomial());
        const Polynomial g = gcd(a.den_, b.den_);
        const Polynomial ad = divide_exact(a.den_, g);
        const Polynomial bd = divide_exact(b.den_, g);
        return RationalFunction(a.num_ * bd + b.num_ * ad, ad * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a) {
        RationalFunction out = a;
        out.num_ = -out.num_;
        return out;
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_polynomial() && b.is_polynomial()) return RationalFunction(a.as_polynomial() * b.as_polynomial());
        // Cross-cancel so that the product is already reduced up to scaling.
        const Polynomial g1 = gcd(a.num_, b.den_);
        const Polynomial g2 = gcd(b.num_, a.den_);
        RationalFunction out;
        out.num_ = divide_exact(a.num_, g1) * divide_exact(b.num_, g2);
        out.den_ = divide_exact(a.den_, g2) * divide_exact(b.den_, g1);
        out.normalize_scaling();
        return out;
    }

    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw Error(ErrorCode::ZeroDenominator, "division by the zero rational function");
        return a * b.inverse();
    }

    RationalFunction inverse() const {
        if (is_zero()) throw Error(ErrorCode::ZeroDenominator, "inverse of zero");
        RationalFunction out;
        out.num_ = den_;
        out.den_ = num_;
        out.normalize_scaling();
        return out;
    }

    RationalFunction& operator+=(const RationalFunction& rhs) { return *this = *this + rhs; }
    RationalFunction& operator-=(const RationalFunction& rhs) { return *this = *this - rhs; }
    RationalFunction& operator*=(const RationalFunction& rhs) { return *this = *this * rhs; }

    RationalFunction pow(unsigned e) const {
        RationalFunction out;
        out.num_ = num_.pow(e);
        out.den_ = den_.pow(e);
        out.normalize_scaling();
        return out;
    }

    /// Quotient rule, re-reduced.
    RationalFunction derivative(Var v) const {
        if (is_polynomial()) return RationalFunction(num_.derivative(v) * (1 / den_.constant_term()));
        return RationalFunction(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
    }

    /// Partial evaluation v := value; ZeroDenominator if the denominator vanishes identically.
    RationalFunction substitute(Var v, const BigRational& value) const {
        Polynomial d = den_.substitute(v, value);
        if (d.is_zero())
            throw Error(ErrorCode::ZeroDenominator,
                        "denominator of " + to_string() + " vanishes at " + std::string(name_of(v)) + " = " + value.get_str());
        return RationalFunction(num_.substitute(v, value), std::move(d));
    }

    RationalFunction substitute(Var v, const RationalFunction& value) const {
        if (!depends_on(v)) return *this;
        // p(v = a/b) = P(a, b) / b^deg with P the homogenization of p in v.
        const unsigned deg = std::max(num_.degree(v), den_.degree(v));
        auto homogenize = [&](const Polynomial& p) {
            const auto coeffs = p.coefficients_in(v);
            Polynomial out;
            for (std::size_t k = 0; k < coeffs.size(); ++k) {
                if (coeffs[k].is_zero()) continue;
                out += coeffs[k] * value.num_.pow(static_cast<unsigned>(k)) *
                       value.den_.pow(deg - static_cast<unsigned>(k));
            }
            return out;
        };
        Polynomial d = homogenize(den_);
        if (d.is_zero())
            throw Error(ErrorCode::ZeroDenominator, "denominator of " + to_string() + " vanishes after substitution");
        return RationalFunction(homogenize(num_), std::move(d));
    }

    /// Exact value at a point assigning every variable present; PoleAtPoint on a vanishing denominator.
    BigRational evaluate(const Point& point) const {
        const BigRational d = den_.evaluate(point);
        if (d == 0) throw Error(ErrorCode::PoleAtPoint, "denominator of " + to_string() + " vanishes at the point");
        return num_.evaluate(point) / d;
    }

    double evaluate_double(const std::array<double, kNumVars>& values) const {
        return num_.evaluate_double(values) / den_.evaluate_double(values);
    }

    std::string to_string() const {
        if (is_polynomial()) return as_polynomial().to_string();
        return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
    }

private:
    void normalize_constant_den() { normalize_scaling(); }

    void normalize() {
        if (num_.is_zero()) {
            den_ = Polynomial(BigRational(1));
            return;
        }
        if (!den_.is_constant() && !num_.is_constant()) {
            const Polynomial g = gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = divide_exact(num_, g);
                den_ = divide_exact(den_, g);
            }
        }
        normalize_scaling();
    }

    /// Integer coefficients, coprime contents, positive leading denominator coefficient.
    void normalize_scaling() {
        if (num_.is_zero()) {
            den_ = Polynomial(BigRational(1));
            return;
        }
        auto [ds, dp] = integer_primitive(den_);
        auto [ns, np] = integer_primitive(num_);
        const BigRational ratio = ns / ds; // canonical p/q with q > 0
        num_ = np * BigRational(ratio.get_num());
        den_ = dp * BigRational(ratio.get_den());
    }

    Polynomial num_;
    Polynomial den_;
};

inline RationalFunction operator*(const BigRational& c, const RationalFunction& r) { return RationalFunction(c) * r; }

} // namespace canardkit
