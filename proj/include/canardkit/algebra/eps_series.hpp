#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "canardkit/algebra/rational_function.hpp"

namespace canardkit {

/// Truncated power series c0 + c1*eps + ... + cN*eps^N + O(eps^(N+1)) whose coefficients
/// are rational functions free of eps.
class EpsSeries {
public:
    explicit EpsSeries(unsigned order = 0) : coeffs_(order + 1) {}
    explicit EpsSeries(std::vector<RationalFunction> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.resize(1);
        for (const auto& c : coeffs_)
            if (c.depends_on(Var::eps))
                throw Error(ErrorCode::InvalidArgument, "series coefficient depends on eps: " + c.to_string());
    }

    static EpsSeries constant(const RationalFunction& c, unsigned order) {
        EpsSeries s(order);
        s.coeffs_[0] = c;
        return s;
    }

    /// The series variable eps itself.
    static EpsSeries epsilon(unsigned order) {
        EpsSeries s(order);
        if (order >= 1) s.coeffs_[1] = RationalFunction(BigRational(1));
        return s;
    }

    unsigned order() const noexcept { return static_cast<unsigned>(coeffs_.size() - 1); }
    const std::vector<RationalFunction>& coefficients() const noexcept { return coeffs_; }
    const RationalFunction& operator[](std::size_t k) const { return coeffs_.at(k); }
    RationalFunction& operator[](std::size_t k) { return coeffs_.at(k); }

    /// Index of the first nonzero coefficient; nullopt if zero through the truncation order.
    std::optional<unsigned> leading_power() const {
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            if (!coeffs_[k].is_zero()) return static_cast<unsigned>(k);
        return std::nullopt;
    }

    bool is_zero() const { return !leading_power().has_value(); }

    EpsSeries truncated(unsigned order) const {
        EpsSeries s(order);
        for (unsigned k = 0; k <= std::min(order, this->order()); ++k) s.coeffs_[k] = coeffs_[k];
        return s;
    }

    /// Multiplication by eps^k, staying at the same truncation order.
    EpsSeries shifted(unsigned k) const {
        EpsSeries s(order());
        for (unsigned i = 0; i + k <= order(); ++i) s.coeffs_[i + k] = coeffs_[i];
        return s;
    }

    /// Division by eps^k; requires the first k coefficients to vanish. Loses k orders.
    EpsSeries unshifted(unsigned k) const {
        if (k > order()) throw Error(ErrorCode::SeriesTruncation, "cannot remove more eps powers than the order");
        for (unsigned i = 0; i < k; ++i)
            if (!coeffs_[i].is_zero()) throw Error(ErrorCode::DivergentLimit, "series has a pole after removing eps powers");
        return EpsSeries(std::vector<RationalFunction>(coeffs_.begin() + k, coeffs_.end()));
    }

    EpsSeries derivative(Var v) const {
        EpsSeries s(order());
        for (unsigned k = 0; k <= order(); ++k) s.coeffs_[k] = coeffs_[k].derivative(v);
        return s;
    }

    /// Coefficient-wise v := value for v != eps.
    EpsSeries substitute(Var v, const BigRational& value) const {
        EpsSeries s(order());
        for (unsigned k = 0; k <= order(); ++k) s.coeffs_[k] = coeffs_[k].substitute(v, value);
        return s;
    }

    friend EpsSeries operator+(const EpsSeries& a, const EpsSeries& b) {
        const unsigned n = std::min(a.order(), b.order());
        EpsSeries s(n);
        for (unsigned k = 0; k <= n; ++k) s.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
        return s;
    }
    friend EpsSeries operator-(const EpsSeries& a) {
        EpsSeries s(a.order());
        for (unsigned k = 0; k <= a.order(); ++k) s.coeffs_[k] = -a.coeffs_[k];
        return s;
    }
    friend EpsSeries operator-(const EpsSeries& a, const EpsSeries& b) { return a + (-b); }

    friend EpsSeries operator*(const EpsSeries& a, const EpsSeries& b) {
        const unsigned n = std::min(a.order(), b.order());
        EpsSeries s(n);
        for (unsigned i = 0; i <= n; ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            for (unsigned j = 0; i + j <= n; ++j) {
                if (b.coeffs_[j].is_zero()) continue;
                s.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return s;
    }
    friend EpsSeries operator*(const RationalFunction& c, const EpsSeries& a) {
        EpsSeries s(a.order());
        if (c.is_zero()) return s;
        for (unsigned k = 0; k <= a.order(); ++k)
            if (!a.coeffs_[k].is_zero()) s.coeffs_[k] = c * a.coeffs_[k];
        return s;
    }

    /// Inverse of a series with nonzero constant term.
    EpsSeries inverse() const {
        if (coeffs_[0].is_zero())
            throw Error(ErrorCode::DivergentLimit, "series with vanishing constant term is not invertible");
        EpsSeries s(order());
        const RationalFunction c0_inv = coeffs_[0].inverse();
        s.coeffs_[0] = c0_inv;
        for (unsigned k = 1; k <= order(); ++k) {
            RationalFunction acc;
            for (unsigned j = 1; j <= k; ++j)
                if (!coeffs_[j].is_zero() && !s.coeffs_[k - j].is_zero()) acc += coeffs_[j] * s.coeffs_[k - j];
            s.coeffs_[k] = -(acc * c0_inv);
        }
        return s;
    }

    friend bool operator==(const EpsSeries& a, const EpsSeries& b) { return a.coeffs_ == b.coeffs_; }

    std::string to_string() const {
        std::string out;
        for (unsigned k = 0; k <= order(); ++k) {
            if (coeffs_[k].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + coeffs_[k].to_string() + ")";
            if (k > 0) out += "*eps^" + std::to_string(k);
        }
        if (out.empty()) out = "0";
        return out + " + O(eps^" + std::to_string(order() + 1) + ")";
    }

private:
    std::vector<RationalFunction> coeffs_;
};

/// Quotient num/den of two series, kept as a pair so that a vanishing constant term in
/// the denominator can be handled by cancelling the common eps power.
struct SeriesQuotient {
    EpsSeries num;
    EpsSeries den;

    /// Power of eps removed from both sides (the denominator's leading power).
    unsigned common_power() const {
        const auto k = den.leading_power();
        if (!k)
            throw Error(ErrorCode::ZeroDenominator, "denominator series vanishes through order " + std::to_string(den.order()));
        return *k;
    }

    /// The quotient as a series after common-power cancellation; DivergentLimit on a pole at eps = 0.
    EpsSeries reduced() const {
        const unsigned k = common_power();
        const unsigned n = std::min(num.order(), den.order());
        if (k > n) throw Error(ErrorCode::SeriesTruncation, "series truncated before the denominator's leading term");
        for (unsigned i = 0; i < k; ++i)
            if (!num[i].is_zero())
                throw Error(ErrorCode::DivergentLimit, "numerator vanishes to lower eps order than the denominator");
        const EpsSeries a = num.truncated(n).unshifted(k);
        const EpsSeries b = den.truncated(n).unshifted(k);
        return a * b.inverse();
    }

    /// Coefficient of eps^index of the quotient.
    RationalFunction coefficient(unsigned index) const {
        const EpsSeries q = reduced();
        if (index > q.order())
            throw Error(ErrorCode::SeriesTruncation, "quotient known only through order " + std::to_string(q.order()));
        return q[index];
    }
};

/// lim_{eps -> 0} num/den after common eps-power cancellation.
inline RationalFunction eps_limit(const EpsSeries& num, const EpsSeries& den) {
    const SeriesQuotient q{num, den};
    const unsigned k = q.common_power();
    for (unsigned i = 0; i < k && i <= num.order(); ++i)
        if (!num[i].is_zero())
            throw Error(ErrorCode::DivergentLimit, "numerator vanishes to lower eps order than the denominator");
    if (k > num.order()) throw Error(ErrorCode::SeriesTruncation, "numerator truncated before eps^" + std::to_string(k));
    return num[k] / den[k];
}

/// Series value of p after binding some variables to series; eps is always the series
/// variable and unbound variables stay in the coefficients.
inline EpsSeries compose(const Polynomial& p, const std::map<Var, EpsSeries>& bindings, unsigned order) {
    if (bindings.count(Var::eps) != 0) throw Error(ErrorCode::InvalidArgument, "eps cannot be rebound inside a series");

    // Group terms by the exponents of the bound variables and eps.
    using Key = std::vector<unsigned>;
    std::map<Key, Polynomial> groups;
    std::vector<Var> bound;
    for (const auto& [v, s] : bindings) bound.push_back(v);
    for (const auto& [m, c] : p.terms()) {
        Key key;
        Monomial rest = m;
        for (Var v : bound) {
            key.push_back(m[v]);
            rest = rest.with(v, 0);
        }
        key.push_back(m[Var::eps]);
        rest = rest.with(Var::eps, 0);
        groups[key].add_term(rest, c);
    }

    // powers[v][e] = value(v)^e, grown on demand.
    std::map<Var, std::vector<EpsSeries>> powers;
    auto power_of = [&](Var v, unsigned e) -> const EpsSeries& {
        auto& table = powers[v];
        if (table.empty()) table.push_back(EpsSeries::constant(RationalFunction(BigRational(1)), order));
        const EpsSeries base = bindings.at(v).truncated(order);
        while (table.size() <= e) table.push_back(table.back() * base);
        return table[e];
    };

    EpsSeries result(order);
    for (const auto& [key, coeff] : groups) {
        const unsigned eps_power = key.back();
        if (eps_power > order) continue;
        EpsSeries term = EpsSeries::constant(RationalFunction(coeff), order);
        for (std::size_t i = 0; i < bound.size(); ++i)
            if (key[i] != 0) term = power_of(bound[i], key[i]) * term;
        result = result + term.shifted(eps_power);
    }
    return result;
}

/// Substitutes v := value (a series) into a rational function. DivergentLimit when the
/// substituted denominator vanishes at eps = 0 to higher order than the numerator.
inline SeriesQuotient substitute_quotient(const RationalFunction& target, Var v, const EpsSeries& value, unsigned order) {
    std::map<Var, EpsSeries> b{{v, value}};
    return {compose(target.num(), b, order), compose(target.den(), b, order)};
}

inline EpsSeries substitute(const RationalFunction& target, Var v, const EpsSeries& value) {
    return substitute_quotient(target, v, value, value.order()).reduced();
}

/// Polynomial in eps with rational-function coefficients, as a series of the given order.
inline EpsSeries to_series(const RationalFunction& r, unsigned order) {
    return SeriesQuotient{compose(r.num(), {}, order), compose(r.den(), {}, order)}.reduced();
}

} // namespace canardkit
