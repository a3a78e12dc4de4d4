#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace canardkit {

/// The fixed ambient ring Q[x, y, mu, eps, u]; u is the transient unknown used while
/// solving for the next bifurcation-parameter coefficient.
enum class Var : std::uint8_t { x = 0, y = 1, mu = 2, eps = 3, u = 4 };

inline constexpr std::size_t kNumVars = 5;
inline constexpr std::array<Var, kNumVars> kAllVars{Var::x, Var::y, Var::mu, Var::eps, Var::u};
inline constexpr std::array<std::string_view, kNumVars> kVarNames{"x", "y", "mu", "eps", "u"};

inline constexpr std::size_t index_of(Var v) noexcept { return static_cast<std::size_t>(v); }
inline constexpr std::string_view name_of(Var v) noexcept { return kVarNames[index_of(v)]; }

inline std::optional<Var> var_from_name(std::string_view name) noexcept {
    for (Var v : kAllVars)
        if (name_of(v) == name) return v;
    return std::nullopt;
}

class Monomial {
public:
    using Exponent = std::uint16_t;

    constexpr Monomial() = default;

    static constexpr Monomial power(Var v, Exponent e) {
        Monomial m;
        m.exps_[index_of(v)] = e;
        return m;
    }

    constexpr Exponent operator[](Var v) const noexcept { return exps_[index_of(v)]; }
    constexpr Exponent exponent(std::size_t i) const noexcept { return exps_[i]; }

    constexpr unsigned degree() const noexcept {
        unsigned d = 0;
        for (auto e : exps_) d += e;
        return d;
    }

    constexpr bool is_one() const noexcept { return degree() == 0; }

    constexpr Monomial with(Var v, Exponent e) const noexcept {
        Monomial m = *this;
        m.exps_[index_of(v)] = e;
        return m;
    }

    constexpr bool divides(const Monomial& other) const noexcept {
        for (std::size_t i = 0; i < kNumVars; ++i)
            if (exps_[i] > other.exps_[i]) return false;
        return true;
    }

    /// Requires divisor.divides(*this).
    constexpr Monomial operator/(const Monomial& divisor) const noexcept {
        Monomial m;
        for (std::size_t i = 0; i < kNumVars; ++i)
            m.exps_[i] = static_cast<Exponent>(exps_[i] - divisor.exps_[i]);
        return m;
    }

    constexpr Monomial operator*(const Monomial& rhs) const noexcept {
        Monomial m;
        for (std::size_t i = 0; i < kNumVars; ++i)
            m.exps_[i] = static_cast<Exponent>(exps_[i] + rhs.exps_[i]);
        return m;
    }

    constexpr bool operator==(const Monomial&) const = default;

    /// "x^3*mu", empty string for the unit monomial.
    std::string to_string() const {
        std::string out;
        for (Var v : kAllVars) {
            const auto e = (*this)[v];
            if (e == 0) continue;
            if (!out.empty()) out += '*';
            out += name_of(v);
            if (e > 1) out += '^' + std::to_string(e);
        }
        return out;
    }

private:
    std::array<Exponent, kNumVars> exps_{};
};

/// Graded lexicographic order with x > y > mu > eps > u. The comparator answers
/// "a comes before b", i.e. a is the larger monomial, so ordered containers iterate
/// from the leading term downwards.
struct GradedLexGreater {
    constexpr bool operator()(const Monomial& a, const Monomial& b) const noexcept {
        const unsigned da = a.degree();
        const unsigned db = b.degree();
        if (da != db) return da > db;
        for (std::size_t i = 0; i < kNumVars; ++i)
            if (a.exponent(i) != b.exponent(i)) return a.exponent(i) > b.exponent(i);
        return false;
    }
};

} // namespace canardkit
