#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "canardkit/error.hpp"

namespace canardkit {

using BigInteger = mpz_class;
/// Always kept canonical: gcd(|num|, den) = 1, den > 0, zero is 0/1.
using BigRational = mpq_class;

inline std::string to_string(const BigRational& q) { return q.get_str(); }

inline double to_double(const BigRational& q) { return q.get_d(); }

/// Parses "n" or "n/d" with an optional leading sign ('-', '+' or U+2212).
inline BigRational parse_rational(std::string_view text) {
    std::string s(text);
    auto fail = [&] { throw Error(ErrorCode::SyntaxError, "malformed rational '" + s + "'"); };

    std::string_view rest = text;
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.remove_suffix(1);

    bool negative = false;
    if (rest.starts_with("\xE2\x88\x92")) {
        negative = true;
        rest.remove_prefix(3);
    } else if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
        negative = rest.front() == '-';
        rest.remove_prefix(1);
    }
    const auto slash = rest.find('/');
    std::string_view num = rest.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash + 1);
    auto all_digits = [](std::string_view d) {
        if (d.empty()) return false;
        for (char c : d)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    if (!all_digits(num)) fail();
    if (slash != std::string_view::npos && !all_digits(den)) fail();

    BigRational out;
    BigInteger n(std::string(num), 10);
    BigInteger d = slash == std::string_view::npos ? BigInteger(1) : BigInteger(std::string(den), 10);
    if (d == 0) throw Error(ErrorCode::ZeroDenominator, "rational '" + s + "' has zero denominator");
    out = BigRational(negative ? BigInteger(-n) : n, d);
    out.canonicalize();
    return out;
}

inline BigInteger integer_gcd(const BigInteger& a, const BigInteger& b) {
    BigInteger g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInteger integer_lcm(const BigInteger& a, const BigInteger& b) {
    BigInteger l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline BigRational rational_pow(const BigRational& base, unsigned exponent) {
    BigRational result(1);
    BigRational b = base;
    while (exponent != 0) {
        if (exponent & 1U) result *= b;
        exponent >>= 1U;
        if (exponent != 0) b *= b;
    }
    return result;
}

} // namespace canardkit
