#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "canardkit/algebra/polynomial.hpp"

namespace canardkit {

struct ParseOptions {
    /// The transient unknown u is internal; user input may not mention it by default.
    bool allow_u = false;
};

namespace detail {

// expr   := ["+"|"-"] term (("+"|"-") term)*
// term   := factor (("*"|"/") factor)*
// factor := base ("^" natural)?
// base   := "x" | "y" | "mu" | "eps" | natural | "(" expr ")"
// A rational literal "a/b" is the term a / b; division is allowed only by nonzero constants.
class ExpressionParser {
public:
    ExpressionParser(std::string_view text, ParseOptions options) : text_(text), options_(options) {}

    Polynomial parse() {
        skip_space();
        Polynomial p = expr();
        skip_space();
        if (pos_ != text_.size()) fail(ErrorCode::SyntaxError, std::string("unexpected '") + text_[pos_] + "'");
        return p;
    }

private:
    [[noreturn]] void fail(ErrorCode code, const std::string& message) const {
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(code, message, line, column);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        bool negate = false;
        if (accept('-')) {
            negate = true;
        } else {
            accept('+');
        }
        Polynomial acc = term();
        if (negate) acc = -acc;
        while (true) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (true) {
            if (accept('*')) {
                acc *= factor();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                const Polynomial divisor = factor();
                if (!divisor.is_constant()) {
                    pos_ = at;
                    fail(ErrorCode::NonPolynomial, "division by the non-constant " + divisor.to_string());
                }
                if (divisor.is_zero()) {
                    pos_ = at;
                    fail(ErrorCode::SyntaxError, "division by zero");
                }
                acc *= BigRational(1) / divisor.constant_term();
            } else {
                return acc;
            }
        }
    }

    Polynomial factor() {
        Polynomial b = base();
        if (accept('^')) {
            skip_space();
            const std::string digits = natural();
            if (digits.size() > 4 || std::stoul(digits) > 1000) fail(ErrorCode::SyntaxError, "exponent too large");
            b = b.pow(static_cast<unsigned>(std::stoul(digits)));
        }
        return b;
    }

    std::string natural() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail(ErrorCode::SyntaxError, "expected a natural number");
        return std::string(text_.substr(start, pos_ - start));
    }

    Polynomial base() {
        skip_space();
        if (pos_ >= text_.size()) fail(ErrorCode::SyntaxError, "unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial inner = expr();
            if (!accept(')')) fail(ErrorCode::SyntaxError, "expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Polynomial(BigRational(BigInteger(natural(), 10)));
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string_view name = text_.substr(start, pos_ - start);
            const auto v = var_from_name(name);
            if (!v || (*v == Var::u && !options_.allow_u)) {
                pos_ = start;
                fail(ErrorCode::SyntaxError, "unknown identifier '" + std::string(name) + "'");
            }
            return Polynomial::variable(*v);
        }
        fail(ErrorCode::SyntaxError, std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    ParseOptions options_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses a polynomial over x, y, mu, eps with exact rational literals ("x^3/3" has
/// coefficient 1/3). Implicit multiplication is not accepted.
inline Polynomial parse_polynomial(std::string_view text, ParseOptions options = {}) {
    return detail::ExpressionParser(text, options).parse();
}

} // namespace canardkit
