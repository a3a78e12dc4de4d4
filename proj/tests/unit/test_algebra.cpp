#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "canardkit/algebra/eps_series.hpp"
#include "canardkit/sysmodel/expression_parser.hpp"

using namespace canardkit;

namespace {

const Polynomial X = var(Var::x);
const Polynomial Y = var(Var::y);
const Polynomial MU = var(Var::mu);
const Polynomial EPS = var(Var::eps);

Polynomial P(const char* text) { return parse_polynomial(text, {.allow_u = true}); }
BigRational Q(long n, long d = 1) { return BigRational(n, d); }

struct RandomPolys {
    std::mt19937_64 rng;
    explicit RandomPolys(std::uint64_t seed) : rng(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    Polynomial poly(std::initializer_list<Var> vars, int max_terms = 4, int max_exp = 2) {
        Polynomial p;
        const int n = uniform(1, max_terms);
        for (int t = 0; t < n; ++t) {
            Monomial m;
            for (Var v : vars) m = m.with(v, static_cast<Monomial::Exponent>(uniform(0, max_exp)));
            BigRational c(uniform(-9, 9), uniform(1, 5));
            c.canonicalize();
            p.add_term(m, c);
        }
        return p;
    }

    Polynomial nonzero(std::initializer_list<Var> vars, int max_terms = 4, int max_exp = 2) {
        Polynomial p;
        while (p.is_zero()) p = poly(vars, max_terms, max_exp);
        return p;
    }
};

} // namespace

TEST_CASE("polynomial ring operations", "[algebra][poly_arith]") {
    CHECK((X + Y) * (X - Y) == X * X - Y * Y);
    const Polynomial f = X + Y - X.pow(3) * Q(1, 3);
    CHECK(f + Polynomial{} == f);
    CHECK(f * Q(3) == Q(3) * X + Q(3) * Y - X.pow(3));
    CHECK(f.to_string() == "-1/3*x^3 + x + y");
    CHECK(Polynomial{}.to_string() == "0");
    CHECK((f - f).is_zero());
}

TEST_CASE("partial derivatives", "[algebra][partial_derivative]") {
    const Polynomial f = X + Y - X.pow(3) * Q(1, 3);
    CHECK(f.derivative(Var::x) == Polynomial(Q(1)) - X * X);
    CHECK(f.derivative(Var::y) == Polynomial(Q(1)));

    const RationalFunction r(Polynomial(Q(1)), Polynomial(Q(1)) + X);
    const RationalFunction expected(Polynomial(Q(-1)), (Polynomial(Q(1)) + X).pow(2));
    CHECK(r.derivative(Var::x) == expected);
}

TEST_CASE("rational function canonical form", "[algebra][rational_function]") {
    // -(x^2+4x+7)/(8(1+x)^4) written with a scaled numerator and denominator.
    const RationalFunction a(P("-3/2*x^2 - 6*x - 21/2"), P("12*(x+1)^4"));
    CHECK(a.num() == P("-x^2 - 4*x - 7"));
    CHECK(a.den() == P("8*(x+1)^4"));

    const RationalFunction b(P("(x+1)*(x-u)"), P("(x-u)*(x^2+1)"));
    CHECK(b == RationalFunction(P("x+1"), P("x^2+1")));

    const RationalFunction c(P("2*x"), P("-4*x*y"));
    CHECK(c.num() == Polynomial(Q(-1)));
    CHECK(c.den() == P("2*y"));

    CHECK_THROWS_AS(RationalFunction(X, Polynomial{}), Error);
}

TEST_CASE("multivariate gcd", "[algebra][gcd]") {
    CHECK(gcd(P("(x+1)*(x-u)^2*3"), P("(x-u)*(x^2+1)*6")) == P("x - u"));
    CHECK(gcd(P("(x*mu + y)*(x-1)"), P("(x*mu + y)*(x+1)")) == P("x*mu + y"));
    CHECK(gcd(P("x^2 - 1"), P("x^2 + 1")) == Polynomial(Q(1)));
    CHECK(gcd(P("(x-1)*(y+2)*eps"), P("(x-1)*(y-2)*eps^2")) == P("(x-1)*eps"));
    CHECK(gcd(Polynomial{}, P("-2*x+4")) == P("x - 2"));
}

TEST_CASE("multivariate division with remainder", "[algebra][division]") {
    const Polynomial a = P("x^3*y + x*y^2 + 7");
    const Polynomial b = P("x*y - 1");
    const auto [q, r] = divide(a, b);
    CHECK(q * b + r == a);
    for (const auto& [m, c] : r.terms()) CHECK_FALSE(b.leading_monomial().divides(m));

    CHECK(divide_exact(P("x^2 - y^2"), P("x + y")) == P("x - y"));
    CHECK_FALSE(try_divide_exact(P("x^2 + y^2"), P("x + y")).has_value());
}

TEST_CASE("substitution", "[algebra][substitute]") {
    const RationalFunction f(X + Y - X.pow(3) * Q(1, 3));
    CHECK(f.substitute(Var::y, RationalFunction(X.pow(3) * Q(1, 3) - X)).is_zero());

    const EpsSeries one_plus_eps({RationalFunction(Q(1)), RationalFunction(Q(1)), RationalFunction(Q(0))});
    const EpsSeries squared = substitute(RationalFunction(X * X), Var::x, one_plus_eps);
    CHECK(squared == EpsSeries({RationalFunction(Q(1)), RationalFunction(Q(2)), RationalFunction(Q(1))}));

    // 1/(x^2-1) at x = 1+eps: the denominator 2eps + eps^2 has no constant term.
    const RationalFunction pole(Polynomial(Q(1)), X * X - Polynomial(Q(1)));
    try {
        (void)substitute(pole, Var::x, one_plus_eps);
        FAIL("expected DivergentLimit");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DivergentLimit);
    }
    // Hand expansion: (2eps + eps^2)^-1 = (1/(2eps)) (1 - eps/2 + ...).
    const SeriesQuotient q = substitute_quotient(pole, Var::x, one_plus_eps, 2);
    CHECK(q.common_power() == 1);
    const EpsSeries shifted = q.num.truncated(1) * q.den.unshifted(1).inverse();
    CHECK(shifted[0] == RationalFunction(Q(1, 2)));
    CHECK(shifted[1] == RationalFunction(Q(-1, 4)));

    const EpsSeries zero_den({RationalFunction(Q(0)), RationalFunction(Q(0))});
    try {
        (void)eps_limit(zero_den, zero_den);
        FAIL("expected ZeroDenominator");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroDenominator);
    }
}

TEST_CASE("eps limits", "[algebra][eps_limit]") {
    const auto series = [](const Polynomial& p) { return to_series(RationalFunction(p), 3); };
    CHECK(eps_limit(series(EPS * X), series(EPS)) == RationalFunction(X));
    CHECK(eps_limit(series(EPS * EPS * (Polynomial(Q(1)) + X)), series(EPS * EPS)) ==
          RationalFunction(Polynomial(Q(1)) + X));
    try {
        (void)eps_limit(series(EPS), series(EPS * EPS));
        FAIL("expected DivergentLimit");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DivergentLimit);
    }
}

TEST_CASE("exact evaluation", "[algebra][eval_rational]") {
    CHECK(RationalFunction(X.pow(3) * Q(1, 3) - X).evaluate({{Var::x, Q(1)}}) == Q(-2, 3));
    CHECK(RationalFunction(Polynomial(Q(-1)), Polynomial(Q(1)) + X).evaluate({{Var::x, Q(1)}}) == Q(-1, 2));
    try {
        (void)RationalFunction(Polynomial(Q(1)), X * X - Polynomial(Q(1))).evaluate({{Var::x, Q(1)}});
        FAIL("expected PoleAtPoint");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PoleAtPoint);
    }
}

TEST_CASE("series arithmetic", "[algebra][eps_series]") {
    const EpsSeries a = to_series(RationalFunction(Polynomial(Q(1)), Polynomial(Q(1)) - EPS), 4); // 1/(1-eps)
    for (unsigned k = 0; k <= 4; ++k) CHECK(a[k] == RationalFunction(Q(1)));
    const EpsSeries b = to_series(RationalFunction(Polynomial(Q(1)) - EPS), 4);
    const EpsSeries prod = a * b;
    CHECK(prod[0] == RationalFunction(Q(1)));
    for (unsigned k = 1; k <= 4; ++k) CHECK(prod[k].is_zero());
    CHECK(b.inverse() == a);
}

TEST_CASE("property: canonical form is independent of association order", "[algebra][property]") {
    RandomPolys gen(20261016);
    for (int i = 0; i < 1000; ++i) {
        const Polynomial a = gen.poly({Var::x, Var::y, Var::mu});
        const Polynomial b = gen.poly({Var::x, Var::y, Var::eps});
        const Polynomial c = gen.poly({Var::x, Var::mu, Var::eps});
        const Polynomial left = (a * b) * c;
        const Polynomial right = a * (b * c);
        REQUIRE(left == right);
        REQUIRE(left.to_string() == right.to_string());
        REQUIRE((a * b).to_string() == (b * a).to_string());
        REQUIRE(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("property: rational function reduction is sound", "[algebra][property]") {
    RandomPolys gen(7);
    for (int i = 0; i < 200; ++i) {
        const Polynomial p = gen.poly({Var::x, Var::y, Var::u}, 3);
        const Polynomial q = gen.nonzero({Var::x, Var::y, Var::u}, 3);
        REQUIRE(RationalFunction(p * q, q) == RationalFunction(p, Polynomial(Q(1))));
        const Polynomial r = gen.nonzero({Var::x, Var::u}, 3);
        const RationalFunction s(p * r, q * r);
        REQUIRE(s == RationalFunction(p, q));
        // Values agree wherever defined.
        const Point pt{{Var::x, Q(3, 7)}, {Var::y, Q(-5, 2)}, {Var::u, Q(11, 3)}};
        if (q.evaluate(pt) != 0 && r.evaluate(pt) != 0) REQUIRE(s.evaluate(pt) == p.evaluate(pt) / q.evaluate(pt));
    }
}

TEST_CASE("property: derivative is linear and obeys Leibniz", "[algebra][property]") {
    RandomPolys gen(99);
    for (int i = 0; i < 200; ++i) {
        const Polynomial a = gen.poly({Var::x, Var::y, Var::mu, Var::eps});
        const Polynomial b = gen.poly({Var::x, Var::y, Var::mu, Var::eps});
        BigRational c(gen.uniform(-7, 7), gen.uniform(1, 4));
        c.canonicalize();
        for (Var v : kAllVars) {
            REQUIRE((a * c + b).derivative(v) == a.derivative(v) * c + b.derivative(v));
            REQUIRE((a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v));
        }
        const Polynomial d = gen.nonzero({Var::x, Var::y}, 3);
        const RationalFunction ra(a, d);
        const RationalFunction rb(b, d + Polynomial(Q(1)));
        REQUIRE((ra * rb).derivative(Var::x) == ra.derivative(Var::x) * rb + ra * rb.derivative(Var::x));
    }
}

TEST_CASE("property: eps limit of a regular function is its value at eps = 0", "[algebra][property]") {
    RandomPolys gen(12345);
    int checked = 0;
    while (checked < 100) {
        const Polynomial n = gen.poly({Var::x, Var::eps}, 4, 3);
        const Polynomial d = gen.nonzero({Var::x, Var::eps}, 4, 3);
        if (d.substitute(Var::eps, Q(0)).is_zero()) continue;
        const RationalFunction f(n, d);
        const EpsSeries one = EpsSeries::constant(RationalFunction(Q(1)), 3);
        REQUIRE(eps_limit(to_series(f, 3), one) == f.substitute(Var::eps, Q(0)));
        ++checked;
    }
}

TEST_CASE("property: symbolic derivatives match central differences", "[algebra][property]") {
    RandomPolys gen(424242);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> num(-200, 200);
    for (int i = 0; i < 100; ++i) {
        const Polynomial p = gen.poly({Var::x, Var::y, Var::mu}, 5, 3);
        const Polynomial d = gen.nonzero({Var::x, Var::y}, 3, 2) * Q(1, 10) + Polynomial(Q(5));
        const RationalFunction f(p, d);
        std::array<double, kNumVars> at{};
        Point exact;
        for (Var v : {Var::x, Var::y, Var::mu}) {
            const BigRational r(num(rng), 100);
            exact[v] = r;
            at[index_of(v)] = r.get_d();
        }
        if (d.evaluate(exact) == 0) continue;
        for (Var v : {Var::x, Var::y, Var::mu}) {
            const double h = 1e-6;
            auto shifted = at;
            shifted[index_of(v)] += h;
            const double up = f.evaluate_double(shifted);
            shifted[index_of(v)] -= 2 * h;
            const double down = f.evaluate_double(shifted);
            const double fd = (up - down) / (2 * h);
            const double symbolic = to_double(f.derivative(v).evaluate(exact));
            REQUIRE(std::abs(fd - symbolic) <= 1e-6 * std::max(1.0, std::abs(symbolic)));
        }
    }
}
