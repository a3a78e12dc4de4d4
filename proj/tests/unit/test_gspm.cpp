#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "canardkit/gspm/solver.hpp"

using namespace canardkit;

namespace {

Polynomial P(const char* text) { return parse_polynomial(text); }
RationalFunction R(const char* num, const char* den = "1") { return {P(num), P(den)}; }

FoldPoint fold_at(const SPSystem& s, long x0) { return exact_fold(critical_manifold(s).F0, BigRational(x0)); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

std::vector<BigRational> Qs(std::initializer_list<std::pair<long, long>> values) {
    std::vector<BigRational> out;
    for (auto [n, d] : values) out.emplace_back(BigRational(n, d));
    for (auto& q : out) q.canonicalize();
    return out;
}

} // namespace

TEST_CASE("Van der Pol expansion through order 2", "[gspm][expand_canard]") {
    const CanardExpansion e = expand_canard(vdp(), 2, fold_at(vdp(), 1));
    REQUIRE(e.F.size() == 3);
    CHECK(e.F[0] == R("x^3/3 - x"));
    CHECK(e.F[1] == R("-1", "1 + x"));
    CHECK(e.F[2] == R("-(x^2 + 4*x + 7)", "8*(1 + x)^4"));
    CHECK(e.mu == Qs({{1, 1}, {-1, 8}}));
    CHECK(e.method == Method::gspm);
}

TEST_CASE("Van der Pol mu series through order 4", "[gspm][expand_canard]") {
    const CanardExpansion e = expand_canard(vdp(), 4, fold_at(vdp(), 1));
    CHECK(e.mu == Qs({{1, 1}, {-1, 8}, {-3, 32}, {-173, 1024}}));
    CHECK(e.F[3] == R("-(3*x^5 + 21*x^4 + 66*x^3 + 126*x^2 + 159*x + 121)", "32*(x + 1)^7"));
    for (std::size_t k = 1; k < e.F.size(); ++k) CHECK(e.F[k].den().evaluate({{Var::x, BigRational(1)}}) != 0);
}

TEST_CASE("expansion at the mirrored fold", "[gspm][expand_canard]") {
    // By hand at order 1: F_1 = (u - x)/(x^2 - 1) is regular at x = -1 only for u = -1.
    const CanardExpansion minus = expand_canard(vdp(), 3, fold_at(vdp(), -1));
    CHECK(minus.mu == Qs({{-1, 1}, {1, 8}, {3, 32}}));
    CHECK(minus.F[1] == R("-1", "x - 1"));
    const CanardExpansion plus = expand_canard(vdp(), 3, fold_at(vdp(), 1));
    for (std::size_t k = 0; k < plus.F.size(); ++k) {
        const RationalFunction mirrored = -plus.F[k].substitute(Var::x, RationalFunction(-var(Var::x)));
        CHECK(minus.F[k] == mirrored);
    }
}

TEST_CASE("mu series evaluation", "[gspm][mu_series_eval]") {
    const CanardExpansion e = expand_canard(vdp(), 4, fold_at(vdp(), 1));
    CHECK(mu_series_eval(e, 0.0) == 1.0);
    const double order2 = mu_series_eval(e, 0.01, 2);
    CHECK(order2 == Catch::Approx(1 - 0.01 / 8 - 3 * 0.0001 / 32).epsilon(1e-15));
    CHECK(std::round(order2 * 1e5) / 1e5 == Catch::Approx(0.99874).margin(1e-12));
    CHECK(std::abs(mu_series_eval(e, 0.01, 3) - 0.998740451) < 1e-7);
    CHECK(code_of([&] { (void)mu_series_eval(e, 0.01, 4); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("invariance residual", "[gspm][invariance_residual]") {
    const SPSystem s = vdp();
    for (unsigned N : {1U, 2U, 3U}) {
        const InvarianceResidual r = invariance_residual(s, expand_canard(s, N, fold_at(s, 1)));
        CHECK(r.verified_order >= static_cast<int>(N));
    }

    CanardExpansion zeroth;
    zeroth.F = {critical_manifold(s).F0};
    CHECK(invariance_residual(s, zeroth).verified_order >= 0);

    CanardExpansion corrupted = expand_canard(s, 2, fold_at(s, 1));
    corrupted.F[1] = -corrupted.F[1];
    CHECK(invariance_residual(s, corrupted).verified_order == 0);
}

TEST_CASE("order-2 residual decays like eps^3 at sample points", "[gspm][invariance_residual]") {
    const SPSystem s = vdp();
    const CanardExpansion e = expand_canard(s, 2, fold_at(s, 1));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xs(-0.5, 2.5);
    auto residual = [&](double x, double eps) {
        double F = 0, Fx = 0;
        for (std::size_t k = 0; k < e.F.size(); ++k) {
            const std::array<double, kNumVars> at{x, 0, 0, 0, 0};
            F += e.F[k].evaluate_double(at) * std::pow(eps, k);
            Fx += e.F[k].derivative(Var::x).evaluate_double(at) * std::pow(eps, k);
        }
        const double mu = mu_series_eval(e, eps);
        const std::array<double, kNumVars> pt{x, F, mu, eps, 0};
        return Fx * s.f.evaluate_double(pt) - eps * s.g.evaluate_double(pt);
    };
    for (int i = 0; i < 20; ++i) {
        const double x = xs(rng);
        const double ratio = residual(x, 2e-3) / residual(x, 1e-3);
        CHECK(ratio == Catch::Approx(8.0).epsilon(0.05));
    }
}

TEST_CASE("pole removal is sharp", "[gspm][property]") {
    const SPSystem s = vdp();
    const CanardExpansion e = expand_canard(s, 2, fold_at(s, 1));
    const Point at{{Var::x, BigRational(1)}};
    for (unsigned k : {1U, 2U}) {
        const std::vector<RationalFunction> F(e.F.begin(), e.F.begin() + k);
        const std::vector<BigRational> mu(e.mu.begin(), e.mu.begin() + (k - 1));
        const RationalFunction candidate = gspm_candidate(s, F, mu, k);
        for (const BigRational delta : {BigRational(1, 1000), BigRational(-7, 3), BigRational(1, 1 << 20)}) {
            const RationalFunction perturbed = candidate.substitute(Var::u, e.mu[k - 1] + delta);
            CHECK(perturbed.den().evaluate(at) == 0);
        }
        CHECK(candidate.substitute(Var::u, e.mu[k - 1]) == e.F[k]);
    }
}

TEST_CASE("expansion is deterministic", "[gspm][property]") {
    const auto a = expansion_to_json(expand_canard(vdp(), 3, fold_at(vdp(), 1))).dump();
    const auto b = expansion_to_json(expand_canard(vdp(), 3, fold_at(vdp(), 1))).dump();
    CHECK(a == b);
}

TEST_CASE("expansion JSON round trip", "[gspm][json]") {
    const CanardExpansion e = expand_canard(vdp(), 4, fold_at(vdp(), 1));
    const auto doc = expansion_to_json(e);
    CHECK(doc["mu"] == nlohmann::json::array({"1", "-1/8", "-3/32", "-173/1024"}));
    CHECK(doc["method"] == "gspm");
    const CanardExpansion back = expansion_from_json(doc.dump());
    CHECK(back.F == e.F);
    CHECK(back.mu == e.mu);
    CHECK(*back.fold.exact_x0 == 1);
    CHECK(code_of([] { expansion_from_json(R"({"method":"gspm","order":1,"mu":[],"F":[]})"); }) == ErrorCode::SyntaxError);
}

TEST_CASE("solver errors", "[gspm][errors]") {
    // g independent of mu: nothing to tune.
    const SPSystem free = make_system("free", P("x + y - x^3/3"), P("1/2 - x"));
    CHECK(code_of([&] { expand_canard(free, 1, fold_at(free, 1)); }) == ErrorCode::ParameterUnsolvable);

    // Double root of F0' at the fold leaves a pole one parameter cannot remove.
    const SPSystem cusp = make_system("cusp", P("y - x^3"), P("mu - x"));
    CHECK(code_of([&] { expand_canard(cusp, 1, fold_at(cusp, 0)); }) == ErrorCode::UnremovableSingularity);

    // mu multiplies the fast equation, so the order-1 relation is not affine in mu_0.
    const SPSystem scaled = make_system("scaled", P("(1 + mu)*(x + y - x^3/3)"), P("mu - x"));
    CHECK(code_of([&] { expand_canard(scaled, 1, fold_at(scaled, 1)); }) == ErrorCode::NonlinearParameterEntry);

    const SPSystem irr = make_system("irr", P("y - x^3/3 + 2*x"), P("mu - x"));
    const FoldPoint inexact = select_fold(fold_points(critical_manifold(irr)));
    CHECK(code_of([&] { expand_canard(irr, 1, inexact); }) == ErrorCode::InexactFold);

    CHECK(code_of([] { expand_canard(vdp(), 0, fold_at(vdp(), 1)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("a general polynomial system", "[gspm][expand_canard]") {
    // Van der Pol shifted by x -> x + 1: the folds move to 0 and -2.
    const SPSystem shifted = make_system("shifted", P("(x+1) + y - (x+1)^3/3"), P("mu - (x+1)"));
    const CanardExpansion e = expand_canard(shifted, 3, fold_at(shifted, 0));
    CHECK(e.mu == Qs({{1, 1}, {-1, 8}, {-3, 32}}));
    for (unsigned N : {1U, 2U, 3U}) CHECK(invariance_residual(shifted, expand_canard(shifted, N, fold_at(shifted, 0))).verified_order >= static_cast<int>(N));
}
