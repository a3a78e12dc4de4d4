#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <random>

#include "canardkit/fcm/cross_validate.hpp"
#include "canardkit/fcm/darboux.hpp"
#include "canardkit/fcm/extraction.hpp"
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

const VectorField kParabolaField{P("x"), P("2*y")};

} // namespace

TEST_CASE("Lie derivative", "[fcm][lie_derivative]") {
    CHECK(lie_derivative(P("y - x^2"), kParabolaField) == P("2*y - 2*x^2"));
    CHECK(lie_derivative(P("7/3"), vdp()).is_zero());
    CHECK(lie_derivative(P("x"), vdp()) == P("x + y - x^3/3"));
    CHECK(lie_derivative(P("y"), vdp()) == P("eps*(mu - x)"));
}

TEST_CASE("jets follow the Lie derivative", "[fcm][jets]") {
    const VectorField v = fast_time_field(vdp());
    const JetVector j = jets(v, 3);
    REQUIRE(j.components.size() == 3);
    CHECK(j.components[0].dx == v.dx);
    for (std::size_t k = 1; k < 3; ++k) {
        CHECK(j.components[k].dx == lie_derivative(j.components[k - 1].dx, v));
        CHECK(j.components[k].dy == lie_derivative(j.components[k - 1].dy, v));
    }
}

TEST_CASE("first curvature manifold of Van der Pol", "[fcm][curvature_manifold]") {
    const CurvatureManifold c = curvature_manifold(vdp(), 1);
    // det((f, eps g), (f_x f + eps g, -eps f)) = -eps (f^2 + (1 - x^2) f g + eps g^2) by hand.
    const Polynomial f = vdp().f;
    const Polynomial g = vdp().g;
    const Polynomial expected = f * f + P("1 - x^2") * f * g + P("eps") * g * g;
    CHECK(c.stripped_eps_power == 1);
    CHECK(c.phi == integer_primitive(expected).primitive);
    CHECK(c.phi.total_degree() == 6);
}

TEST_CASE("curvature chain sizes and eps degrees", "[fcm][curvature_manifold]") {
    const auto chain = curvature_chain(vdp(), 4);
    const unsigned degrees[] = {6, 8, 10, 12};
    for (std::size_t i = 0; i < chain.size(); ++i) {
        CHECK(chain[i].index == i + 1);
        CHECK(chain[i].phi.total_degree() == degrees[i]);
        CHECK(chain[i].phi.degree(Var::eps) >= (i == 0 ? 0U : chain[i - 1].phi.degree(Var::eps)));
    }
    // Raw phi_2 carries at least the eps degree of raw phi_1.
    const Polynomial raw1 = curvature_determinant(fast_time_field(vdp()));
    CHECK(lie_derivative(raw1, vdp()).degree(Var::eps) >= raw1.degree(Var::eps));

    CHECK(curvature_manifold(make_system("line", P("y"), Polynomial{}), 1).phi.is_zero());
    CHECK(code_of([] { curvature_manifold(vdp(), 5); }) == ErrorCode::CurvatureIndexLimit);
    CHECK(curvature_manifold(vdp(), 5, 5).index == 5);
    CHECK(curvature_to_json(chain[0])["stripped_eps_power"] == 1);
}

TEST_CASE("curvature cap from the environment", "[fcm][curvature_manifold]") {
    ::setenv("CANARDKIT_MAX_PHI", "2", 1);
    CHECK(max_phi_index() == 2);
    CHECK(code_of([] { curvature_manifold(vdp(), 3); }) == ErrorCode::CurvatureIndexLimit);
    ::setenv("CANARDKIT_MAX_PHI", "zero", 1);
    CHECK(code_of([] { (void)max_phi_index(); }) == ErrorCode::InvalidArgument);
    ::unsetenv("CANARDKIT_MAX_PHI");
    CHECK(max_phi_index() == kDefaultMaxPhi);
}

TEST_CASE("zero set is unchanged by rescaling time", "[fcm][property]") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> c(-5, 5);
    std::vector<SPSystem> systems{vdp()};
    for (int i = 0; i < 2; ++i) {
        Polynomial f = P("y") * BigRational(c(rng) == 0 ? 1 : 2) + P("x^3") * BigRational(c(rng), 3) + P("x*mu") * BigRational(c(rng)) + P("x") * BigRational(c(rng));
        Polynomial g = P("mu") + P("x^2") * BigRational(c(rng)) + P("x*eps") * BigRational(c(rng)) + P("y") * BigRational(c(rng), 2);
        systems.push_back(make_system("random", f, g));
    }
    for (const SPSystem& s : systems) {
        // Slow time: (f/eps, g), rational in eps.
        const RationalFunction eps(var(Var::eps));
        const RationalFunction xd = RationalFunction(s.f) / eps;
        const RationalFunction yd(s.g);
        auto lie = [&](const RationalFunction& p) { return p.derivative(Var::x) * xd + p.derivative(Var::y) * yd; };
        const RationalFunction slow = xd * lie(yd) - yd * lie(xd);
        const Polynomial fast = curvature_determinant(fast_time_field(s));
        CHECK(slow * eps.pow(3) == RationalFunction(fast));
        CHECK(normalize_curvature(1, (slow * eps.pow(3)).as_polynomial()).phi == normalize_curvature(1, fast).phi);
    }
}

TEST_CASE("Darboux check", "[fcm][darboux_check]") {
    const DarbouxReport parabola = darboux_check(P("y - x^2"), kParabolaField);
    CHECK(parabola.exact);
    REQUIRE(parabola.cofactor.has_value());
    CHECK(*parabola.cofactor == P("2"));
    CHECK(parabola.remainder.is_zero());
    CHECK((lie_derivative(P("y - x^2"), kParabolaField) - *parabola.cofactor * P("y - x^2")).is_zero());

    const DarbouxReport line = darboux_check(P("y - x"), kParabolaField);
    CHECK_FALSE(line.exact);
    CHECK_FALSE(line.cofactor.has_value());
    CHECK_FALSE(line.remainder.is_zero());

    // Other exact invariants re-verify by expansion.
    for (const char* phi : {"x", "y", "x*y", "y^3 - 2*x^6"}) {
        const DarbouxReport r = darboux_check(P(phi), kParabolaField);
        REQUIRE(r.exact);
        CHECK((lie_derivative(P(phi), kParabolaField) - *r.cofactor * P(phi)).is_zero());
    }
    CHECK(code_of([] { darboux_check(Polynomial{}, kParabolaField); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Van der Pol phi_1 is invariant only to O(eps^2)", "[fcm][darboux_check]") {
    const SPSystem s = vdp();
    const DarbouxReport r = darboux_check(curvature_manifold(s, 1).phi, s);
    CHECK_FALSE(r.exact);
    // Restrict the remainder to y = F0 + eps F1 with F1 = (mu - x)/(x^2 - 1).
    EpsSeries y(3);
    y[0] = R("x^3/3 - x");
    y[1] = R("mu - x", "x^2 - 1");
    const EpsSeries restricted = compose(r.remainder, {{Var::y, y}}, 3);
    CHECK(restricted[0].is_zero());
    CHECK(restricted[1].is_zero());
    CHECK_FALSE(restricted.is_zero());
}

TEST_CASE("FCM expansion of Van der Pol", "[fcm][fcm_expand]") {
    const SPSystem s = vdp();
    const FcmResult r = fcm_expand_detailed(s, 3, fold_at(s, 1));
    const CanardExpansion& e = r.expansion;
    CHECK(r.steps[0].a10 == R("-1 + x^2"));
    CHECK(e.F[0] == R("x^3/3 - x"));
    CHECK(r.steps[1].a01.substitute(Var::u, RationalFunction(var(Var::mu))) == R("mu - x", "x^2 - 1"));
    CHECK(r.steps[0].a01 == R("mu - x", "x^2 - 1"));
    CHECK(e.F[1] == R("-1", "1 + x"));
    CHECK(e.F[2] == R("-(x^2 + 4*x + 7)", "8*(1 + x)^4"));
    REQUIRE(e.mu.size() == 3);
    CHECK(e.mu[0] == 1);
    CHECK(e.mu[1] == BigRational(-1, 8));
    CHECK(e.mu[2] == BigRational(-3, 32));
    for (unsigned n = 0; n <= 2; ++n) {
        CHECK(r.steps[n].a10 == e.F[n].derivative(Var::x));
        CHECK(r.steps[n].phi_index_used == std::max(1U, n));
    }
    CHECK(e.method == Method::fcm);
}

TEST_CASE("FCM and GSPM agree", "[fcm][cross_validate]") {
    const SPSystem s = vdp();
    const CanardExpansion g3 = expand_canard(s, 3, fold_at(s, 1));
    const CanardExpansion f3 = fcm_expand(s, 3, fold_at(s, 1));
    const CrossValidation same = cross_validate(g3, f3);
    CHECK(same.equal);
    CHECK(same.compared_order == 3);

    CHECK(cross_validate(g3, g3).equal);

    const CrossValidation truncated = cross_validate(expand_canard(s, 4, fold_at(s, 1)), fcm_expand(s, 2, fold_at(s, 1)));
    CHECK(truncated.equal);
    CHECK(truncated.compared_order == 2);

    CanardExpansion bad = g3;
    bad.mu[1] = BigRational(-1, 7);
    bad.F[2] = -bad.F[2];
    const CrossValidation diff = cross_validate(g3, bad);
    CHECK_FALSE(diff.equal);
    CHECK(diff.divergences == std::vector<std::string>{"mu1", "F2"});

    const CanardExpansion mirrored = fcm_expand(s, 2, fold_at(s, -1));
    CHECK(cross_validate(mirrored, expand_canard(s, 2, fold_at(s, -1))).equal);
    CHECK(cross_validate(mirrored, f3).divergences.front() == "fold");
}

TEST_CASE("FCM errors", "[fcm][errors]") {
    const SPSystem s = vdp();
    CHECK(code_of([&] { fcm_expand(s, 5, fold_at(s, 1)); }) == ErrorCode::CurvatureIndexLimit);
    CHECK(code_of([&] { fcm_expand(s, 0, fold_at(s, 1)); }) == ErrorCode::InvalidArgument);
    const SPSystem free = make_system("free", P("x + y - x^3/3"), P("1/2 - x"));
    CHECK(code_of([&] { fcm_expand(free, 1, fold_at(free, 1)); }) == ErrorCode::ParameterUnsolvable);
}

TEST_CASE("phi_4 reproduces mu_3", "[fcm][fcm_expand]") {
    const SPSystem s = vdp();
    const CanardExpansion f4 = fcm_expand(s, 4, fold_at(s, 1));
    CHECK(f4.mu.back() == BigRational(-173, 1024));
    CHECK(cross_validate(expand_canard(s, 4, fold_at(s, 1)), f4).equal);
}
