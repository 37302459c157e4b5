#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cga/exact_linalg.hpp"

using namespace cga;

namespace {
Poly X() { return Poly::monomial(1, 1); }
}  // namespace

TEST_CASE("polynomial division and gcd") {
    Poly a = (X() - Poly(2)) * (X() + Poly(GaussianRational::i()));
    Poly b = (X() - Poly(2)) * (X() - Poly(3));
    CHECK(gcd(a, b) == X() - Poly(2));
    auto [q, r] = a.divmod(X() - Poly(2));
    CHECK(r.is_zero());
    CHECK(q == X() + Poly(GaussianRational::i()));
    CHECK(a.eval(2).is_zero());
    CHECK_THROWS_AS(a.divmod(Poly()), std::domain_error);
}

TEST_CASE("rational functions normalize") {
    RationalFunction f(X() * X() - Poly(1), Poly(2) * (X() - Poly(1)));
    CHECK(f == RationalFunction(Poly(GaussianRational(Rational(1, 2))) * (X() + Poly(1)), Poly(1)));
    RationalFunction g = RationalFunction(1) / RationalFunction(X(), Poly(1));
    CHECK(g * RationalFunction(X(), Poly(1)) == RationalFunction(1));
    CHECK((g - g).is_zero());
}

TEST_CASE("coefficient conversion round-trips") {
    Coefficient c = Coefficient::gamma(-2) * Coefficient(3) + Coefficient::i() * Coefficient::gamma(1);
    auto f = to_rational_function(c, FormalSymbol::Gamma);
    CHECK(to_coefficient(f, FormalSymbol::Gamma) == c);
    Coefficient w = Coefficient::omega(2) - Coefficient(1);
    CHECK(to_coefficient(to_rational_function(w, FormalSymbol::Omega), FormalSymbol::Omega) == w);
    CHECK(detect_symbol({c, Coefficient(1)}) == FormalSymbol::Gamma);
    CHECK_THROWS_AS(detect_symbol({c, w}), std::invalid_argument);
    // 1/(X+1) has no Laurent form
    CHECK_FALSE(to_coefficient(RationalFunction(Poly(1), X() + Poly(1)), FormalSymbol::Gamma).has_value());
}

TEST_CASE("nullspace and solve over Q(i)(X)") {
    // [[X, 1], [X^2, X]] has rank 1 with kernel (1, -X)
    ExactMatrix m(2, 2);
    m(0, 0) = RationalFunction(X(), Poly(1));
    m(0, 1) = 1;
    m(1, 0) = RationalFunction(X() * X(), Poly(1));
    m(1, 1) = RationalFunction(X(), Poly(1));
    CHECK(m.rank() == 1);
    auto ns = m.nullspace();
    REQUIRE(ns.size() == 1);
    for (std::size_t r = 0; r < 2; ++r) CHECK((m(r, 0) * ns[0][0] + m(r, 1) * ns[0][1]).is_zero());
    for (const auto& e : clear_denominators(ns[0], false)) CHECK(e.den().is_constant());
    // the Laurent variant leaves at most a power of X downstairs
    for (const auto& e : clear_denominators(ns[0], true))
        CHECK(to_coefficient(e, FormalSymbol::Gamma).has_value());

    ExactMatrix a(2, 2);
    a(0, 0) = 1;
    a(0, 1) = GaussianRational::i();
    a(1, 0) = 2;
    a(1, 1) = 3;
    auto x = a.solve({1, 0});
    REQUIRE(x.has_value());
    CHECK((a(0, 0) * (*x)[0] + a(0, 1) * (*x)[1]) == RationalFunction(1));
    CHECK((a(1, 0) * (*x)[0] + a(1, 1) * (*x)[1]).is_zero());
    CHECK_FALSE(m.solve({1, 0}).has_value());
}

TEST_CASE("rational roots with multiplicities") {
    // 6 x^2 (x - 1/2)^3 (3x + 2)(x^2 + 2)
    const Poly half = X() - Poly(Rational(1, 2));
    const Poly p = Poly(6) * X() * X() * half * half * half * (Poly(3) * X() + Poly(2)) * (X() * X() + Poly(2));
    const RationalRoots r = rational_roots(p);
    CHECK(r.roots == std::vector<std::pair<Rational, int>>{{Rational(-2, 3), 1}, {Rational(0), 2}, {Rational(1, 2), 3}});
    CHECK(r.residual.degree() == 2);
    CHECK(r.residual.monic() == X() * X() + Poly(2));

    const RationalRoots none = rational_roots(X() * X() - Poly(2));
    CHECK(none.roots.empty());
    CHECK(none.residual.degree() == 2);
    CHECK_THROWS(rational_roots(X() - Poly(GaussianRational::i())));
}
