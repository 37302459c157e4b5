#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cga/realizations.hpp"

#include <string>
#include <vector>

using namespace cga;

namespace {
const WeylOp x = coordinate(0), y = coordinate(1), dx = partial(0), dy = partial(1), dt = partial_t();
const WeylOp t = time_var();
const Coefficient I = Coefficient::i();
const Coefficient g = Coefficient::gamma();
const Coefficient half = frac(1, 2);

WeylOp realize(const Realization& r, const GeneratorTable& tab, const LinearCombination& v) {
    WeylOp out;
    for (const auto& [k, c] : v) out += c * r[tab.names()[k]];
    return out;
}

// Pairs whose realized commutator disagrees with the table.
std::vector<std::string> mismatches(const Realization& r, const GeneratorTable& tab) {
    std::vector<std::string> bad;
    for (std::size_t a = 0; a < tab.size(); ++a)
        for (std::size_t b = a + 1; b < tab.size(); ++b) {
            WeylOp lhs = commutator(r[tab.names()[a]], r[tab.names()[b]]);
            if (!(lhs == realize(r, tab, tab.bracket(a, b))))
                bad.push_back(tab.names()[a] + "," + tab.names()[b] + ": " + lhs.to_string());
        }
    return bad;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) s += e + "\n";
    return s;
}
}  // namespace

TEST_CASE("abstract tables are antisymmetric Lie algebras") {
    for (const auto& tab : {cga32_table(), decoupled_generic_table(), enhanced_table(1), enhanced_table(3),
                            contraction_table()}) {
        auto violation = tab.jacobi_violation();
        CHECK_MESSAGE(!violation.has_value(), violation.value_or(""));
        CHECK(tab.central_elements_commute());
        for (std::size_t a = 0; a < tab.size(); ++a)
            for (std::size_t b = 0; b < tab.size(); ++b) {
                LinearCombination s = tab.bracket(a, b);
                accumulate(s, tab.bracket(b, a));
                CHECK(s.empty());
            }
    }
}

TEST_CASE("printed structure constants") {
    GeneratorTable t = cga32_table();
    CHECK(t.bracket("z+", "z-") == LinearCombination{{t.index("z0"), -4 * I}});
    CHECK(t.bracket("z+", "w+3").empty());
    CHECK(t.bracket("w+1", "w-1") == LinearCombination{{t.index("c"), 16}});
    CHECK(t.bracket("w+3", "w-3") == LinearCombination{{t.index("c"), -48}});
    CHECK(t.bracket("z-", "w+1") == LinearCombination{{t.index("w-1"), 4 * I}});
    CHECK(enhanced_table(3).size() == 12);
    CHECK(enhanced_table(1).size() == 12);
    CHECK_THROWS_AS(enhanced_table(2), std::invalid_argument);
}

TEST_CASE("free and oscillator realizations reproduce the cga table") {
    auto bad = mismatches(realization_free(), cga32_table());
    CHECK_MESSAGE(bad.empty(), join(bad));
    bad = mismatches(realization_osc(), cga32_table());
    CHECK_MESSAGE(bad.empty(), join(bad));
    // with a numeric coupling as well
    bad = mismatches(realization_osc(Coefficient(frac(2, 3))), cga32_table());
    CHECK_MESSAGE(bad.empty(), join(bad));
}

TEST_CASE("catalog entries") {
    CHECK(realization_osc()["w+3"] == exp_phase(3) * dy);
    CHECK(realization_free()["z+"] == dt);
    CHECK(realization_osc()["c"] == WeylOp(g.pow(-2)));
    CHECK(decoupled_generic()["w+w"] == exp_phase(0, 1) * dy);
    CHECK(enhanced_extras(3)["r-3"] == exp_phase(-6) * y * y);
    CHECK(enhanced_extras(1)["q1"] == y * (dx + x));
}

TEST_CASE("quadratic combinations") {
    OmegaOps f = omega_ops(realization_free());
    CHECK(f.plus == I * dt - I * g * x * dy + half * partial(0, 2));
    OmegaOps o = omega_ops(realization_osc());
    CHECK(o.zero == I * dt + half * partial(0, 2) - half * coordinate(0, 2) - 3 * y * dy - I * g * x * dy -
                        Coefficient(frac(3, 2)));
    for (const OmegaOps& w : {f, o}) {
        CHECK(commutator(w.zero, w.plus) == -2 * w.plus);
        CHECK(commutator(w.zero, w.minus) == 2 * w.minus);
        CHECK(commutator(w.plus, w.minus) == 4 * w.zero);
        CHECK(w.plus.max_spatial_order() == 2);
    }
}

TEST_CASE("decoupled generators close their tables") {
    auto bad = mismatches(decoupled_generic(), decoupled_generic_table());
    CHECK_MESSAGE(bad.empty(), join(bad));
    for (int w : {1, 3}) {
        bad = mismatches(decoupled_enhanced(w), enhanced_table(w));
        CHECK_MESSAGE(bad.empty(), join(bad));
    }
}

TEST_CASE("named operators") {
    CHECK(h0() == -half * partial(0, 2) + half * coordinate(0, 2) + 3 * y * dy + I * g * x * dy +
                      Coefficient(frac(3, 2)));
    CHECK(theta_family(3, -g, frac(3, 2)) == -(omega_ops(realization_osc()).zero - I * dt));
    CHECK(decoupled_omega(3) == I * dt - theta_family(3, 0));
    CHECK(k_plus() == half * (dx + x) * (dx + x) - I * g * x * dy);
    CHECK(contraction_shift() == -I * Coefficient(frac(3, 2)) * t);
}

TEST_CASE("general ell builders") {
    GenParams p{3, {g}, {1}};
    CHECK(gen_osc(p) == I * dt - theta_family(3, -g, 0));
    CHECK(gen_free(p) == omega_ops(realization_free()).plus);
    GenParams q{5, {g, Coefficient::gamma(2)}, {-1, 1}};
    CHECK(q.omegas() == std::vector<int>{1, -3, 5});
    CHECK(gen_osc(q)[Monomial::parse("z^1*Dz^1")] == Coefficient(-5));
    CHECK(gen_osc(q)[Monomial::parse("y^1*Dy^1")] == Coefficient(3));
    CHECK_THROWS_AS(gen_osc(GenParams{5, {g}, {1, 1}}), BadArity);
    CHECK_THROWS_AS(gen_osc(GenParams{4, {g}, {1}}), BadArity);
    CHECK_THROWS_AS(gen_free(GenParams{3, {g}, {2}}), BadArity);
}

TEST_CASE("gamma limits of rescaled generators exist") {
    const std::vector<std::pair<std::string, int>> powers{{"z0", 0}, {"z+", 0}, {"z-", 1},  {"w+3", 0},
                                                          {"w+1", 1}, {"w-1", 1}, {"w-3", 2}, {"c", 2}};
    for (const Realization& r : {realization_free(), realization_osc()})
        for (const auto& [label, s] : powers) CHECK_NOTHROW(gamma_limit(Coefficient::gamma(s) * r[label]));
    CHECK_THROWS_AS(gamma_limit(realization_osc()["c"]), SingularLimit);
}
