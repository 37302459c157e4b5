#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cga/fock.hpp"

#include <algorithm>
#include <cmath>

using namespace cga;

namespace {
const Coefficient g = Coefficient::gamma();
const Coefficient I = Coefficient::i();

// Ladder matrices on the product basis n * (nb + 1) + m, built from the textbook actions.
struct ProductLadders {
    int na, nb;
    Eigen::MatrixXcd a, ad, b, bd;
};

ProductLadders product_ladders(int na, int nb) {
    const int d = (na + 1) * (nb + 1);
    ProductLadders p{na, nb, Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXcd::Zero(d, d),
                     Eigen::MatrixXcd::Zero(d, d)};
    auto idx = [&](int n, int m) { return n * (nb + 1) + m; };
    for (int n = 0; n <= na; ++n)
        for (int m = 0; m <= nb; ++m) {
            if (n > 0) p.a(idx(n - 1, m), idx(n, m)) = std::sqrt(double(n));
            if (n < na) p.ad(idx(n + 1, m), idx(n, m)) = std::sqrt(double(n + 1));
            if (m > 0) p.b(idx(n, m - 1), idx(n, m)) = std::sqrt(double(m));
            if (m < nb) p.bd(idx(n, m + 1), idx(n, m)) = std::sqrt(double(m + 1));
        }
    return p;
}

// K built on a larger product space, then projected and permuted into the energy order.
Eigen::MatrixXcd k_oracle(Complex gbar, int na, int nb) {
    ProductLadders p = product_ladders(na + 2, nb + 2);
    Eigen::MatrixXcd k = p.ad * p.a + 3.0 * p.bd * p.b + 0.5 * Eigen::MatrixXcd::Identity(p.a.rows(), p.a.cols()) +
                         gbar * (p.a + p.ad) * p.b;
    FockBasis basis(na, nb);
    Eigen::MatrixXcd out(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            auto [n1, m1] = basis.state(i);
            auto [n2, m2] = basis.state(j);
            out(i, j) = k(n1 * (nb + 3) + m1, n2 * (nb + 3) + m2);
        }
    return out;
}

std::vector<double> sorted_levels(int na, int nb, int b_mode) {
    std::vector<double> v;
    for (int n = 0; n <= na; ++n)
        for (int m = 0; m <= nb; ++m) v.push_back(n + b_mode * m + 0.5);
    std::sort(v.begin(), v.end());
    return v;
}
}  // namespace

TEST_CASE("ladder words") {
    using namespace ladder;
    CHECK(commutator(a(), a_dag()) == WeylOp(1));
    CHECK(commutator(b(), b_dag()) == WeylOp(1));
    CHECK(commutator(a(), b_dag()).is_zero());
    CHECK(a_dag() * a() == a() * a_dag() - WeylOp(1));
    CHECK(ladder_string(k_operator()) == "((1/2)) + ((1)*g^1)*a*b + ((3))*b+*b + ((1)*g^1)*a+*b + ((1))*a+*a");
    CHECK(is_ladder(k_operator()));
    CHECK_FALSE(is_ladder(exp_phase(1) * a()));
    CHECK_THROWS_AS(ladder_string(partial_t()), std::invalid_argument);
}

TEST_CASE("ground state and ladder identities of H0") {
    H0EigenReport rep = h0_eigencheck();
    CHECK(rep.levels.size() == 12);
    for (const auto& l : rep.levels) CHECK(l.energy == l.n + 3 * l.m + 2);
    auto e20 = std::find_if(rep.levels.begin(), rep.levels.end(), [](const auto& l) { return l.n == 2 && l.m == 0; });
    REQUIRE(e20 != rep.levels.end());
    CHECK(e20->energy == 4);
    REQUIRE(rep.printed.size() == 4);
    // three printed eigenfunctions agree exactly; the printed psi(1,1) has 4i/gamma where 8i/gamma is required
    for (const auto& p : rep.printed) {
        bool expect = !(p.n == 1 && p.m == 1);
        CHECK_MESSAGE(p.matches == expect, p.n << "," << p.m);
        CHECK(p.printed_is_eigenfunction == expect);
    }
    Wavefunction::Poly poly;
    Powers x{}, x2{}, xy{};
    x2[0] = 2;
    xy[0] = 1;
    xy[1] = 1;
    poly[x] = 48 * Coefficient::gamma(-2);
    poly[x2] = -192 * Coefficient::gamma(-2);
    poly[xy] = 384 * I * Coefficient::gamma(-3);
    CHECK(rep.printed[3].computed == Wavefunction(poly, true, {-4, 0}));
    CHECK_FALSE(rep.printed_all_match());
}

TEST_CASE("mode solver") {
    auto modes = mode_solver();
    REQUIRE(modes.size() == 4);
    std::vector<Rational> lambdas;
    for (const auto& md : modes) lambdas.push_back(md.lambda);
    CHECK(lambdas == std::vector<Rational>{-3, -1, 1, 3});
    const LadderOp k = k_operator();
    for (const auto& md : modes) CHECK(commutator(k, md.op()) == Coefficient(md.lambda) * md.op());
    CHECK(modes[0].op() == ladder::b());
    CHECK(modes[0].lowering);
    CHECK(modes[1].lowering);
    // the printed modes are these with gbar -> -gbar
    using namespace ladder;
    const Coefficient h = Coefficient(frac(1, 2)), q = Coefficient(frac(1, 4));
    CHECK(modes[1].op() == a() - h * g * b());
    CHECK(modes[2].op() == a_dag() + q * g * b());
    CHECK(modes[3].op() == b_dag() + h * g * a_dag() + q * g * a() + Coefficient(frac(1, 24)) * g * g * b());
    CHECK(modes[1].coeffs[2] == -h * g);
    // pairing [A_-i, A_j] = delta_ij and commuting raisers and lowerers
    CHECK(commutator(modes[1].op(), modes[2].op()) == WeylOp(1));
    CHECK(commutator(modes[0].op(), modes[3].op()) == WeylOp(1));
    CHECK(commutator(modes[1].op(), modes[3].op()).is_zero());
    CHECK(commutator(modes[0].op(), modes[2].op()).is_zero());
    CHECK(commutator(modes[2].op(), modes[3].op()).is_zero());
    CHECK(commutator(modes[0].op(), modes[1].op()).is_zero());
    // K and N from the modes
    CHECK(k - k_from_modes(modes) == WeylOp(Coefficient(frac(1, 2))));
    CHECK(n_operator() == a_dag() * a() + b_dag() * b() + h * g * a() * b() - Coefficient(frac(1, 12)) * g * g * b() * b());
    CHECK(commutator(k, n_operator()).is_zero());
    // the adjoint matrix is exact
    auto adj = adjoint_matrix(k);
    CHECK(adj[0][0] == Coefficient(-1));
    CHECK(adj[2][1] == g);
    CHECK(adj[1][3] == g);
}

TEST_CASE("mode transformation is invertible") {
    auto modes = mode_solver();
    auto d = invert_modes(modes);
    const std::array<LadderOp, 4> basis{ladder::a(), ladder::a_dag(), ladder::b(), ladder::b_dag()};
    for (std::size_t j = 0; j < 4; ++j) {
        LadderOp back;
        for (std::size_t i = 0; i < 4; ++i) back += d[j][i] * modes[i].op();
        CHECK(back == basis[j]);
    }
    // numeric coupling and gbar = 0
    auto m0 = mode_solver(Coefficient());
    CHECK(m0[3].op() == ladder::b_dag());
    auto mq = mode_solver(Coefficient(frac(2, 3)));
    CHECK(mq[1].op() == ladder::a() - Coefficient(frac(1, 3)) * ladder::b());
}

TEST_CASE("degenerate modes are rejected") {
    CHECK_THROWS_AS(mode_solver(g, 1), DegenerateModes);
    CHECK_THROWS_AS(mode_solver_for(ladder::a_dag() * ladder::a() + ladder::b_dag() * ladder::b()), DegenerateModes);
    CHECK_THROWS_AS(adjoint_matrix(power(ladder::a(), 3)), UnsupportedShape);
}

TEST_CASE("unbounded variant modes") {
    auto modes = mode_solver(g, -3);
    REQUIRE(modes.size() == 4);
    for (const auto& md : modes) CHECK(commutator(k_operator(g, -3), md.op()) == Coefficient(md.lambda) * md.op());
    CHECK(modes[3].op() == ladder::b());
    CHECK(modes[3].lowering);
    CHECK_FALSE(modes[0].lowering);
}

TEST_CASE("exact eigenstates") {
    auto s11 = eigenstate_exact(1, 1);
    CHECK(s11.size() == 3);
    CHECK(s11[{1, 1}] == Coefficient(1));
    CHECK(s11[{2, 0}] == Coefficient(frac(1, 2)) * g);
    CHECK(s11[{0, 0}] == Coefficient(frac(1, 4)) * g);
    auto s01 = eigenstate_exact(0, 1);
    CHECK(s01[{0, 1}] == Coefficient(1));
    CHECK(s01[{1, 0}] == Coefficient(frac(1, 2)) * g);
    for (int n = 0; n <= 4; ++n) CHECK(eigenstate_exact(n, 0) == std::map<std::pair<int, int>, Coefficient>{{{n, 0}, 1}});
}

TEST_CASE("pt symmetry") {
    CHECK(pt_check(h0()));
    CHECK(pt_check(h0(Coefficient(frac(3, 7)))));
    CHECK_FALSE(pt_check(h0() + coordinate(0)));
    CHECK(pt_check(h0(Coefficient())));
    // K with gbar = i gamma / sqrt2 purely imaginary
    CHECK(pt_check(k_operator(), true));
    CHECK_FALSE(pt_check(k_operator(), false));
}

TEST_CASE("similarity to the decoupled oscillator") {
    DecouplingReport r = kgamma_decoupling_check();
    CHECK(r.ok());
    CHECK(r.inverse_orientation);
    CHECK_FALSE(r.printed_orientation);
    CHECK(r.series_depth == 2);
    CHECK(r.series_depth <= 4);
    DecouplingReport z = kgamma_decoupling_check(Coefficient());
    CHECK(z.series_depth == 0);
    CHECK(z.printed_orientation);
    CHECK(z.inverse_orientation);
}

TEST_CASE("truncated basis") {
    FockBasis b(3, 2);
    CHECK(b.size() == 12);
    for (std::size_t k = 1; k < b.size(); ++k) {
        auto [n0, m0] = b.state(k - 1);
        auto [n1, m1] = b.state(k);
        CHECK((n0 + 3 * m0 < n1 + 3 * m1 || (n0 + 3 * m0 == n1 + 3 * m1 && n0 < n1)));
        CHECK(b.index(n1, m1) == k);
    }
    CHECK_THROWS_AS(FockBasis(0, 3), CutoffTooSmall);
    // interior canonical relations
    FockMatrix a = fock_matrix(ladder::a(), 0, 6, 6), ad = fock_matrix(ladder::a_dag(), 0, 6, 6);
    Eigen::MatrixXcd c = a.m * ad.m - ad.m * a.m;
    for (std::size_t k = 0; k < a.basis.size(); ++k)
        if (a.basis.state(k).first < 6) CHECK(std::abs(c(k, k) - 1.0) < 1e-12);
}

TEST_CASE("k matrix") {
    for (Complex gb : {Complex(0), Complex(0.3), Complex(0.7, 0.2), Complex(2)}) {
        FockMatrix k = k_matrix(gb, 12, 12);
        CHECK(k.m.rows() == 169);
        CHECK((k.m - k_oracle(gb, 12, 12)).cwiseAbs().maxCoeff() < 1e-12);
        // couplings strictly lower n + 3m, so only the bra-above-ket triangle is filled
        CHECK(max_below_diagonal(k) == 0.0);
        for (std::size_t i = 0; i < k.basis.size(); ++i) {
            auto [n, m] = k.basis.state(i);
            CHECK(k.m(i, i) == Complex(n + 3 * m + 0.5));
        }
    }
    CHECK(max_above_diagonal(k_matrix(0)) == 0.0);
    CHECK(max_above_diagonal(k_matrix(0.7)) > 0.1);
    // <n-1, m-1|K|n, m> = gbar sqrt(n m)
    FockMatrix k = k_matrix(0.7, 4, 4);
    CHECK(std::abs(k.m(k.basis.index(1, 1), k.basis.index(2, 2)) - 0.7 * 2.0) < 1e-12);
    CHECK(std::abs(k.m(k.basis.index(3, 1), k.basis.index(2, 2)) - 0.7 * std::sqrt(6.0)) < 1e-12);
}

TEST_CASE("spectrum is independent of the coupling") {
    const std::vector<double> expect = sorted_levels(12, 12, 3);
    std::vector<Complex> base;
    for (Complex gb : {Complex(0), Complex(0.3), Complex(0.7, 0.2), Complex(2)}) {
        Spectrum s = spectrum(k_matrix(gb, 12, 12));
        REQUIRE(s.values.size() == expect.size());
        CHECK(s.max_residual <= 1e-9 * s.matrix_norm);
        for (std::size_t k = 0; k < expect.size(); ++k) CHECK(std::abs(s.values[k] - expect[k]) < 1e-9);
        if (base.empty()) base = s.values;
        for (std::size_t k = 0; k < base.size(); ++k) CHECK(std::abs(s.values[k] - base[k]) < 1e-9);
    }
    Spectrum s = spectrum(k_matrix(0.7, 12, 12));
    const std::vector<double> lowest{0.5, 1.5, 2.5, 3.5, 3.5};
    for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(s.values[k] - lowest[k]) < 1e-9);

    // unbounded variant n - 3m + 1/2
    Spectrum u = spectrum(k_matrix(0.7, 12, 12, -3));
    const std::vector<double> eu = sorted_levels(12, 12, -3);
    for (std::size_t k = 0; k < eu.size(); ++k) CHECK(std::abs(u.values[k] - eu[k]) < 1e-9);
    CHECK(u.values.front().real() < 0);
    CHECK(u.values.back().real() > 0);

    // N has the levels n + m
    Spectrum n = spectrum(n_matrix(Complex(0.7, 0.2), 8, 8));
    std::vector<double> en;
    for (int a = 0; a <= 8; ++a)
        for (int b = 0; b <= 8; ++b) en.push_back(a + b);
    std::sort(en.begin(), en.end());
    for (std::size_t k = 0; k < en.size(); ++k) CHECK(std::abs(n.values[k] - en[k]) < 1e-9);
}

TEST_CASE("numeric modes agree with matrix commutators") {
    const Complex gb(0.7, 0.2);
    ProductLadders p = product_ladders(10, 10);
    Eigen::MatrixXcd k = p.ad * p.a + 3.0 * p.bd * p.b + gb * (p.a + p.ad) * p.b;
    for (const auto& md : mode_solver()) {
        Eigen::MatrixXcd a = evaluate(md.coeffs[0], gb) * p.a + evaluate(md.coeffs[1], gb) * p.ad +
                             evaluate(md.coeffs[2], gb) * p.b + evaluate(md.coeffs[3], gb) * p.bd;
        Eigen::MatrixXcd r = k * a - a * k - double(md.lambda.get_d()) * a;
        // away from the truncation boundary
        for (int n = 0; n < 8; ++n)
            for (int m = 0; m < 8; ++m) CHECK(r.col(n * 11 + m).norm() < 1e-10);
    }
}

TEST_CASE("eigenstates and overlap probabilities") {
    for (double gb : {0.5, 1.0, 4.0}) {
        FockVector s11 = eigenstate(1, 1, gb), vac = eigenstate(0, 0, gb);
        CHECK(std::abs(overlap_probability(s11, vac) - gb * gb / (16 + 9 * gb * gb)) < 1e-12);
        CHECK(std::abs(overlap_probability(s11, s11) - 1.0) < 1e-12);
        // |1,1> + c2 |2,0> + c0 |0,0> in the unnormalized basis; |2,0> has norm sqrt2
        const auto& b = s11.basis;
        CHECK(std::abs(s11.v(b.index(1, 1)) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(s11.v(b.index(2, 0))) / std::sqrt(2.0) - gb / 2) < 1e-12);
        CHECK(std::abs(std::abs(s11.v(b.index(0, 0))) - gb / 4) < 1e-12);
        // eigenvector of K
        FockMatrix k = k_matrix(gb);
        CHECK((k.m * s11.v - 4.5 * s11.v).norm() < 1e-10);
    }
    const Complex gc(0.7, 0.2);
    const double m2 = std::norm(gc);
    CHECK(std::abs(overlap_probability(eigenstate(1, 1, gc), eigenstate(0, 0, gc)) - m2 / (16 + 9 * m2)) < 1e-12);
    for (double gb : {0.1, 1.0, 10.0, 100.0}) CHECK(overlap_probability(eigenstate(1, 1, gb), eigenstate(0, 0, gb)) < 1.0 / 9);
    CHECK(std::abs(overlap_probability(eigenstate(1, 1, 1e3), eigenstate(0, 0, 1e3)) - 1.0 / 9) < 1e-4);
    CHECK_THROWS_AS(eigenstate(13, 0, 1.0), CutoffTooSmall);
    CHECK_THROWS_AS(eigenstate(0, 5, 1.0), CutoffTooSmall);
    CHECK_NOTHROW(eigenstate(0, 4, 1.0));
}

TEST_CASE("eigenbasis condition") {
    CHECK(std::abs(eigenbasis_condition(0) - 1.0) < 1e-12);
    double c = eigenbasis_condition(Complex(0.7, 0.2));
    CHECK(std::isfinite(c));
    CHECK(c > 1.0);
    CHECK(c < 1e8);
}
