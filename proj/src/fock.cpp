#include "cga/fock.hpp"

#include "cga/exact_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cga {

namespace {

const Coefficient I = Coefficient::i();

Powers powers(int p0, int p1 = 0) {
    Powers p{};
    p[0] = static_cast<std::uint16_t>(p0);
    p[1] = static_cast<std::uint16_t>(p1);
    return p;
}

Wavefunction wavefunction(std::initializer_list<std::pair<Powers, Coefficient>> terms, int phase) {
    Wavefunction::Poly poly;
    for (const auto& [p, c] : terms) poly[p] += c;
    return Wavefunction(poly, true, {phase, 0});
}

}  // namespace

// --- ladder words ------------------------------------------------------

namespace ladder {
LadderOp a() { return partial(0); }
LadderOp a_dag() { return coordinate(0); }
LadderOp b() { return partial(1); }
LadderOp b_dag() { return coordinate(1); }
}  // namespace ladder

bool is_ladder(const LadderOp& op) {
    for (const auto& [m, c] : op.terms()) {
        if (!m.phase.is_trivial() || m.t_pow != 0 || m.dt_pow != 0 || m.arity() > 2) return false;
        if (c.depends_on_omega()) return false;
    }
    return true;
}

std::string ladder_string(const LadderOp& op) {
    if (!is_ladder(op)) throw std::invalid_argument("not a ladder word: " + op.to_string());
    if (op.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : op.terms()) {
        if (!first) out << " + ";
        first = false;
        out << "(" << c.to_string() << ")";
        std::vector<std::string> parts;
        auto put = [&](const char* s, int k) {
            if (k == 1) parts.emplace_back(s);
            if (k > 1) parts.push_back(std::string(s) + "^" + std::to_string(k));
        };
        put("a+", m.x[0]);
        put("b+", m.x[1]);
        put("a", m.dx[0]);
        put("b", m.dx[1]);
        for (const auto& p : parts) out << "*" << p;
    }
    return out.str();
}

LadderOp k_operator(const Coefficient& gbar, int b_mode) {
    using namespace ladder;
    return a_dag() * a() + Coefficient(b_mode) * b_dag() * b() + Coefficient(frac(1, 2)) + gbar * (a() + a_dag()) * b();
}

LadderOp decoupling_exponent_ladder(const Coefficient& gbar) {
    using namespace ladder;
    return gbar * Coefficient(frac(1, 2)) * a_dag() * b() + gbar * Coefficient(frac(1, 4)) * a() * b() +
           gbar * gbar * Coefficient(frac(1, 48)) * b() * b();
}

// --- symbolic eigenfunctions of H0 -------------------------------------

bool H0EigenReport::printed_all_match() const {
    return std::all_of(printed.begin(), printed.end(), [](const auto& p) { return p.matches; });
}

H0EigenReport h0_eigencheck(int max_level) {
    const Realization o = realization_osc();
    const WeylOp h = h0();
    const Coefficient g = Coefficient::gamma();
    auto require_zero = [](const std::string& what, const WeylOp& r) {
        if (!r.is_zero()) throw IdentityFailure(what, r.to_string());
    };
    const Wavefunction ground = Wavefunction::ground();
    for (const char* label : {"w+1", "w+3"}) {
        Wavefunction r = apply(o[label], ground);
        if (!r.is_zero()) throw IdentityFailure(std::string(label) + " psi00 = 0", r.to_string());
    }
    require_zero("[H0, w-1] = w-1", commutator(h, o["w-1"]) - o["w-1"]);
    require_zero("[H0, w-3] = 3 w-3", commutator(h, o["w-3"]) - Coefficient(3) * o["w-3"]);
    require_zero("H0 = gamma^2/16 (w-1 w+1 - w-3 w+3) + 2",
                 h - (g * g * Coefficient(frac(1, 16)) * (o["w-1"] * o["w+1"] - o["w-3"] * o["w+3"]) + Coefficient(2)));

    H0EigenReport rep;
    for (int m = 0; 3 * m <= max_level; ++m) {
        Wavefunction psi = ground;
        for (int k = 0; k < m; ++k) psi = apply(o["w-3"], psi);
        for (int n = 0; n + 3 * m <= max_level; ++n) {
            const int e = n + 3 * m + 2;
            const std::string name = "psi(" + std::to_string(n) + "," + std::to_string(m) + ")";
            Wavefunction r = apply(h, psi) - Coefficient(e) * psi;
            if (!r.is_zero()) throw IdentityFailure("H0 " + name + " = " + std::to_string(e) + " " + name, r.to_string());
            if (psi.degree() != n + m || psi.phase() != Phase{-(n + 3 * m), 0})
                throw IdentityFailure(name + " has degree n+m and phase -(n+3m)", psi.to_string());
            rep.levels.push_back({n, m, e, psi});
            psi = apply(o["w-1"], psi);
        }
    }

    const Coefficient gi = Coefficient::gamma(-1), gi2 = Coefficient::gamma(-2), gi3 = Coefficient::gamma(-3);
    std::vector<std::pair<std::pair<int, int>, Wavefunction>> printed = {
        {{1, 0}, wavefunction({{powers(1), -8 * I * gi}}, -1)},
        {{2, 0}, wavefunction({{powers(0), 32 * gi2}, {powers(2), -64 * gi2}}, -2)},
        {{0, 1}, wavefunction({{powers(1), -24 * I * gi}, {powers(0, 1), -48 * gi2}}, -3)},
        {{1, 1}, wavefunction({{powers(0), 48 * gi2}, {powers(2), -192 * gi2}, {powers(1, 1), 192 * I * gi3}}, -4)},
    };
    for (const auto& [nm, p] : printed) {
        auto it = std::find_if(rep.levels.begin(), rep.levels.end(),
                               [&](const auto& l) { return l.n == nm.first && l.m == nm.second; });
        if (it == rep.levels.end()) continue;
        PrintedComparison c{nm.first, nm.second, p, it->psi, p == it->psi, false};
        c.printed_is_eigenfunction = (apply(h, p) - Coefficient(it->energy) * p).is_zero();
        rep.printed.push_back(c);
    }
    return rep;
}

// --- Bogoliubov-type modes ---------------------------------------------

namespace {

const std::array<LadderOp, 4>& mode_basis() {
    static const std::array<LadderOp, 4> basis{ladder::a(), ladder::a_dag(), ladder::b(), ladder::b_dag()};
    return basis;
}

// commutator of basis elements: [a, a+] = [b, b+] = 1
int basis_pairing(std::size_t i, std::size_t j) {
    if ((i == 0 && j == 1) || (i == 2 && j == 3)) return 1;
    if ((i == 1 && j == 0) || (i == 3 && j == 2)) return -1;
    return 0;
}

using RFVec = std::array<RationalFunction, 4>;

RationalFunction pairing(const RFVec& u, const RFVec& v) {
    RationalFunction s;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (int p = basis_pairing(i, j)) s += RationalFunction(p) * u[i] * v[j];
    return s;
}

Coefficient coefficient_or_throw(const RationalFunction& f, FormalSymbol s) {
    auto c = to_coefficient(f, s);
    if (!c) throw UnsupportedShape("mode coefficient " + f.to_string() + " is not Laurent");
    return *c;
}

}  // namespace

LadderOp ModeSolution::op() const {
    LadderOp r;
    for (std::size_t i = 0; i < 4; ++i) r += coeffs[i] * mode_basis()[i];
    return r;
}

std::array<std::array<Coefficient, 4>, 4> adjoint_matrix(const LadderOp& k) {
    std::array<std::array<Coefficient, 4>, 4> m{};
    for (std::size_t j = 0; j < 4; ++j) {
        WeylOp c = commutator(k, mode_basis()[j]);
        for (std::size_t i = 0; i < 4; ++i) {
            const Monomial& mi = mode_basis()[i].terms().begin()->first;
            m[i][j] = c[mi];
            c -= m[i][j] * mode_basis()[i];
        }
        if (!c.is_zero()) throw UnsupportedShape("ad_K leaves span{a, a+, b, b+}: " + c.to_string());
    }
    return m;
}

std::vector<ModeSolution> mode_solver_for(const LadderOp& k) {
    const auto adj = adjoint_matrix(k);
    std::vector<Coefficient> all;
    for (const auto& row : adj) all.insert(all.end(), row.begin(), row.end());
    const FormalSymbol s = detect_symbol(all);
    using RFMat = std::array<RFVec, 4>;
    RFMat m;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m[i][j] = to_rational_function(adj[i][j], s);

    // characteristic polynomial by Faddeev-LeVerrier
    auto mul = [](const RFMat& a, const RFMat& b) {
        RFMat c;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t l = 0; l < 4; ++l) c[i][j] += a[i][l] * b[l][j];
        return c;
    };
    std::vector<RationalFunction> cp(5);
    cp[4] = 1;
    RFMat mk{};
    for (int step = 1; step <= 4; ++step) {
        for (std::size_t i = 0; i < 4; ++i) mk[i][i] += cp[5 - step];
        RFMat prod = mul(m, mk);
        RationalFunction tr;
        for (std::size_t i = 0; i < 4; ++i) tr += prod[i][i];
        cp[4 - step] = -tr / RationalFunction(step);
        mk = prod;
    }
    std::vector<GaussianRational> pc;
    for (const auto& c : cp) {
        if (!c.is_constant()) throw UnsupportedShape("ad_K eigenvalues depend on the coupling");
        pc.push_back(c.num().is_zero() ? GaussianRational() : c.num()[0] / c.den()[0]);
    }
    RationalRoots rr = rational_roots(Poly(pc));
    if (rr.residual.degree() > 0) throw UnsupportedShape("ad_K has irrational eigenvalues");
    for (const auto& [r, mult] : rr.roots)
        if (mult > 1) throw DegenerateModes("ad_K eigenvalue " + to_string(r) + " has multiplicity " + std::to_string(mult));

    struct Raw {
        Rational lambda;
        RFVec v;
        std::size_t lead = 0;
        bool lowering = false;
    };
    std::vector<Raw> raw;
    for (const auto& [lambda, mult] : rr.roots) {
        ExactMatrix a(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) a(i, j) = m[i][j] - (i == j ? RationalFunction(GaussianRational(lambda)) : RationalFunction());
        auto ns = a.nullspace();
        if (ns.size() != 1) throw DegenerateModes("eigenspace of " + to_string(lambda) + " is not one-dimensional");
        Raw r{lambda, {}, 0, false};
        for (std::size_t i = 0; i < 4; ++i) r.v[i] = ns[0][i];
        r.lowering = r.v[1].is_zero() && r.v[3].is_zero();
        r.lead = r.v[0].is_zero() ? 2 : 0;
        if (r.lowering) {
            RationalFunction l = r.v[r.lead];
            for (auto& e : r.v) e /= l;
        }
        raw.push_back(r);
    }
    for (auto& up : raw) {
        if (up.lowering) continue;
        auto partner = std::find_if(raw.begin(), raw.end(), [&](const Raw& r) { return r.lowering && r.lambda == -up.lambda; });
        if (partner == raw.end()) throw DegenerateModes("mode " + to_string(up.lambda) + " has no lowering partner");
        RationalFunction p = pairing(partner->v, up.v);
        if (p.is_zero()) throw DegenerateModes("mode " + to_string(up.lambda) + " pairs to zero");
        for (auto& e : up.v) e /= p;
    }
    std::size_t lowering = std::count_if(raw.begin(), raw.end(), [](const Raw& r) { return r.lowering; });
    if (lowering != 2) throw DegenerateModes("expected two lowering modes, found " + std::to_string(lowering));

    std::vector<ModeSolution> out;
    for (const auto& r : raw) {
        ModeSolution ms{r.lambda, {}, r.lowering};
        for (std::size_t i = 0; i < 4; ++i) ms.coeffs[i] = coefficient_or_throw(r.v[i], s);
        out.push_back(ms);
    }
    // canonical relations among the modes
    for (const auto& x : out)
        for (const auto& y : out) {
            WeylOp c = commutator(x.op(), y.op());
            Coefficient expect = (x.lowering && !y.lowering && x.lambda == -y.lambda) ? Coefficient(1)
                                 : (!x.lowering && y.lowering && x.lambda == -y.lambda) ? Coefficient(-1)
                                                                                        : Coefficient();
            if (!(c == WeylOp(expect))) throw DegenerateModes("modes fail the canonical pairing: " + c.to_string());
        }
    return out;
}

std::vector<ModeSolution> mode_solver(const Coefficient& gbar, int b_mode) {
    return mode_solver_for(k_operator(gbar, b_mode));
}

std::array<std::array<Coefficient, 4>, 4> invert_modes(const std::vector<ModeSolution>& modes) {
    if (modes.size() != 4) throw std::invalid_argument("invert_modes needs four modes");
    std::vector<Coefficient> all;
    for (const auto& md : modes) all.insert(all.end(), md.coeffs.begin(), md.coeffs.end());
    const FormalSymbol s = detect_symbol(all);
    // rows of D with D C = I satisfy C^T d = e_j
    ExactMatrix ct(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) ct(j, i) = to_rational_function(modes[i].coeffs[j], s);
    std::array<std::array<Coefficient, 4>, 4> d{};
    for (std::size_t j = 0; j < 4; ++j) {
        ExactVector e(4);
        e[j] = 1;
        auto x = ct.solve(e);
        if (!x || ct.rank() != 4) throw DegenerateModes("mode transformation is singular");
        for (std::size_t i = 0; i < 4; ++i) d[j][i] = coefficient_or_throw((*x)[i], s);
    }
    return d;
}

namespace {

LadderOp mode_sum(const std::vector<ModeSolution>& modes, bool weighted) {
    LadderOp r;
    for (const auto& up : modes) {
        if (up.lowering) continue;
        for (const auto& down : modes)
            if (down.lowering && down.lambda == -up.lambda)
                r += (weighted ? Coefficient(up.lambda) : Coefficient(1)) * up.op() * down.op();
    }
    return r;
}

}  // namespace

LadderOp k_from_modes(const std::vector<ModeSolution>& modes) { return mode_sum(modes, true); }

LadderOp n_operator(const Coefficient& gbar, int b_mode) { return mode_sum(mode_solver(gbar, b_mode), false); }

std::pair<LadderOp, LadderOp> raising_modes(const std::vector<ModeSolution>& modes) {
    std::optional<LadderOp> first, second;
    for (const auto& up : modes) {
        if (up.lowering) continue;
        for (const auto& down : modes)
            if (down.lowering && down.lambda == -up.lambda) {
                // the a pair has its lowering member led by a
                if (!down.coeffs[0].is_zero()) first = up.op();
                else second = up.op();
            }
    }
    if (!first || !second) throw DegenerateModes("raising modes of both pairs are required");
    return {*first, *second};
}

std::map<std::pair<int, int>, Coefficient> eigenstate_exact(int n, int m, const Coefficient& gbar) {
    if (n < 0 || m < 0) throw std::invalid_argument("eigenstate_exact: negative quantum number");
    auto [a1, a3] = raising_modes(mode_solver(gbar));
    const WeylOp word = power(a1, n) * power(a3, m);
    std::map<std::pair<int, int>, Coefficient> out;
    for (const auto& [mono, c] : word.terms())
        if (!mono.has_derivatives()) out[{mono.x[0], mono.x[1]}] = c;
    return out;
}

// --- PT symmetry and the similarity transformation --------------------

bool pt_check(const WeylOp& op, bool gamma_imaginary) {
    WeylOp t = pt_transform(op);
    if (gamma_imaginary) {
        WeylOp flipped;
        for (const auto& [m, c] : t.terms()) {
            Coefficient cc;
            for (const auto& [p, v] : c.terms()) cc += Coefficient(p.gamma % 2 != 0 ? -v : v, p);
            flipped += WeylOp::monomial(m, cc);
        }
        t = flipped;
    }
    return t == op;
}

DecouplingReport kgamma_decoupling_check(const Coefficient& gbar) {
    const LadderOp e = decoupling_exponent_ladder(gbar);
    const LadderOp k0 = k_operator(Coefficient());
    const LadderOp kg = k_operator(gbar);
    DecouplingReport rep;
    rep.series_depth = series_length(e, k0);
    rep.inverse_orientation = similarity(e, k0) == kg;
    rep.printed_orientation = similarity(-e, k0) == kg;
    rep.k_commutes_with_n = commutator(kg, n_operator(gbar)).is_zero();
    return rep;
}

// --- truncated Fock numerics -------------------------------------------

FockBasis::FockBasis(int na, int nb) : na_(na), nb_(nb) {
    if (na < 1 || nb < 1) throw CutoffTooSmall("Fock cutoffs must be at least 1");
    for (int n = 0; n <= na; ++n)
        for (int m = 0; m <= nb; ++m) states_.emplace_back(n, m);
    std::sort(states_.begin(), states_.end(), [](const auto& p, const auto& q) {
        int ep = p.first + 3 * p.second, eq = q.first + 3 * q.second;
        return ep != eq ? ep < eq : p.first < q.first;
    });
    lookup_.assign(states_.size(), 0);
    for (std::size_t k = 0; k < states_.size(); ++k)
        lookup_[static_cast<std::size_t>(states_[k].first * (nb_ + 1) + states_[k].second)] = k;
}

std::size_t FockBasis::index(int n, int m) const {
    if (!contains(n, m)) throw std::out_of_range("state outside the truncated basis");
    return lookup_[static_cast<std::size_t>(n * (nb_ + 1) + m)];
}

Complex evaluate(const Coefficient& c, Complex gbar) {
    Complex s = 0;
    for (const auto& [p, v] : c.terms()) {
        if (p.omega != 0) throw UnsupportedSubstitution("omega has no value in the Fock numerics");
        if (p.gamma < 0 && gbar == Complex(0)) throw ZeroSubstitution("negative power of a vanishing gbar");
        s += Complex(v.re().get_d(), v.im().get_d()) * std::pow(gbar, p.gamma);
    }
    return s;
}

namespace {

// n! / (n-k)!
double falling(int n, int k) {
    double r = 1;
    for (int j = 0; j < k; ++j) r *= n - j;
    return r;
}

}  // namespace

FockMatrix fock_matrix(const LadderOp& op, Complex gbar, int na, int nb) {
    if (!is_ladder(op)) throw std::invalid_argument("fock_matrix needs a ladder word: " + op.to_string());
    FockBasis basis(na, nb);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
    for (const auto& [mono, c] : op.terms()) {
        const Complex v = evaluate(c, gbar);
        const int pa = mono.x[0], pb = mono.x[1], ra = mono.dx[0], rb = mono.dx[1];
        for (std::size_t j = 0; j < basis.size(); ++j) {
            auto [n, k] = basis.state(j);
            if (n < ra || k < rb) continue;
            const int n2 = n - ra + pa, k2 = k - rb + pb;
            if (!basis.contains(n2, k2)) continue;
            // one square root of the integer product keeps diagonal entries exact
            const double amp = std::sqrt(falling(n, ra) * falling(n2, pa) * falling(k, rb) * falling(k2, pb));
            m(static_cast<Eigen::Index>(basis.index(n2, k2)), static_cast<Eigen::Index>(j)) += v * amp;
        }
    }
    return {basis, m};
}

FockMatrix k_matrix(Complex gbar, int na, int nb, int b_mode) {
    return fock_matrix(k_operator(Coefficient::gamma(), b_mode), gbar, na, nb);
}

FockMatrix n_matrix(Complex gbar, int na, int nb) { return fock_matrix(n_operator(), gbar, na, nb); }

double max_below_diagonal(const FockMatrix& m) {
    double r = 0;
    for (Eigen::Index j = 0; j < m.m.cols(); ++j)
        for (Eigen::Index i = j + 1; i < m.m.rows(); ++i) r = std::max(r, std::abs(m.m(i, j)));
    return r;
}

double max_above_diagonal(const FockMatrix& m) {
    double r = 0;
    for (Eigen::Index j = 0; j < m.m.cols(); ++j)
        for (Eigen::Index i = 0; i < j; ++i) r = std::max(r, std::abs(m.m(i, j)));
    return r;
}

Spectrum spectrum(const FockMatrix& m, double tol) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.m);
    if (es.info() != Eigen::Success) throw ConvergenceFailure("eigensolver did not converge", INFINITY);
    Spectrum s;
    s.matrix_norm = m.m.norm();
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const Complex l = es.eigenvalues()(k);
        const Eigen::VectorXcd v = es.eigenvectors().col(k);
        s.max_residual = std::max(s.max_residual, (m.m * v - l * v).norm() / v.norm());
        s.values.push_back(l);
    }
    std::sort(s.values.begin(), s.values.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    if (s.max_residual > tol * std::max(1.0, s.matrix_norm))
        throw ConvergenceFailure("eigen residual " + std::to_string(s.max_residual) + " above tolerance", s.max_residual);
    return s;
}

namespace {

struct RaisingMatrices {
    Eigen::MatrixXcd a1;
    Eigen::MatrixXcd a3;
};

RaisingMatrices raising_matrices(Complex gbar, int na, int nb) {
    auto [a1, a3] = raising_modes(mode_solver());
    return {fock_matrix(a1, gbar, na, nb).m, fock_matrix(a3, gbar, na, nb).m};
}

Eigen::VectorXcd apply_raising(const RaisingMatrices& r, const FockBasis& basis, int n, int m) {
    if (n < 0 || m < 0) throw std::invalid_argument("eigenstate: negative quantum number");
    if (n + 3 * m > basis.na() || m > basis.nb())
        throw CutoffTooSmall("eigenstate (" + std::to_string(n) + "," + std::to_string(m) + ") touches the cutoff");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    v(static_cast<Eigen::Index>(basis.index(0, 0))) = 1;
    for (int k = 0; k < m; ++k) v = r.a3 * v;
    for (int k = 0; k < n; ++k) v = r.a1 * v;
    return v;
}

}  // namespace

FockVector eigenstate(int n, int m, Complex gbar, int na, int nb) {
    FockBasis basis(na, nb);
    return {basis, apply_raising(raising_matrices(gbar, na, nb), basis, n, m)};
}

double overlap_probability(const FockVector& s1, const FockVector& s2) {
    if (s1.v.size() != s2.v.size()) throw std::invalid_argument("overlap of vectors from different truncations");
    const double n1 = s1.v.norm(), n2 = s2.v.norm();
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("overlap with a zero vector");
    return std::norm(s1.v.dot(s2.v)) / (n1 * n1 * n2 * n2);
}

double eigenbasis_condition(Complex gbar, int na, int nb) {
    FockBasis basis(na, nb);
    const RaisingMatrices r = raising_matrices(gbar, na, nb);
    std::vector<std::pair<int, int>> states;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        auto [n, m] = basis.state(k);
        if (n + 3 * m <= na) states.emplace_back(n, m);
    }
    const auto d = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXcd e(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        Eigen::VectorXcd v = apply_raising(r, basis, states[static_cast<std::size_t>(j)].first, states[static_cast<std::size_t>(j)].second);
        v.normalize();
        for (Eigen::Index i = 0; i < d; ++i)
            e(i, j) = v(static_cast<Eigen::Index>(basis.index(states[static_cast<std::size_t>(i)].first, states[static_cast<std::size_t>(i)].second)));
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(e);
    const auto& sv = svd.singularValues();
    return sv(0) / sv(sv.size() - 1);
}

}  // namespace cga
