#include "cga/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace cga {

namespace {

const Coefficient I = Coefficient::i();

// Exponent vectors of total degree <= d in the first n coordinates.
std::vector<Powers> monomials_up_to(std::size_t n, int d) {
    std::vector<Powers> out;
    Powers p{};
    std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
        if (k == n) {
            out.push_back(p);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            p[k] = static_cast<std::uint16_t>(e);
            rec(k + 1, left - e);
        }
        p[k] = 0;
    };
    rec(0, d);
    std::sort(out.begin(), out.end(), [](const Powers& a, const Powers& b) {
        int da = 0, db = 0;
        for (std::size_t k = 0; k < kMaxCoords; ++k) da += a[k], db += b[k];
        return da != db ? da < db : a > b;
    });
    return out;
}

WeylOp function_monomial(const Powers& p, Phase phase) {
    Monomial m;
    m.phase = phase;
    m.x = p;
    return WeylOp::monomial(m);
}

WeylOp divide_by_t(const WeylOp& a) {
    WeylOp r;
    for (const auto& [m, c] : a.terms()) {
        Monomial n = m;
        --n.t_pow;
        r += WeylOp::monomial(n, c);
    }
    return r;
}

std::vector<Coefficient> all_coefficients(const std::vector<WeylOp>& ops) {
    std::vector<Coefficient> cs;
    for (const auto& op : ops)
        for (const auto& [m, c] : op.terms()) {
            cs.push_back(c);
            if (m.phase.n != 0) cs.push_back(Coefficient::omega());
        }
    return cs;
}

// Rows indexed by monomial, one column per operator.
ExactMatrix coefficient_matrix(const std::vector<WeylOp>& cols, FormalSymbol s, std::map<Monomial, std::size_t>& rows) {
    for (const auto& op : cols)
        for (const auto& [m, c] : op.terms()) rows.emplace(m, rows.size());
    ExactMatrix a(rows.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [m, c] : cols[j].terms()) a(rows.at(m), j) = to_rational_function(c, s);
    return a;
}

Coefficient to_coefficient_or_throw(const RationalFunction& f, FormalSymbol s) {
    auto c = to_coefficient(f, s);
    if (!c) throw std::runtime_error("coefficient " + f.to_string() + " is not a Laurent polynomial");
    return *c;
}

// An operator vector written as a combination with exact weights.
WeylOp combine(const std::vector<WeylOp>& basis, const ExactVector& v, std::size_t offset, FormalSymbol s) {
    WeylOp out;
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (!v[offset + k].is_zero()) out += to_coefficient_or_throw(v[offset + k], s) * basis[k];
    return out;
}

}  // namespace

std::string Multiplier::to_string() const {
    if (t_denominator == 0) return numerator.to_string();
    return "(" + numerator.to_string() + ") / t^" + std::to_string(t_denominator);
}

Multiplier multiplier_division(const WeylOp& c, const WeylOp& omega) {
    if (c.is_zero()) return {};
    WeylOp lead = time_derivative_part(omega);
    if (lead.size() != 1 || omega.max_time_order() != 1)
        throw std::invalid_argument("omega needs a single first-order time-derivative term");
    const auto& [m0, c0] = *lead.terms().begin();
    if (m0.has_derivatives() || m0.coordinate_degree() != 0 || c0.terms().size() != 1)
        throw std::invalid_argument("time-derivative coefficient of omega is not a unit");
    const int k = m0.t_pow;
    WeylOp unit_inverse = exp_phase(-m0.phase.m, -m0.phase.n) * c0.pow(-1);
    WeylOp f = time_derivative_part(c) * unit_inverse;
    if (!f.is_function()) throw NotInIdeal("time-derivative part of the commutator has derivatives");
    WeylOp residual = time_var(k) * c - f * omega;
    if (!residual.is_zero()) throw NotInIdeal("remainder " + residual.to_string());
    Multiplier out{f, k};
    while (out.t_denominator > 0 && std::all_of(out.numerator.terms().begin(), out.numerator.terms().end(),
                                                 [](const auto& t) { return t.first.t_pow > 0; })) {
        out.numerator = divide_by_t(out.numerator);
        --out.t_denominator;
    }
    return out;
}

TableCheck verify_table(const Realization& r, const GeneratorTable& t) {
    TableCheck out;
    const auto& names = t.names();
    for (std::size_t a = 0; a < names.size(); ++a)
        for (std::size_t b = a + 1; b < names.size(); ++b) {
            ++out.pairs;
            WeylOp expected;
            for (const auto& [k, c] : t.bracket(a, b)) expected += c * r[names[k]];
            WeylOp residual = commutator(r[names[a]], r[names[b]]) - expected;
            if (!residual.is_zero())
                out.failures.push_back("[" + names[a] + ", " + names[b] + "] residual " + residual.to_string());
        }
    return out;
}

bool OnShellReport::ok() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.multiplier.has_value(); });
}

std::vector<std::string> OnShellReport::nonzero() const {
    std::vector<std::string> out;
    for (const auto& e : entries)
        if (!e.commutator.is_zero()) out.push_back(e.generator);
    return out;
}

OnShellReport onshell_report(const Realization& r, const WeylOp& omega) {
    OnShellReport rep;
    for (std::size_t k = 0; k < r.size(); ++k) {
        OnShellEntry e{r.labels()[k], commutator(r.at(k), omega), std::nullopt};
        try {
            e.multiplier = multiplier_division(e.commutator, omega);
        } catch (const NotInIdeal&) {
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

// --- critical frequencies ----------------------------------------------

GaussianRational critical_first(const GaussianRational& w, const GaussianRational& l) {
    return l * (w * w + GaussianRational(1) - GaussianRational(frac(5, 2)) * l * l);
}

GaussianRational critical_second(const GaussianRational& w, const GaussianRational& l) {
    GaussianRational l2 = l * l, w2 = w * w;
    return GaussianRational(-3) * l2 + GaussianRational(3) * l2 * l2 + GaussianRational(2) * l * w +
           GaussianRational(4) * l2 * l * w - l2 * w2 - GaussianRational(2) * l * w2 * w;
}

namespace {

std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    mpz_class n = q.get_num(), d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    Rational r(sqrt(n), sqrt(d));
    r.canonicalize();
    return r;
}

}  // namespace

CriticalAnalysis critical_analysis() {
    const Poly W = Poly::monomial(1, 1);
    const Poly s = Poly(GaussianRational(frac(2, 5))) * (W * W + Poly(1));
    // Q = E + lambda * O with lambda^2 = s
    const Poly e = Poly(-3) * s + Poly(3) * s * s - s * W * W;
    const Poly o = Poly(2) * W + Poly(4) * s * W - Poly(2) * W * W * W;
    CriticalAnalysis out;
    out.eliminant = e * e - s * o * o;

    RationalRoots rr = rational_roots(out.eliminant);
    for (const auto& [r, mult] : rr.roots) out.rational_roots.push_back(r);
    out.residual_degree = rr.residual.degree();

    for (const auto& w : out.rational_roots) {
        auto l = rational_sqrt(s.eval(GaussianRational(w)).re());
        if (!l || *l == 0) continue;
        for (const Rational& cand : {Rational(-*l), *l}) {
            GaussianRational gw(w), gl(cand);
            if (critical_first(gw, gl).is_zero() && critical_second(gw, gl).is_zero())
                out.solutions.push_back({w, cand});
        }
    }
    return out;
}

std::vector<CriticalSolution> critical_frequencies() { return critical_analysis().solutions; }

// --- symmetry search ---------------------------------------------------

std::vector<Phase> lambda_candidates(const WeylOp& h) {
    if (!h.is_time_independent()) throw NonQuadratic("H must be time independent");
    for (const auto& [m, c] : h.terms())
        if (m.coordinate_degree() + m.spatial_order() > 2) throw NonQuadratic("H has a term of degree above 2");
    const std::size_t n = std::max<std::size_t>(h.arity(), 1);
    std::vector<WeylOp> basis;
    for (std::size_t k = 0; k < n; ++k) basis.push_back(coordinate(k));
    for (std::size_t k = 0; k < n; ++k) basis.push_back(partial(k));
    basis.push_back(WeylOp(1));
    const std::size_t dim = basis.size();

    // column j holds ad_H(basis_j)
    std::vector<std::vector<Coefficient>> cols(dim, std::vector<Coefficient>(dim));
    std::vector<Coefficient> all;
    for (std::size_t j = 0; j < dim; ++j) {
        WeylOp img = commutator(h, basis[j]);
        for (const auto& [m, c] : img.terms()) {
            std::size_t row = dim;
            if (m.coordinate_degree() + m.spatial_order() == 0) row = dim - 1;
            else if (m.coordinate_degree() + m.spatial_order() == 1) {
                for (std::size_t k = 0; k < n; ++k) {
                    if (m.x[k] == 1) row = k;
                    if (m.dx[k] == 1) row = n + k;
                }
            }
            if (row == dim || !m.phase.is_trivial() || m.t_pow || m.dt_pow)
                throw NonQuadratic("adjoint action leaves the linear span");
            cols[j][row] = c;
            all.push_back(c);
        }
    }
    const FormalSymbol s = detect_symbol(all);

    // lattice bounds from row sums of absolute coefficients
    double bound_m = 0, bound_n = 0;
    for (const auto& col : cols)
        for (const auto& c : col)
            for (const auto& [p, v] : c.terms()) {
                double a = std::abs(v.re().get_d()) + std::abs(v.im().get_d());
                (p.omega > 0 ? bound_n : bound_m) += a;
            }
    const int mb = static_cast<int>(std::ceil(bound_m)), nb = static_cast<int>(std::ceil(bound_n));
    const Poly X = Poly::monomial(1, 1);

    std::set<Phase> eig;
    for (int dn = -nb; dn <= nb; ++dn)
        for (int dm = -mb; dm <= mb; ++dm) {
            RationalFunction mu{GaussianRational(dm)};
            if (dn != 0) {
                if (s != FormalSymbol::Omega) continue;
                mu += RationalFunction(Poly(GaussianRational(dn)) * X, Poly(1));
            }
            ExactMatrix a(dim, dim);
            for (std::size_t j = 0; j < dim; ++j)
                for (std::size_t r = 0; r < dim; ++r) {
                    a(r, j) = to_rational_function(cols[j][r], s);
                    if (r == j) a(r, j) -= mu;
                }
            // [H, X] = mu X gives the phase lambda = -mu
            if (a.rank() < dim) eig.insert({-dm, -dn});
        }
    std::set<Phase> out{{0, 0}};
    for (const auto& a : eig) {
        out.insert(a);
        out.insert(-a);
        for (const auto& b : eig) {
            out.insert(a + b);
            out.insert(-(a + b));
        }
    }
    return {out.begin(), out.end()};
}

WeylOp spatial_hamiltonian(const WeylOp& omega) {
    if (!(time_derivative_part(omega) == WeylOp(I)) || omega.max_time_order() != 1)
        throw std::invalid_argument("expected i Dt - H");
    WeylOp h = I * partial_t() - omega;
    if (!h.is_time_independent()) throw std::invalid_argument("H must be time independent");
    return h;
}

std::vector<SymmetryResult> find_symmetries(const WeylOp& omega, const SymmetryOptions& opt) {
    const WeylOp h = spatial_hamiltonian(omega);
    const std::size_t n = std::max<std::size_t>(h.arity(), 1);
    std::vector<Phase> lambdas = opt.lambdas ? *opt.lambdas : lambda_candidates(h);
    if (!h.depends_on_omega())
        for (auto& l : lambdas)
            if (l.n != 0) throw std::invalid_argument("omega phase requested for an omega-free operator");
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

    const auto zpows = monomials_up_to(n, opt.degree_bound);
    const auto fpows = monomials_up_to(n, opt.degree_bound + 2);
    std::vector<SymmetryResult> results;
    for (const Phase& lam : lambdas) {
        std::vector<WeylOp> zbasis;
        const WeylOp e = exp_phase(lam.m, lam.n);
        if (opt.ansatz == Ansatz::TimeTranslationPlusFirstOrder) zbasis.push_back(e * partial_t());
        auto fits = [&](const Powers& p, int extra) {
            if (!opt.max_weyl_degree) return true;
            int d = extra;
            for (auto e : p) d += e;
            return d <= *opt.max_weyl_degree;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& p : zpows)
                if (fits(p, 1)) zbasis.push_back(function_monomial(p, lam) * partial(i));
        for (const auto& p : zpows)
            if (fits(p, 0)) zbasis.push_back(function_monomial(p, lam));
        std::vector<WeylOp> fbasis;
        for (const auto& p : fpows) fbasis.push_back(function_monomial(p, lam));

        std::vector<WeylOp> cols;
        for (const auto& z : zbasis) cols.push_back(commutator(z, omega));
        for (const auto& f : fbasis) cols.push_back(-(f * omega));
        std::vector<Coefficient> cs = all_coefficients(cols);
        const FormalSymbol s = detect_symbol(cs);
        std::map<Monomial, std::size_t> rows;
        ExactMatrix a = coefficient_matrix(cols, s, rows);

        for (const auto& v : a.nullspace()) {
            ExactVector w = clear_denominators(v, s == FormalSymbol::Gamma);
            WeylOp z = combine(zbasis, w, 0, s);
            if (z.is_zero()) continue;
            // independent re-check against the division algorithm
            Multiplier f = multiplier_division(commutator(z, omega), omega);
            results.push_back({lam, std::move(z), std::move(f)});
        }
    }
    return results;
}

// --- closure and structure ---------------------------------------------

GeneratorTable close_algebra(const std::vector<WeylOp>& gens, std::vector<std::string> names) {
    if (names.empty())
        for (std::size_t k = 0; k < gens.size(); ++k) names.push_back("g" + std::to_string(k));
    if (names.size() != gens.size()) throw std::invalid_argument("one name per generator");
    std::vector<std::vector<WeylOp>> comm(gens.size(), std::vector<WeylOp>(gens.size()));
    std::vector<WeylOp> everything = gens;
    for (std::size_t a = 0; a < gens.size(); ++a)
        for (std::size_t b = a + 1; b < gens.size(); ++b) {
            comm[a][b] = commutator(gens[a], gens[b]);
            everything.push_back(comm[a][b]);
        }
    const FormalSymbol s = detect_symbol(all_coefficients(everything));
    std::map<Monomial, std::size_t> rows;
    for (const auto& op : everything)
        for (const auto& [m, c] : op.terms()) rows.emplace(m, rows.size());
    ExactMatrix a = coefficient_matrix(gens, s, rows);
    if (a.rank() != gens.size()) throw std::invalid_argument("generators are linearly dependent");

    GeneratorTable t(names);
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (std::all_of(gens.begin(), gens.end(), [&](const WeylOp& g) { return commutator(gens[i], g).is_zero(); }))
            t.mark_central(i);
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            const WeylOp& c = comm[i][j];
            if (c.is_zero()) continue;
            ExactVector rhs(rows.size());
            for (const auto& [m, v] : c.terms()) rhs[rows.at(m)] = to_rational_function(v, s);
            auto x = a.solve(rhs);
            if (!x) throw NotClosed("[" + names[i] + ", " + names[j] + "]", c);
            LinearCombination lc;
            for (std::size_t k = 0; k < gens.size(); ++k)
                if (!(*x)[k].is_zero()) lc[k] = to_coefficient_or_throw((*x)[k], s);
            t.set(i, j, lc);
        }
    return t;
}

namespace {

struct Structure {
    std::size_t n;
    FormalSymbol s;
    std::vector<std::vector<ExactVector>> c;  // c[i][j] = [g_i, g_j]

    ExactVector bracket(const ExactVector& u, const ExactVector& v) const {
        ExactVector r(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (u[i].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (v[j].is_zero()) continue;
                RationalFunction w = u[i] * v[j];
                for (std::size_t k = 0; k < n; ++k)
                    if (!c[i][j][k].is_zero()) r[k] += w * c[i][j][k];
            }
        }
        return r;
    }
};

// Row-reduced basis of span(vs).
std::vector<ExactVector> span_basis(const std::vector<ExactVector>& vs, std::size_t n) {
    if (vs.empty()) return {};
    ExactMatrix m(vs.size(), n);
    for (std::size_t r = 0; r < vs.size(); ++r)
        for (std::size_t k = 0; k < n; ++k) m(r, k) = vs[r][k];
    auto piv = m.rref();
    std::vector<ExactVector> out;
    for (std::size_t r = 0; r < piv.size(); ++r) {
        ExactVector v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = m(r, k);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<ExactVector> bracket_span(const Structure& st, const std::vector<ExactVector>& a,
                                      const std::vector<ExactVector>& b) {
    std::vector<ExactVector> vs;
    for (const auto& u : a)
        for (const auto& v : b) vs.push_back(st.bracket(u, v));
    return span_basis(vs, st.n);
}

}  // namespace

std::string AlgebraInvariants::to_string() const {
    std::ostringstream os;
    auto list = [&](const std::vector<std::size_t>& v) {
        os << '[';
        for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
        os << ']';
    };
    os << "dim " << dimension << ", center " << center << ", derived ";
    list(derived_series);
    os << ", lower central ";
    list(lower_central_series);
    os << ", Killing rank " << killing_rank;
    return os.str();
}

AlgebraInvariants algebra_invariants(const GeneratorTable& t) {
    const std::size_t n = t.size();
    std::vector<Coefficient> cs;
    for (const auto& [key, v] : t.brackets())
        for (const auto& [k, c] : v) cs.push_back(c);
    Structure st{n, detect_symbol(cs), {}};
    st.c.assign(n, std::vector<ExactVector>(n, ExactVector(n)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& [k, c] : t.bracket(i, j)) st.c[i][j][k] = to_rational_function(c, st.s);

    AlgebraInvariants inv;
    inv.dimension = n;
    std::vector<ExactVector> whole;
    for (std::size_t k = 0; k < n; ++k) {
        ExactVector e(n);
        e[k] = 1;
        whole.push_back(std::move(e));
    }

    // center: sum_i v_i c[i][j] = 0 for all j
    ExactMatrix zc(n * n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) zc(j * n + k, i) = st.c[i][j][k];
    inv.center = n - zc.rank();

    std::vector<ExactVector> d = whole;
    while (!d.empty()) {
        auto next = bracket_span(st, d, d);
        if (next.size() == d.size()) break;
        d = std::move(next);
        inv.derived_series.push_back(d.size());
    }
    std::vector<ExactVector> l = whole;
    while (!l.empty()) {
        auto next = bracket_span(st, whole, l);
        if (next.size() == l.size()) break;
        l = std::move(next);
        inv.lower_central_series.push_back(l.size());
    }

    // Killing form K_ab = tr(ad_a ad_b), (ad_a)_{kl} = c[a][l][k]
    ExactMatrix kf(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            RationalFunction tr;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l2 = 0; l2 < n; ++l2)
                    if (!st.c[a][l2][k].is_zero() && !st.c[b][k][l2].is_zero()) tr += st.c[a][l2][k] * st.c[b][k][l2];
            kf(a, b) = tr;
        }
    inv.killing_rank = kf.rank();
    return inv;
}

// --- contraction -------------------------------------------------------

ContractionPowers default_contraction_powers() {
    return {{"z0", 0}, {"z+", 0}, {"w+3", 0}, {"z-", 1}, {"w+1", 1}, {"w-1", 1}, {"w-3", 2}, {"c", 2}};
}

Realization contract(const Realization& r, const ContractionPowers& powers) {
    Realization out;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const std::string& label = r.labels()[k];
        auto it = powers.find(label);
        if (it == powers.end()) throw std::invalid_argument("no contraction power for " + label);
        WeylOp scaled = Coefficient::gamma(it->second) * r.at(k);
        try {
            out.add(label, gamma_limit(scaled));
        } catch (const SingularLimit&) {
            throw SingularLimit("generator " + label + " keeps a pole at gamma = 0 with power " +
                                std::to_string(it->second));
        }
    }
    return out;
}

std::map<std::string, std::vector<std::pair<std::string, Coefficient>>> contraction_identification() {
    return {
        {"z+", {{"z+", 1}}},
        {"z0", {{"d", 2 * I}, {"c", -I * Coefficient(frac(3, 2))}}},
        {"z-", {{"r-1", 12}}},
        {"w+3", {{"w+3", 1}}},
        {"w+1", {{"w+1", 2 * I}}},
        {"w-1", {{"w-1", 4 * I}}},
        {"w-3", {{"w-3", -48}}},
        {"c", {{"c", 1}}},
    };
}

}  // namespace cga
