#ifndef CGA_FOCK_HPP
#define CGA_FOCK_HPP

#include "cga/realizations.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cga {

using Complex = std::complex<double>;

struct CutoffTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DegenerateModes : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceFailure : std::runtime_error {
    ConvergenceFailure(const std::string& what, double residual) : std::runtime_error(what), residual(residual) {}
    double residual;
};
struct IdentityFailure : std::runtime_error {
    IdentityFailure(const std::string& identity, std::string residual)
        : std::runtime_error(identity + " fails, residual " + residual), residual(std::move(residual)) {}
    std::string residual;
};

// --- ladder words ------------------------------------------------------
/// Words in a, a+, b, b+ realized as Dx, x, Dy, y: the Weyl normal order puts daggers left
/// and [a, a+] = [b, b+] = 1 comes from [Dx, x] = 1. A formal gbar rides on the gamma symbol.
using LadderOp = WeylOp;

namespace ladder {
LadderOp a();
LadderOp a_dag();
LadderOp b();
LadderOp b_dag();
}  // namespace ladder

/// True for time-independent words in the first two coordinates only.
bool is_ladder(const LadderOp& op);
/// "(coeff)*a+^2 b" style rendering; throws std::invalid_argument if !is_ladder.
std::string ladder_string(const LadderOp& op);

/// K = a+ a + b_mode b+ b + 1/2 + gbar (a + a+) b. b_mode = -3 gives the unbounded variant.
LadderOp k_operator(const Coefficient& gbar = Coefficient::gamma(), int b_mode = 3);
/// gbar/2 a+ b + gbar/4 a b + gbar^2/48 b^2.
LadderOp decoupling_exponent_ladder(const Coefficient& gbar = Coefficient::gamma());

// --- symbolic eigenfunctions of H0 -------------------------------------
struct EigenfunctionEntry {
    int n = 0;
    int m = 0;
    int energy = 0;  // n + 3m + 2
    Wavefunction psi;
};
struct PrintedComparison {
    int n = 0;
    int m = 0;
    Wavefunction printed;
    Wavefunction computed;
    bool matches = false;
    bool printed_is_eigenfunction = false;
};
struct H0EigenReport {
    std::vector<EigenfunctionEntry> levels;
    std::vector<PrintedComparison> printed;
    bool printed_all_match() const;
};
/// Ground state, ladder identities and H0 psi_{n,m} = (n+3m+2) psi_{n,m} for n + 3m <= max_level,
/// all exact with formal gamma; throws IdentityFailure on the first residual.
H0EigenReport h0_eigencheck(int max_level = 6);

// --- Bogoliubov-type modes ---------------------------------------------
/// Adjoint basis order: a, a+, b, b+.
inline constexpr std::array<const char*, 4> kModeBasis{"a", "a+", "b", "b+"};

struct ModeSolution {
    Rational lambda;
    std::array<Coefficient, 4> coeffs;
    bool lowering = false;  // no a+ or b+ component
    LadderOp op() const;
};

/// Exact matrix of ad_K on span{a, a+, b, b+}: column j holds [K, basis_j].
std::array<std::array<Coefficient, 4>, 4> adjoint_matrix(const LadderOp& k);
/// Eigenmodes of ad_K sorted by lambda. Each lowering mode has unit leading coefficient
/// along (a, b); its raising partner is scaled so that [A_lower, A_raise] = 1.
std::vector<ModeSolution> mode_solver(const Coefficient& gbar = Coefficient::gamma(), int b_mode = 3);
std::vector<ModeSolution> mode_solver_for(const LadderOp& k);
/// Coefficients of a, a+, b, b+ over the modes (in mode_solver order); throws if singular.
std::array<std::array<Coefficient, 4>, 4> invert_modes(const std::vector<ModeSolution>& modes);
/// sum over pairs of A_raise A_lower, weighted by lambda_raise for K and by 1 for N.
LadderOp k_from_modes(const std::vector<ModeSolution>& modes);
LadderOp n_operator(const Coefficient& gbar = Coefficient::gamma(), int b_mode = 3);
/// Raising modes of the a pair and of the b pair, in that order.
std::pair<LadderOp, LadderOp> raising_modes(const std::vector<ModeSolution>& modes);

/// A_1^n A_3^m |vac> in the unnormalized basis (a+)^p (b+)^q |vac>, keyed by (p, q).
std::map<std::pair<int, int>, Coefficient> eigenstate_exact(int n, int m, const Coefficient& gbar = Coefficient::gamma());

// --- PT symmetry and the similarity transformation --------------------
/// Invariance under x -> -x, i -> -i; a formal gamma is real unless gamma_imaginary.
bool pt_check(const WeylOp& op, bool gamma_imaginary = false);

struct DecouplingReport {
    int series_depth = 0;          // nonzero ad terms of the terminating series
    bool inverse_orientation = false;  // K(gbar) = R^{-1} K(0) R with R = e^{-E}
    bool printed_orientation = false;  // K(gbar) = R K(0) R^{-1}
    bool k_commutes_with_n = false;
    bool ok() const { return (inverse_orientation || printed_orientation) && k_commutes_with_n; }
};
DecouplingReport kgamma_decoupling_check(const Coefficient& gbar = Coefficient::gamma());

// --- truncated Fock numerics -------------------------------------------
/// Orthonormal |n, m>, n <= na, m <= nb, ascending by n + 3m, ties by n.
class FockBasis {
public:
    FockBasis(int na, int nb);
    int na() const { return na_; }
    int nb() const { return nb_; }
    std::size_t size() const { return states_.size(); }
    const std::pair<int, int>& state(std::size_t k) const { return states_[k]; }
    std::size_t index(int n, int m) const;
    bool contains(int n, int m) const { return n >= 0 && m >= 0 && n <= na_ && m <= nb_; }

private:
    int na_;
    int nb_;
    std::vector<std::pair<int, int>> states_;
    std::vector<std::size_t> lookup_;
};

struct FockMatrix {
    FockBasis basis;
    Eigen::MatrixXcd m;
};
struct FockVector {
    FockBasis basis;
    Eigen::VectorXcd v;
};

Complex evaluate(const Coefficient& c, Complex gbar);
/// P op P with P the projection on the truncated space.
FockMatrix fock_matrix(const LadderOp& op, Complex gbar, int na, int nb);
FockMatrix k_matrix(Complex gbar, int na = 12, int nb = 12, int b_mode = 3);
FockMatrix n_matrix(Complex gbar, int na = 12, int nb = 12);
/// Largest |M(i, j)| with i > j. Rows are bras, so a lowering coupling sits above the diagonal.
double max_below_diagonal(const FockMatrix& m);
double max_above_diagonal(const FockMatrix& m);

struct Spectrum {
    std::vector<Complex> values;  // ascending by real part, then imaginary part
    double max_residual = 0;      // max ||M v - lambda v|| / ||v||
    double matrix_norm = 0;       // Frobenius norm
};
/// Throws ConvergenceFailure if a residual exceeds tol * ||M||.
Spectrum spectrum(const FockMatrix& m, double tol = 1e-9);

/// A_1^n A_3^m |0,0> in the orthonormal truncated basis; needs n + 3m <= na and m <= nb.
FockVector eigenstate(int n, int m, Complex gbar, int na = 12, int nb = 12);
/// |<s1|s2>|^2 of the normalized states.
double overlap_probability(const FockVector& s1, const FockVector& s2);
/// Condition number of the matrix of normalized eigenstates with n + 3m <= na, m <= nb.
double eigenbasis_condition(Complex gbar, int na = 12, int nb = 12);

}  // namespace cga

#endif
