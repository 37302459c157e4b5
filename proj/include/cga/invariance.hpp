#ifndef CGA_INVARIANCE_HPP
#define CGA_INVARIANCE_HPP

#include "cga/exact_linalg.hpp"
#include "cga/realizations.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cga {

struct NotInIdeal : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonQuadratic : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotClosed : std::runtime_error {
    NotClosed(std::string pair, WeylOp residual)
        : std::runtime_error("commutator " + pair + " leaves the span: " + residual.to_string()),
          pair(std::move(pair)),
          residual(std::move(residual)) {}
    std::string pair;
    WeylOp residual;
};

/// On-shell multiplier numerator / t^t_denominator; the numerator is a function.
struct Multiplier {
    WeylOp numerator;
    int t_denominator = 0;

    bool is_zero() const { return numerator.is_zero(); }
    std::string to_string() const;
    friend bool operator==(const Multiplier& a, const Multiplier& b) = default;
};

/// f with C = f * omega. The time-derivative part of omega must be a single monomial
/// c * phase * t^k; a t^k in it surfaces as the multiplier's denominator.
Multiplier multiplier_division(const WeylOp& c, const WeylOp& omega);

struct TableCheck {
    std::size_t pairs = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};
/// Compares every commutator of the realized generators with the table, label by label.
TableCheck verify_table(const Realization& r, const GeneratorTable& t);

struct OnShellEntry {
    std::string generator;
    WeylOp commutator;
    std::optional<Multiplier> multiplier;  // empty when the commutator is not in the ideal
};
struct OnShellReport {
    std::vector<OnShellEntry> entries;
    bool ok() const;
    std::vector<std::string> nonzero() const;
};
OnShellReport onshell_report(const Realization& r, const WeylOp& omega);

// --- critical frequencies ----------------------------------------------
struct CriticalSolution {
    Rational omega;
    Rational lambda;
};
struct CriticalAnalysis {
    Poly eliminant;  // in omega, after substituting lambda^2 = (2/5)(omega^2 + 1)
    std::vector<Rational> rational_roots;
    std::vector<CriticalSolution> solutions;
    int residual_degree = 0;  // degree left after removing the rational roots
};
/// Residuals of the two conditions on (omega, lambda).
GaussianRational critical_first(const GaussianRational& omega, const GaussianRational& lambda);
GaussianRational critical_second(const GaussianRational& omega, const GaussianRational& lambda);
CriticalAnalysis critical_analysis();
std::vector<CriticalSolution> critical_frequencies();

// --- symmetry search ---------------------------------------------------
/// Phases lambda for which e^{i lambda t} X can commute with i Dt - H, X of degree <= 2.
std::vector<Phase> lambda_candidates(const WeylOp& h);

enum class Ansatz { FirstOrder, TimeTranslationPlusFirstOrder };

struct SymmetryResult {
    Phase lambda;
    WeylOp generator;
    Multiplier multiplier;
};

struct SymmetryOptions {
    Ansatz ansatz = Ansatz::TimeTranslationPlusFirstOrder;
    int degree_bound = 2;
    std::optional<std::vector<Phase>> lambdas;  // default: lambda_candidates of the spatial part
    /// Optional cap on total degree in coordinates and derivatives of the spatial part.
    std::optional<int> max_weyl_degree;
};

/// Splits omega = i Dt - H; throws if omega is not of that shape.
WeylOp spatial_hamiltonian(const WeylOp& omega);
std::vector<SymmetryResult> find_symmetries(const WeylOp& omega, const SymmetryOptions& options = {});

// --- closure and structure ---------------------------------------------
/// Structure constants of span(gens); throws NotClosed on the first escaping commutator.
GeneratorTable close_algebra(const std::vector<WeylOp>& gens, std::vector<std::string> names = {});

/// Isomorphism invariants computed from structure constants (with formal parameters generic).
struct AlgebraInvariants {
    std::size_t dimension = 0;
    std::size_t center = 0;
    std::vector<std::size_t> derived_series;
    std::vector<std::size_t> lower_central_series;
    std::size_t killing_rank = 0;
    friend bool operator==(const AlgebraInvariants&, const AlgebraInvariants&) = default;
    std::string to_string() const;
};
AlgebraInvariants algebra_invariants(const GeneratorTable& t);

// --- contraction -------------------------------------------------------
using ContractionPowers = std::map<std::string, int>;
/// s = 0 for z0, z+, w+3; s = 1 for z-, w+1, w-1; s = 2 for w-3 and for the central c.
ContractionPowers default_contraction_powers();
Realization contract(const Realization& r, const ContractionPowers& powers = default_contraction_powers());

/// Each contracted label as a combination of the omega = 3 decoupled generators.
std::map<std::string, std::vector<std::pair<std::string, Coefficient>>> contraction_identification();

}  // namespace cga

#endif
