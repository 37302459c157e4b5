#ifndef CGA_REALIZATIONS_HPP
#define CGA_REALIZATIONS_HPP

#include "cga/weyl.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cga {

struct BadArity : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Sparse combination sum_k c_k g_k over generator indices.
using LinearCombination = std::map<std::size_t, Coefficient>;

LinearCombination& accumulate(LinearCombination& acc, const LinearCombination& v, const Coefficient& scale = 1);

/// Lie algebra presented by structure constants on named generators.
class GeneratorTable {
public:
    GeneratorTable() = default;
    explicit GeneratorTable(std::vector<std::string> names, std::set<std::size_t> central = {});

    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return names_.size(); }
    std::size_t index(const std::string& name) const;
    const std::set<std::size_t>& central() const { return central_; }
    void mark_central(std::size_t k) { central_.insert(k); }

    /// Sets [a, b] = value (and [b, a] = -value).
    void set(const std::string& a, const std::string& b, const LinearCombination& value);
    void set(std::size_t a, std::size_t b, const LinearCombination& value);
    LinearCombination bracket(std::size_t a, std::size_t b) const;
    LinearCombination bracket(const std::string& a, const std::string& b) const;
    LinearCombination bracket(const LinearCombination& u, const LinearCombination& v) const;

    /// Number of nonzero brackets over unordered pairs.
    std::size_t nonzero_brackets() const;
    /// Zero if the Jacobi identity holds on every triple; otherwise the first residual.
    std::optional<std::string> jacobi_violation() const;
    bool central_elements_commute() const;

    std::string format(const LinearCombination& v) const;
    std::string to_string() const;

    using Brackets = std::map<std::pair<std::size_t, std::size_t>, LinearCombination>;
    const Brackets& brackets() const { return brackets_; }

private:
    std::vector<std::string> names_;
    std::set<std::size_t> central_;
    Brackets brackets_;  // keys with first < second
};

/// Concrete assignment of generator labels to operators.
class Realization {
public:
    Realization() = default;
    Realization(std::vector<std::string> labels, std::vector<WeylOp> ops);

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<WeylOp>& ops() const { return ops_; }
    std::size_t size() const { return ops_.size(); }
    const WeylOp& operator[](const std::string& label) const;
    const WeylOp& at(std::size_t k) const { return ops_.at(k); }
    bool has(const std::string& label) const;
    void add(std::string label, WeylOp op);

private:
    std::vector<std::string> labels_;
    std::vector<WeylOp> ops_;
};

// --- abstract tables ---------------------------------------------------
/// Labels z0, z+, z-, w+3, w+1, w-1, w-3, c.
GeneratorTable cga32_table();
/// Nine-generator u(1) x| (sch(1) + h(1)) symmetry of the decoupled oscillator, formal omega.
GeneratorTable decoupled_generic_table();
/// Twelve-generator extensions at omega = 1 (q1..q3) and omega = 3 (r-1..r-3).
GeneratorTable enhanced_table(int omega);
/// e(2) x| h(2) table of the gamma -> 0 contraction.
GeneratorTable contraction_table();

// --- realizations ------------------------------------------------------
/// Continuous-spectrum realization; time coordinate tau is the polynomial time symbol.
Realization realization_free(const Coefficient& gamma = Coefficient::gamma());
/// Discrete-spectrum realization on phases e^{ikt}.
Realization realization_osc(const Coefficient& gamma = Coefficient::gamma());

struct OmegaOps {
    WeylOp plus;
    WeylOp zero;
    WeylOp minus;
};
/// Degree +1, 0, -1 quadratic combinations of the realized generators.
OmegaOps omega_ops(const Realization& r, const Coefficient& gamma = Coefficient::gamma());

/// z+, z0, z-, d, c, w+w, w+1, w-1, w-w on the phase lattice with formal omega.
Realization decoupled_generic(const Coefficient& omega = Coefficient::omega());
/// q1, q2, q3 for omega = 1; r-1, r-2, r-3 for omega = 3.
Realization enhanced_extras(int omega);
/// decoupled_generic at integer omega followed by the extras.
Realization decoupled_enhanced(int omega);

/// Twelve generators z+, z0, z-, n = y Dy, c, w+w, w+1, w-1, w-w and the products
/// s+ = e^{i(1-omega)t} y(Dx + x), s- = e^{-i(1+omega)t} y(Dx - x), s2 = e^{-2i omega t} y^2,
/// for formal omega or substituted at an integer value.
Realization decoupled_quadratic(std::optional<int> omega = std::nullopt);

/// -1/2 Dx^2 + 1/2 x^2 + omega y Dy - i gamma x Dy + C.
WeylOp theta_family(const Coefficient& omega, const Coefficient& gamma, const Coefficient& constant = 0);
/// i Dt - theta_family(omega, 0, 0).
WeylOp decoupled_omega(const Coefficient& omega);

/// -1/2 Dx^2 + 1/2 x^2 + 3 y Dy + i gamma x Dy + 3/2.
WeylOp h0(const Coefficient& gamma = Coefficient::gamma());
/// i x Dx + 3i y Dy + i x^2 + 2i.
WeylOp x_plus();
/// 1/2 (Dx + x)^2 - i gamma x Dy.
WeylOp k_plus(const Coefficient& gamma = Coefficient::gamma());
/// Exponent (3i/8 gamma x + i/8 gamma Dx - gamma^2/96 Dy) Dy of the decoupling map.
WeylOp decoupling_exponent(const Coefficient& gamma = Coefficient::gamma());
/// -(3/2) i t.
WeylOp contraction_shift();
/// Printed right-hand sides of the contracted generators, same labels as cga32_table.
Realization contraction_printed();

/// Parameters of the general half-integer ell operators.
struct GenParams {
    int two_ell = 3;                   // 2*ell, odd, >= 3
    std::vector<Coefficient> gammas;   // ell - 1/2 couplings
    std::vector<int> signs;            // epsilon_i for i = 2 .. ell + 1/2

    std::size_t coordinates() const { return static_cast<std::size_t>((two_ell + 1) / 2); }
    /// omega_i = epsilon_i (2i - 1), with omega_1 = 1.
    std::vector<int> omegas() const;
    void validate() const;
};

/// i Dtau - H with H = -1/2 Dx1^2 + i sum gamma_j x_j D_{j+1}.
WeylOp gen_free(const GenParams& p);
/// i Dt - H with H = -1/2 Dx1^2 + 1/2 x1^2 + sum omega_i x_i D_i + i sum gamma_j x_j D_{j+1}.
WeylOp gen_osc(const GenParams& p);

}  // namespace cga

#endif
