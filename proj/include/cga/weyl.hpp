#ifndef CGA_WEYL_HPP
#define CGA_WEYL_HPP

#include "cga/ring.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cga {

struct NonTerminatingSeries : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedShape : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedSubstitution : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Spatial coordinates x_0..x_{k-1}; x_0 = x, x_1 = y, x_2 = z in text form.
inline constexpr std::size_t kMaxCoords = 6;
using Powers = std::array<std::uint16_t, kMaxCoords>;

/// Time phase e^{i(m + n*omega)t}.
struct Phase {
    int m = 0;
    int n = 0;

    auto operator<=>(const Phase&) const = default;
    bool is_trivial() const { return m == 0 && n == 0; }
    friend Phase operator+(Phase a, Phase b) { return {a.m + b.m, a.n + b.n}; }
    Phase operator-() const { return {-m, -n}; }
    /// i(m + n*omega), the eigenvalue of the time derivative on this phase.
    Coefficient derivative_factor() const;
};

/// phase * t^t_pow * x^x * Dx^dx * Dt^dt_pow, in this normal order.
struct Monomial {
    Phase phase;
    std::uint16_t t_pow = 0;
    Powers x{};
    Powers dx{};
    std::uint16_t dt_pow = 0;

    auto operator<=>(const Monomial&) const = default;

    bool has_derivatives() const;
    int spatial_order() const;
    int coordinate_degree() const;
    /// Number of coordinates touched (highest used index + 1).
    std::size_t arity() const;
    std::string to_string() const;
    static Monomial parse(std::string_view text);
};

/// Normal-ordered polynomial differential operator with Coefficient weights.
class WeylOp {
public:
    using Terms = std::map<Monomial, Coefficient>;

    WeylOp() = default;
    WeylOp(const Coefficient& c);
    static WeylOp monomial(const Monomial& m, const Coefficient& c = 1);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    /// Coefficient on a monomial (zero if absent).
    Coefficient operator[](const Monomial& m) const;

    std::size_t arity() const;
    /// True if no spatial or time derivatives appear.
    bool is_function() const;
    bool is_time_independent() const;
    int max_spatial_order() const;
    int max_time_order() const;
    bool depends_on_gamma() const;
    bool depends_on_omega() const;

    WeylOp& operator+=(const WeylOp& o);
    WeylOp& operator-=(const WeylOp& o);
    WeylOp& operator*=(const Coefficient& c);
    WeylOp operator-() const;

    friend WeylOp operator+(WeylOp a, const WeylOp& b) { return a += b; }
    friend WeylOp operator-(WeylOp a, const WeylOp& b) { return a -= b; }
    friend WeylOp operator+(WeylOp a, const Coefficient& b) { return a += WeylOp(b); }
    friend WeylOp operator-(WeylOp a, const Coefficient& b) { return a -= WeylOp(b); }
    friend WeylOp operator+(const Coefficient& a, WeylOp b) { return b += WeylOp(a); }
    friend WeylOp operator-(const Coefficient& a, const WeylOp& b) { return WeylOp(a) - b; }
    friend WeylOp operator*(const WeylOp& a, const WeylOp& b);
    friend WeylOp operator*(const Coefficient& c, WeylOp a) { return a *= c; }
    friend WeylOp operator*(WeylOp a, const Coefficient& c) { return a *= c; }

    friend bool operator==(const WeylOp& a, const WeylOp& b) { return a.terms_ == b.terms_; }

    /// Terms "<monomial> * <coefficient>" joined by " + "; zero prints as "0".
    std::string to_string() const;
    static WeylOp parse(std::string_view text);

private:
    void add_term(const Monomial& m, const Coefficient& c);
    Terms terms_;
};

// Generators of the algebra.
WeylOp coordinate(std::size_t k, int power = 1);
WeylOp partial(std::size_t k, int power = 1);
WeylOp time_var(int power = 1);
WeylOp partial_t(int power = 1);
WeylOp exp_phase(int m, int n = 0);
inline Rational frac(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

WeylOp multiply(const WeylOp& a, const WeylOp& b);
WeylOp commutator(const WeylOp& a, const WeylOp& b);
WeylOp anticommutator(const WeylOp& a, const WeylOp& b);
WeylOp power(const WeylOp& a, int k);

inline constexpr int kDefaultSeriesDepth = 64;

/// e^S A e^{-S} via the ad-series; throws NonTerminatingSeries when ad_S^max_depth(A) != 0.
WeylOp similarity(const WeylOp& s, const WeylOp& a, int max_depth = kDefaultSeriesDepth);
/// Number of nonzero ad_S^k(A) terms, k >= 1, before the series stops.
int series_length(const WeylOp& s, const WeylOp& a, int max_depth = kDefaultSeriesDepth);

/// Substitutes parameter values. Omega substitution folds phases and needs an integer omega
/// whenever a phase carries an omega part.
WeylOp substitute(const WeylOp& a, const std::optional<GaussianRational>& gamma_value,
                  const std::optional<GaussianRational>& omega_value);
WeylOp gamma_limit(const WeylOp& a);
WeylOp scale(const WeylOp& a, const Coefficient& c);
/// Antilinear x -> -x, i -> -i; phases conjugate, y and t are untouched.
WeylOp pt_transform(const WeylOp& a);

/// Part of `a` carrying exactly one time derivative, with the derivative stripped.
WeylOp time_derivative_part(const WeylOp& a);

/// P(x) * e^{-x_0^2/2 (if gaussian)} * e^{i(m+n omega)t}.
class Wavefunction {
public:
    using Poly = std::map<Powers, Coefficient>;

    Wavefunction() = default;
    Wavefunction(Poly poly, bool gaussian, Phase phase);
    static Wavefunction ground(bool gaussian = true) { return Wavefunction({{Powers{}, 1}}, gaussian, {}); }
    static Wavefunction from_function(const WeylOp& f, bool gaussian);

    const Poly& poly() const { return poly_; }
    bool gaussian() const { return gaussian_; }
    Phase phase() const { return phase_; }
    bool is_zero() const { return poly_.empty(); }
    int degree() const;

    Wavefunction& operator+=(const Wavefunction& o);
    Wavefunction& operator*=(const Coefficient& c);
    friend Wavefunction operator+(Wavefunction a, const Wavefunction& b) { return a += b; }
    friend Wavefunction operator-(Wavefunction a, Wavefunction b) { return a += (b *= Coefficient(-1)); }
    friend Wavefunction operator*(const Coefficient& c, Wavefunction f) { return f *= c; }
    friend bool operator==(const Wavefunction& a, const Wavefunction& b);

    Wavefunction derivative(std::size_t k) const;
    Wavefunction multiply_coordinate(std::size_t k) const;

    /// c with other == c * this, if one exists among single-term ratios.
    std::optional<Coefficient> ratio_to(const Wavefunction& other) const;
    std::string to_string() const;

private:
    void add(const Powers& p, const Coefficient& c);
    Poly poly_;
    bool gaussian_ = false;
    Phase phase_;
};

Wavefunction apply(const WeylOp& a, const Wavefunction& f);

}  // namespace cga

#endif
