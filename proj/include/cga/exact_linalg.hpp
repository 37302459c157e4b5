#ifndef CGA_EXACT_LINALG_HPP
#define CGA_EXACT_LINALG_HPP

#include "cga/ring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cga {

/// Which formal parameter, if any, stays symbolic through an elimination.
enum class FormalSymbol { None, Gamma, Omega };

/// Dense univariate polynomial over Q(i), lowest degree first, no trailing zeros.
class Poly {
public:
    Poly() = default;
    Poly(const GaussianRational& c);
    explicit Poly(std::vector<GaussianRational> coeffs);
    static Poly monomial(const GaussianRational& c, int degree);

    const std::vector<GaussianRational>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const GaussianRational& lead() const { return c_.back(); }
    GaussianRational operator[](int k) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly operator-() const;
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Quotient and remainder; throws on division by zero.
    std::pair<Poly, Poly> divmod(const Poly& d) const;
    Poly monic() const;
    GaussianRational eval(const GaussianRational& v) const;
    std::string to_string(char var = 'X') const;

private:
    void trim();
    std::vector<GaussianRational> c_;
};

Poly gcd(Poly a, Poly b);

struct RationalRoots {
    std::vector<std::pair<Rational, int>> roots;  // ascending, with multiplicity
    Poly residual;                                 // p with the rational roots divided out
};
/// Rational roots of a nonzero polynomial with rational coefficients.
RationalRoots rational_roots(const Poly& p);

/// Element num/den of Q(i)(X); den monic, gcd(num, den) = 1.
class RationalFunction {
public:
    RationalFunction() : den_(GaussianRational(1)) {}
    RationalFunction(const GaussianRational& c) : num_(c), den_(GaussianRational(1)) {}
    RationalFunction(long c) : RationalFunction(GaussianRational(c)) {}
    RationalFunction(Poly num, Poly den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    RationalFunction& operator+=(const RationalFunction& o);
    RationalFunction& operator-=(const RationalFunction& o);
    RationalFunction& operator*=(const RationalFunction& o);
    RationalFunction& operator/=(const RationalFunction& o);
    friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
    friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
    friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
    RationalFunction operator-() const { return {-num_, den_}; }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    std::string to_string() const;

private:
    void normalize();
    Poly num_;
    Poly den_;
};

/// Chooses the symbol among the coefficients; throws if both gamma and omega appear.
FormalSymbol detect_symbol(const std::vector<Coefficient>& cs);
RationalFunction to_rational_function(const Coefficient& c, FormalSymbol s);
/// Inverse of to_rational_function; requires a monomial denominator (constant for omega).
std::optional<Coefficient> to_coefficient(const RationalFunction& f, FormalSymbol s);

using ExactVector = std::vector<RationalFunction>;

class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    RationalFunction& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const RationalFunction& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    /// In-place reduced row echelon form; returns pivot columns.
    std::vector<std::size_t> rref();
    std::size_t rank() const;
    /// Basis of {v : A v = 0}, one vector per free column (1 there, 0 at other free columns).
    std::vector<ExactVector> nullspace() const;
    /// Some v with A v = b, or nullopt.
    std::optional<ExactVector> solve(const ExactVector& b) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<RationalFunction> a_;
};

/// Scales v by the lcm of its denominators so every entry becomes a polynomial; a monomial
/// factor of the lcm is kept when `laurent` is set.
ExactVector clear_denominators(const ExactVector& v, bool laurent);

}  // namespace cga

#endif
