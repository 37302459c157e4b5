#ifndef CGA_RING_HPP
#define CGA_RING_HPP

#include <gmpxx.h>

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace cga {

using Rational = mpq_class;

struct ZeroSubstitution : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// Exact element re + i*im of Q(i).
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long re) : re_(re) {}
    GaussianRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussianRational i() { return {0, 1}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }
    GaussianRational conj() const { return {re_, -im_}; }
    Rational norm() const { return re_ * re_ + im_ * im_; }

    GaussianRational& operator+=(const GaussianRational& o);
    GaussianRational& operator-=(const GaussianRational& o);
    GaussianRational& operator*=(const GaussianRational& o);
    GaussianRational& operator/=(const GaussianRational& o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    GaussianRational operator-() const { return {-re_, -im_}; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    GaussianRational pow(int k) const;

    /// "3/2", "2i", "-1/2i", "-2+1i".
    std::string to_string() const;
    static GaussianRational parse(std::string_view text);

private:
    Rational re_{0};
    Rational im_{0};
};

/// Exponent key (gamma power, omega power) of a Coefficient term.
struct ParamPower {
    int gamma = 0;
    int omega = 0;
    auto operator<=>(const ParamPower&) const = default;
};

/// Laurent polynomial in gamma, polynomial in omega, over Q(i). Zero terms are never stored.
class Coefficient {
public:
    using Terms = std::map<ParamPower, GaussianRational>;

    Coefficient() = default;
    Coefficient(long v) : Coefficient(GaussianRational(v)) {}
    Coefficient(const Rational& v) : Coefficient(GaussianRational(v)) {}
    Coefficient(const GaussianRational& v, ParamPower p = {});

    static Coefficient i() { return GaussianRational::i(); }
    static Coefficient gamma(int k = 1) { return Coefficient(GaussianRational(1), {k, 0}); }
    static Coefficient omega(int k = 1);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Value of the constant term (zero if absent).
    GaussianRational constant() const;
    bool depends_on_gamma() const;
    bool depends_on_omega() const;
    int min_gamma_power() const;

    Coefficient& operator+=(const Coefficient& o);
    Coefficient& operator-=(const Coefficient& o);
    Coefficient& operator*=(const Coefficient& o);
    Coefficient& operator*=(const GaussianRational& s);

    friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
    friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
    Coefficient operator-() const;

    friend bool operator==(const Coefficient& a, const Coefficient& b) { return a.terms_ == b.terms_; }

    Coefficient pow(int k) const;
    Coefficient conj() const;

    /// Partial substitution; absent values stay formal.
    Coefficient substitute(const std::optional<GaussianRational>& gamma_value,
                           const std::optional<GaussianRational>& omega_value) const;
    /// Drops positive gamma powers; throws SingularLimit on a negative one.
    Coefficient gamma_limit() const;

    /// "(3/2) + (-2+1i)*g^-1*w^2"; zero prints as "0".
    std::string to_string() const;
    static Coefficient parse(std::string_view text);

private:
    void add_term(const ParamPower& p, const GaussianRational& v);
    Terms terms_;
};

/// Full numeric substitution.
GaussianRational coeff_eval(const Coefficient& c, const GaussianRational& gamma_value,
                            const GaussianRational& omega_value);
inline Coefficient coeff_gamma_limit(const Coefficient& c) { return c.gamma_limit(); }

}  // namespace cga

#endif
