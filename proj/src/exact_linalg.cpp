#include "cga/exact_linalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cga {

Poly::Poly(const GaussianRational& c) {
    if (!c.is_zero()) c_.push_back(c);
}

Poly::Poly(std::vector<GaussianRational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(const GaussianRational& c, int degree) {
    std::vector<GaussianRational> v(static_cast<std::size_t>(degree) + 1);
    v.back() = c;
    return Poly(std::move(v));
}

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

GaussianRational Poly::operator[](int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : GaussianRational();
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<GaussianRational> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("Poly: division by zero");
    Poly rem = *this;
    if (rem.degree() < d.degree()) return {Poly(), rem};
    std::vector<GaussianRational> q(static_cast<std::size_t>(rem.degree() - d.degree()) + 1);
    while (!rem.is_zero() && rem.degree() >= d.degree()) {
        int shift = rem.degree() - d.degree();
        GaussianRational f = rem.lead() / d.lead();
        q[static_cast<std::size_t>(shift)] = f;
        rem -= Poly::monomial(f, shift) * d;
    }
    return {Poly(std::move(q)), rem};
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    Poly r = *this;
    GaussianRational l = lead();
    for (auto& v : r.c_) v /= l;
    return r;
}

GaussianRational Poly::eval(const GaussianRational& v) const {
    GaussianRational r;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * v + *it;
    return r;
}

std::string Poly::to_string(char var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << '(' << c_[k].to_string() << ')';
        if (k > 0) os << '*' << var << '^' << k;
    }
    return os.str();
}

Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

namespace {

std::vector<mpz_class> divisors(mpz_class n) {
    n = abs(n);
    std::vector<mpz_class> out;
    for (mpz_class d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    return out;
}

}  // namespace

RationalRoots rational_roots(const Poly& p) {
    if (p.is_zero()) throw std::invalid_argument("rational_roots: zero polynomial");
    mpz_class lcm = 1;
    for (const auto& c : p.coeffs()) {
        if (!c.is_real()) throw std::invalid_argument("rational_roots: coefficients must be rational");
        lcm = ::lcm(lcm, c.re().get_den());
    }
    RationalRoots out;
    out.residual = p;
    const Poly x = Poly::monomial(1, 1);
    auto deflate = [&](const Rational& r) {
        int mult = 0;
        while (out.residual.degree() > 0 && out.residual.eval(GaussianRational(r)).is_zero()) {
            out.residual = out.residual.divmod(x - Poly(GaussianRational(r))).first;
            ++mult;
        }
        if (mult > 0) out.roots.emplace_back(r, mult);
    };
    deflate(0);
    std::vector<mpz_class> z;
    for (const auto& c : out.residual.coeffs()) z.push_back(mpz_class(c.re() * lcm));
    if (z.size() > 1) {
        std::set<Rational> seen;
        for (const auto& a : divisors(z.front()))
            for (const auto& b : divisors(z.back()))
                for (int sign : {1, -1}) {
                    Rational r(sign * a, b);
                    r.canonicalize();
                    if (seen.insert(r).second) deflate(r);
                }
    }
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

RationalFunction::RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
    normalize();
}

void RationalFunction::normalize() {
    if (num_.is_zero()) {
        den_ = Poly(GaussianRational(1));
        return;
    }
    if (!den_.is_constant()) {
        Poly g = gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = num_.divmod(g).first;
            den_ = den_.divmod(g).first;
        }
    }
    GaussianRational l = den_.lead();
    if (!(l == GaussianRational(1))) {
        num_ = num_ * Poly(GaussianRational(1) / l);
        den_ = den_.monic();
    }
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
    if (den_ == o.den_) {
        num_ += o.num_;
        if (!den_.is_constant()) normalize();
        return *this;
    }
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
    normalize();
    return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
    num_ = num_ * o.num_;
    den_ = den_ * o.den_;
    if (!den_.is_constant()) normalize();
    else if (num_.is_zero()) den_ = Poly(GaussianRational(1));
    return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
    if (o.is_zero()) throw std::domain_error("RationalFunction: division by zero");
    num_ = num_ * o.den_;
    den_ = den_ * o.num_;
    normalize();
    return *this;
}

std::string RationalFunction::to_string() const {
    if (den_.is_constant()) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

FormalSymbol detect_symbol(const std::vector<Coefficient>& cs) {
    bool g = false, w = false;
    for (const auto& c : cs) {
        g = g || c.depends_on_gamma();
        w = w || c.depends_on_omega();
    }
    if (g && w) throw std::invalid_argument("elimination supports one formal parameter; substitute gamma or omega");
    return g ? FormalSymbol::Gamma : (w ? FormalSymbol::Omega : FormalSymbol::None);
}

RationalFunction to_rational_function(const Coefficient& c, FormalSymbol s) {
    if (c.is_zero()) return {};
    int lo = 0;
    for (const auto& [p, v] : c.terms()) {
        if (s != FormalSymbol::Gamma && p.gamma != 0) throw std::invalid_argument("unexpected gamma dependence");
        if (s != FormalSymbol::Omega && p.omega != 0) throw std::invalid_argument("unexpected omega dependence");
        lo = std::min(lo, p.gamma);
    }
    Poly num;
    for (const auto& [p, v] : c.terms()) {
        int e = s == FormalSymbol::Gamma ? p.gamma - lo : p.omega;
        num += Poly::monomial(v, e);
    }
    return {std::move(num), Poly::monomial(GaussianRational(1), -lo)};
}

std::optional<Coefficient> to_coefficient(const RationalFunction& f, FormalSymbol s) {
    const Poly& den = f.den();
    for (int k = 0; k < den.degree(); ++k)
        if (!den[k].is_zero()) return std::nullopt;
    int shift = den.degree();
    if (shift > 0 && s != FormalSymbol::Gamma) return std::nullopt;
    Coefficient c;
    for (int k = 0; k <= f.num().degree(); ++k) {
        if (f.num()[k].is_zero()) continue;
        int e = k - shift;
        if (s == FormalSymbol::None && e != 0) return std::nullopt;
        ParamPower p = s == FormalSymbol::Omega ? ParamPower{0, e} : ParamPower{e, 0};
        c += Coefficient(f.num()[k], p);
    }
    return c;
}

std::vector<std::size_t> ExactMatrix::rref() {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
        std::size_t piv = rows_;
        for (std::size_t r = row; r < rows_; ++r)
            if (!(*this)(r, col).is_zero()) {
                // prefer constant pivots to keep entries small
                if (piv == rows_ || ((*this)(r, col).is_constant() && !(*this)(piv, col).is_constant())) piv = r;
            }
        if (piv == rows_) continue;
        if (piv != row)
            for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(piv, c), (*this)(row, c));
        RationalFunction inv = RationalFunction(1) / (*this)(row, col);
        for (std::size_t c = col; c < cols_; ++c)
            if (!(*this)(row, c).is_zero()) (*this)(row, c) *= inv;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == row || (*this)(r, col).is_zero()) continue;
            RationalFunction f = (*this)(r, col);
            for (std::size_t c = col; c < cols_; ++c)
                if (!(*this)(row, c).is_zero()) (*this)(r, c) -= f * (*this)(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t ExactMatrix::rank() const {
    ExactMatrix m = *this;
    return m.rref().size();
}

std::vector<ExactVector> ExactMatrix::nullspace() const {
    ExactMatrix m = *this;
    auto pivots = m.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<ExactVector> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        ExactVector v(cols_);
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<ExactVector> ExactMatrix::solve(const ExactVector& b) const {
    ExactMatrix aug(rows_, cols_ + 1);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) aug(r, c) = (*this)(r, c);
        aug(r, cols_) = b[r];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
    ExactVector x(cols_);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, cols_);
    return x;
}

ExactVector clear_denominators(const ExactVector& v, bool laurent) {
    Poly l(GaussianRational(1));
    for (const auto& e : v) {
        if (e.is_zero()) continue;
        Poly g = gcd(l, e.den());
        l = (l * e.den()).divmod(g).first;
    }
    if (laurent) {
        int k = 0;
        while (k < l.degree() && l[k].is_zero()) ++k;
        std::vector<GaussianRational> shifted(l.coeffs().begin() + k, l.coeffs().end());
        l = Poly(std::move(shifted));
    }
    ExactVector out;
    out.reserve(v.size());
    RationalFunction lf(l, Poly(GaussianRational(1)));
    for (const auto& e : v) out.push_back(e * lf);
    return out;
}

}  // namespace cga
