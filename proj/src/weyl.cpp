#include "cga/weyl.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace cga {

using detail::split_top_level;
using detail::trim;

namespace {

Rational binomial(unsigned n, unsigned k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return Rational(r);
}

// n!/(n-k)!
Rational falling(unsigned n, unsigned k) {
    mpz_class r = 1;
    for (unsigned j = 0; j < k; ++j) r *= (n - j);
    return Rational(r);
}

std::string coord_name(std::size_t k) {
    static const char* names[] = {"x", "y", "z"};
    if (k < 3) return names[k];
    return "x" + std::to_string(k + 1);
}

std::optional<std::size_t> coord_index(std::string_view name) {
    if (name == "x") return 0;
    if (name == "y") return 1;
    if (name == "z") return 2;
    if (name.size() > 1 && name[0] == 'x') {
        std::size_t k = std::stoul(std::string(name.substr(1)));
        if (k >= 4 && k <= kMaxCoords) return k - 1;
    }
    return std::nullopt;
}

struct SpatialTerm {
    Powers x;
    Powers dx;
    Rational weight;
};

// x^alpha Dx^beta x^gamma Dx^delta, reordered.
std::vector<SpatialTerm> spatial_product(const Monomial& a, const Monomial& b) {
    std::vector<SpatialTerm> acc{{Powers{}, Powers{}, Rational(1)}};
    for (std::size_t k = 0; k < kMaxCoords; ++k) {
        unsigned beta = a.dx[k], gam = b.x[k];
        unsigned alpha = a.x[k], delta = b.dx[k];
        if (beta == 0 || gam == 0) {
            for (auto& t : acc) {
                t.x[k] = static_cast<std::uint16_t>(alpha + gam);
                t.dx[k] = static_cast<std::uint16_t>(beta + delta);
            }
            continue;
        }
        std::vector<SpatialTerm> next;
        next.reserve(acc.size() * (std::min(beta, gam) + 1));
        for (const auto& t : acc)
            for (unsigned j = 0; j <= std::min(beta, gam); ++j) {
                SpatialTerm s = t;
                s.x[k] = static_cast<std::uint16_t>(alpha + gam - j);
                s.dx[k] = static_cast<std::uint16_t>(beta - j + delta);
                s.weight *= binomial(beta, j) * falling(gam, j);
                next.push_back(std::move(s));
            }
        acc = std::move(next);
    }
    return acc;
}

struct TimeTerm {
    std::uint16_t t_pow;
    std::uint16_t dt_pow;
    Coefficient weight;
};

// Dt^q (e^{i phi t} t^r) = sum_j C(q,j) [Dt^j (e^{i phi t} t^r)] Dt^{q-j}, phase factor left implicit.
std::vector<TimeTerm> time_product(unsigned q, const Phase& phi, unsigned r) {
    if (q == 0) return {{static_cast<std::uint16_t>(r), 0, Coefficient(1)}};
    std::vector<TimeTerm> out;
    Coefficient iphi = phi.derivative_factor();
    for (unsigned j = 0; j <= q; ++j)
        for (unsigned l = 0; l <= std::min(j, r); ++l) {
            Coefficient w = iphi.pow(static_cast<int>(j - l));
            if (w.is_zero()) continue;
            w *= GaussianRational(binomial(q, j) * binomial(j, l) * falling(r, l));
            out.push_back({static_cast<std::uint16_t>(r - l), static_cast<std::uint16_t>(q - j), std::move(w)});
        }
    return out;
}

}  // namespace

Coefficient Phase::derivative_factor() const {
    Coefficient c = Coefficient(GaussianRational(0, m));
    if (n != 0) c += Coefficient(GaussianRational(0, n), {0, 1});
    return c;
}

bool Monomial::has_derivatives() const { return dt_pow != 0 || spatial_order() != 0; }

int Monomial::spatial_order() const {
    int s = 0;
    for (auto d : dx) s += d;
    return s;
}

int Monomial::coordinate_degree() const {
    int s = 0;
    for (auto p : x) s += p;
    return s;
}

std::size_t Monomial::arity() const {
    std::size_t a = 0;
    for (std::size_t k = 0; k < kMaxCoords; ++k)
        if (x[k] != 0 || dx[k] != 0) a = k + 1;
    return a;
}

std::string Monomial::to_string() const {
    std::vector<std::string> f;
    if (!phase.is_trivial()) f.push_back("e[" + std::to_string(phase.m) + "," + std::to_string(phase.n) + "]");
    if (t_pow) f.push_back("t^" + std::to_string(t_pow));
    for (std::size_t k = 0; k < kMaxCoords; ++k)
        if (x[k]) f.push_back(coord_name(k) + "^" + std::to_string(x[k]));
    for (std::size_t k = 0; k < kMaxCoords; ++k)
        if (dx[k]) f.push_back("D" + coord_name(k) + "^" + std::to_string(dx[k]));
    if (dt_pow) f.push_back("Dt^" + std::to_string(dt_pow));
    if (f.empty()) return "1";
    std::string s = f.front();
    for (std::size_t k = 1; k < f.size(); ++k) s += "*" + f[k];
    return s;
}

Monomial Monomial::parse(std::string_view text) {
    text = trim(text);
    Monomial m;
    if (text == "1") return m;
    for (auto factor : split_top_level(text, "*")) {
        factor = trim(factor);
        if (factor.starts_with("e[")) {
            auto comma = factor.find(',');
            if (comma == std::string_view::npos || factor.back() != ']') throw ParseError("bad phase factor");
            m.phase.m = std::stoi(std::string(factor.substr(2, comma - 2)));
            m.phase.n = std::stoi(std::string(factor.substr(comma + 1, factor.size() - comma - 2)));
            continue;
        }
        auto caret = factor.find('^');
        if (caret == std::string_view::npos) throw ParseError("bad monomial factor: " + std::string(factor));
        std::string_view name = factor.substr(0, caret);
        auto pw = static_cast<std::uint16_t>(std::stoul(std::string(factor.substr(caret + 1))));
        if (name == "t") m.t_pow = pw;
        else if (name == "Dt") m.dt_pow = pw;
        else if (name.starts_with("D")) {
            auto k = coord_index(name.substr(1));
            if (!k) throw ParseError("unknown derivative: " + std::string(name));
            m.dx[*k] = pw;
        } else {
            auto k = coord_index(name);
            if (!k) throw ParseError("unknown coordinate: " + std::string(name));
            m.x[*k] = pw;
        }
    }
    return m;
}

WeylOp::WeylOp(const Coefficient& c) {
    if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

WeylOp WeylOp::monomial(const Monomial& m, const Coefficient& c) {
    WeylOp r;
    r.add_term(m, c);
    return r;
}

Coefficient WeylOp::operator[](const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coefficient() : it->second;
}

std::size_t WeylOp::arity() const {
    std::size_t a = 0;
    for (const auto& [m, c] : terms_) a = std::max(a, m.arity());
    return a;
}

bool WeylOp::is_function() const {
    return std::none_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.has_derivatives(); });
}

bool WeylOp::is_time_independent() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) {
        return t.first.phase.is_trivial() && t.first.t_pow == 0 && t.first.dt_pow == 0;
    });
}

int WeylOp::max_spatial_order() const {
    int s = 0;
    for (const auto& [m, c] : terms_) s = std::max(s, m.spatial_order());
    return s;
}

int WeylOp::max_time_order() const {
    int s = 0;
    for (const auto& [m, c] : terms_) s = std::max<int>(s, m.dt_pow);
    return s;
}

bool WeylOp::depends_on_gamma() const {
    for (const auto& [m, c] : terms_)
        if (c.depends_on_gamma()) return true;
    return false;
}

bool WeylOp::depends_on_omega() const {
    for (const auto& [m, c] : terms_)
        if (c.depends_on_omega() || m.phase.n != 0) return true;
    return false;
}

void WeylOp::add_term(const Monomial& m, const Coefficient& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

WeylOp& WeylOp::operator+=(const WeylOp& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

WeylOp& WeylOp::operator-=(const WeylOp& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

WeylOp& WeylOp::operator*=(const Coefficient& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= c;
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

WeylOp WeylOp::operator-() const {
    WeylOp r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

WeylOp operator*(const WeylOp& a, const WeylOp& b) {
    WeylOp r;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            Coefficient cab = ca * cb;
            auto spatial = spatial_product(ma, mb);
            auto temporal = time_product(ma.dt_pow, mb.phase, mb.t_pow);
            for (const auto& tt : temporal) {
                Coefficient ct = cab * tt.weight;
                for (const auto& st : spatial) {
                    Monomial m;
                    m.phase = ma.phase + mb.phase;
                    m.t_pow = static_cast<std::uint16_t>(ma.t_pow + tt.t_pow);
                    m.x = st.x;
                    m.dx = st.dx;
                    m.dt_pow = static_cast<std::uint16_t>(tt.dt_pow + mb.dt_pow);
                    Coefficient c = ct;
                    c *= GaussianRational(st.weight);
                    r.add_term(m, c);
                }
            }
        }
    return r;
}

std::string WeylOp::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) s += " + ";
        first = false;
        std::string ct = c.to_string();
        if (c.terms().size() > 1) ct = "(" + ct + ")";
        s += m.to_string() + " * " + ct;
    }
    return s;
}

WeylOp WeylOp::parse(std::string_view text) {
    text = trim(text);
    WeylOp r;
    if (text == "0") return r;
    for (auto term : split_top_level(text, " + ")) {
        term = trim(term);
        auto pieces = split_top_level(term, " * ");
        if (pieces.size() != 2) throw ParseError("bad operator term: " + std::string(term));
        std::string_view ct = trim(pieces[1]);
        if (ct.starts_with("((")) ct = ct.substr(1, ct.size() - 2);
        r.add_term(Monomial::parse(pieces[0]), Coefficient::parse(ct));
    }
    return r;
}

WeylOp coordinate(std::size_t k, int power) {
    Monomial m;
    m.x.at(k) = static_cast<std::uint16_t>(power);
    return WeylOp::monomial(m);
}

WeylOp partial(std::size_t k, int power) {
    Monomial m;
    m.dx.at(k) = static_cast<std::uint16_t>(power);
    return WeylOp::monomial(m);
}

WeylOp time_var(int power) {
    Monomial m;
    m.t_pow = static_cast<std::uint16_t>(power);
    return WeylOp::monomial(m);
}

WeylOp partial_t(int power) {
    Monomial m;
    m.dt_pow = static_cast<std::uint16_t>(power);
    return WeylOp::monomial(m);
}

WeylOp exp_phase(int m, int n) {
    Monomial mono;
    mono.phase = {m, n};
    return WeylOp::monomial(mono);
}

WeylOp multiply(const WeylOp& a, const WeylOp& b) { return a * b; }

WeylOp commutator(const WeylOp& a, const WeylOp& b) { return a * b - b * a; }

WeylOp anticommutator(const WeylOp& a, const WeylOp& b) { return a * b + b * a; }

WeylOp power(const WeylOp& a, int k) {
    WeylOp r(1);
    for (int j = 0; j < k; ++j) r = r * a;
    return r;
}

WeylOp similarity(const WeylOp& s, const WeylOp& a, int max_depth) {
    WeylOp result = a;
    WeylOp term = a;
    for (int n = 1; n <= max_depth; ++n) {
        term = commutator(s, term);
        if (term.is_zero()) return result;
        term *= Coefficient(Rational(1, n));
        result += term;
    }
    throw NonTerminatingSeries("ad-series did not terminate within depth " + std::to_string(max_depth));
}

int series_length(const WeylOp& s, const WeylOp& a, int max_depth) {
    WeylOp term = a;
    for (int n = 1; n <= max_depth; ++n) {
        term = commutator(s, term);
        if (term.is_zero()) return n - 1;
    }
    throw NonTerminatingSeries("ad-series did not terminate within depth " + std::to_string(max_depth));
}

WeylOp substitute(const WeylOp& a, const std::optional<GaussianRational>& gamma_value,
                  const std::optional<GaussianRational>& omega_value) {
    std::optional<int> omega_int;
    if (omega_value && omega_value->is_real() && omega_value->re().get_den() == 1 &&
        omega_value->re().get_num().fits_sint_p())
        omega_int = static_cast<int>(omega_value->re().get_num().get_si());
    WeylOp r;
    for (const auto& [m, c] : a.terms()) {
        Monomial mm = m;
        if (omega_value && m.phase.n != 0) {
            if (!omega_int)
                throw UnsupportedSubstitution("phase lattice needs an integer omega, got " + omega_value->to_string());
            mm.phase = {m.phase.m + m.phase.n * *omega_int, 0};
        }
        r += WeylOp::monomial(mm, c.substitute(gamma_value, omega_value));
    }
    return r;
}

WeylOp gamma_limit(const WeylOp& a) {
    WeylOp r;
    for (const auto& [m, c] : a.terms()) r += WeylOp::monomial(m, c.gamma_limit());
    return r;
}

WeylOp scale(const WeylOp& a, const Coefficient& c) { return c * a; }

WeylOp pt_transform(const WeylOp& a) {
    WeylOp r;
    for (const auto& [m, c] : a.terms()) {
        Monomial mm = m;
        mm.phase = -m.phase;
        Coefficient cc = c.conj();
        if ((m.x[0] + m.dx[0]) % 2 != 0) cc = -cc;
        r += WeylOp::monomial(mm, cc);
    }
    return r;
}

WeylOp time_derivative_part(const WeylOp& a) {
    WeylOp r;
    for (const auto& [m, c] : a.terms())
        if (m.dt_pow == 1) {
            Monomial mm = m;
            mm.dt_pow = 0;
            r += WeylOp::monomial(mm, c);
        }
    return r;
}

// --- Wavefunction ---------------------------------------------------------

Wavefunction::Wavefunction(Poly poly, bool gaussian, Phase phase) : gaussian_(gaussian), phase_(phase) {
    for (const auto& [p, c] : poly) add(p, c);
}

Wavefunction Wavefunction::from_function(const WeylOp& f, bool gaussian) {
    if (!f.is_function()) throw UnsupportedShape("operator with derivatives is not a function");
    Wavefunction w;
    w.gaussian_ = gaussian;
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
        if (m.t_pow != 0) throw UnsupportedShape("polynomial time dependence is outside the wavefunction class");
        if (first) w.phase_ = m.phase;
        else if (m.phase != w.phase_) throw UnsupportedShape("mixed phases are outside the wavefunction class");
        first = false;
        w.add(m.x, c);
    }
    return w;
}

int Wavefunction::degree() const {
    int d = 0;
    for (const auto& [p, c] : poly_) {
        int s = 0;
        for (auto e : p) s += e;
        d = std::max(d, s);
    }
    return d;
}

void Wavefunction::add(const Powers& p, const Coefficient& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = poly_.try_emplace(p, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) poly_.erase(it);
    }
}

Wavefunction& Wavefunction::operator+=(const Wavefunction& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (o.gaussian_ != gaussian_ || o.phase_ != phase_)
        throw UnsupportedShape("sum of wavefunctions with different exponential factors");
    for (const auto& [p, c] : o.poly_) add(p, c);
    return *this;
}

Wavefunction& Wavefunction::operator*=(const Coefficient& c) {
    Poly old = std::move(poly_);
    poly_.clear();
    for (const auto& [p, v] : old) add(p, v * c);
    return *this;
}

bool operator==(const Wavefunction& a, const Wavefunction& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.gaussian_ == b.gaussian_ && a.phase_ == b.phase_ && a.poly_ == b.poly_;
}

Wavefunction Wavefunction::derivative(std::size_t k) const {
    Wavefunction r;
    r.gaussian_ = gaussian_;
    r.phase_ = phase_;
    for (const auto& [p, c] : poly_) {
        if (p[k] > 0) {
            Powers q = p;
            --q[k];
            Coefficient w = c;
            w *= GaussianRational(static_cast<long>(p[k]));
            r.add(q, w);
        }
        if (gaussian_ && k == 0) {
            Powers q = p;
            ++q[0];
            r.add(q, -c);
        }
    }
    return r;
}

Wavefunction Wavefunction::multiply_coordinate(std::size_t k) const {
    Wavefunction r;
    r.gaussian_ = gaussian_;
    r.phase_ = phase_;
    for (const auto& [p, c] : poly_) {
        Powers q = p;
        ++q[k];
        r.add(q, c);
    }
    return r;
}

std::optional<Coefficient> Wavefunction::ratio_to(const Wavefunction& other) const {
    if (is_zero()) return other.is_zero() ? std::optional<Coefficient>(Coefficient()) : std::nullopt;
    if (other.is_zero()) return Coefficient();
    if (gaussian_ != other.gaussian_ || phase_ != other.phase_) return std::nullopt;
    for (const auto& [p, c] : poly_) {
        if (c.terms().size() != 1 || c.terms().begin()->first.omega != 0) continue;
        auto it = other.poly_.find(p);
        if (it == other.poly_.end()) return std::nullopt;
        Coefficient r = it->second * c.pow(-1);
        Wavefunction scaled = *this;
        scaled *= r;
        if (scaled == other) return r;
        return std::nullopt;
    }
    return std::nullopt;
}

std::string Wavefunction::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [p, c] : poly_) {
        Monomial m;
        m.x = p;
        if (!first) s += " + ";
        first = false;
        std::string ct = c.to_string();
        if (c.terms().size() > 1) ct = "(" + ct + ")";
        s += m.to_string() + " * " + ct;
    }
    s = "[" + s + "]";
    if (gaussian_) s += " * exp(-x^2/2)";
    if (!phase_.is_trivial()) s += " * e[" + std::to_string(phase_.m) + "," + std::to_string(phase_.n) + "]";
    return s;
}

Wavefunction apply(const WeylOp& a, const Wavefunction& f) {
    Wavefunction result;
    if (f.is_zero()) return result;
    for (const auto& [m, c] : a.terms()) {
        if (m.t_pow != 0) throw UnsupportedShape("polynomial time factors leave the wavefunction class");
        Wavefunction g = f;
        if (m.dt_pow) g *= f.phase().derivative_factor().pow(m.dt_pow);
        for (std::size_t k = 0; k < kMaxCoords; ++k)
            for (int j = 0; j < m.dx[k]; ++j) g = g.derivative(k);
        for (std::size_t k = 0; k < kMaxCoords; ++k)
            for (int j = 0; j < m.x[k]; ++j) g = g.multiply_coordinate(k);
        g *= c;
        if (g.is_zero()) continue;
        g = Wavefunction(g.poly(), g.gaussian(), g.phase() + m.phase);
        result += g;
    }
    return result;
}

}  // namespace cga
