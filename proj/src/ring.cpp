#include "cga/ring.hpp"

#include "text_util.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace cga {

using detail::split_top_level;
using detail::trim;

Rational parse_rational(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw ParseError("empty rational");
    if (text.front() == '+') text.remove_prefix(1);
    for (char ch : text)
        if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '/' || ch == '-'))
            throw ParseError("bad rational: " + std::string(text));
    Rational q;
    if (q.set_str(std::string(text), 10) != 0) throw ParseError("bad rational: " + std::string(text));
    if (q.get_den() == 0) throw ParseError("zero denominator: " + std::string(text));
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
    Rational n = o.norm();
    if (n == 0) throw std::domain_error("GaussianRational: division by zero");
    *this *= o.conj();
    re_ /= n;
    im_ /= n;
    return *this;
}

GaussianRational GaussianRational::pow(int k) const {
    if (k < 0) return GaussianRational(1) / pow(-k);
    GaussianRational r(1), base = *this;
    while (k > 0) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

std::string GaussianRational::to_string() const {
    if (im_ == 0) return re_.get_str();
    std::string im = im_.get_str() + "i";
    if (re_ == 0) return im;
    return re_.get_str() + (im_ > 0 ? "+" : "") + im;
}

GaussianRational GaussianRational::parse(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw ParseError("empty Gaussian rational");
    if (text.back() != 'i') return {parse_rational(text), 0};
    text.remove_suffix(1);
    std::size_t split = std::string_view::npos;
    for (std::size_t k = text.size(); k-- > 1;)
        if (text[k] == '+' || text[k] == '-') {
            split = k;
            break;
        }
    auto imag_of = [](std::string_view s) -> Rational {
        if (s.empty() || s == "+") return 1;
        if (s == "-") return -1;
        return parse_rational(s);
    };
    if (split == std::string_view::npos) return {0, imag_of(text)};
    return {parse_rational(text.substr(0, split)), imag_of(text.substr(split))};
}

Coefficient::Coefficient(const GaussianRational& v, ParamPower p) {
    if (p.omega < 0) throw std::invalid_argument("Coefficient: negative omega power");
    if (!v.is_zero()) terms_.emplace(p, v);
}

Coefficient Coefficient::omega(int k) { return Coefficient(GaussianRational(1), {0, k}); }

bool Coefficient::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == ParamPower{});
}

GaussianRational Coefficient::constant() const {
    auto it = terms_.find(ParamPower{});
    return it == terms_.end() ? GaussianRational() : it->second;
}

bool Coefficient::depends_on_gamma() const {
    for (const auto& [p, v] : terms_)
        if (p.gamma != 0) return true;
    return false;
}

bool Coefficient::depends_on_omega() const {
    for (const auto& [p, v] : terms_)
        if (p.omega != 0) return true;
    return false;
}

int Coefficient::min_gamma_power() const {
    int m = 0;
    for (const auto& [p, v] : terms_) m = std::min(m, p.gamma);
    return m;
}

void Coefficient::add_term(const ParamPower& p, const GaussianRational& v) {
    if (v.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(p, v);
    if (!inserted) {
        it->second += v;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
    for (const auto& [p, v] : o.terms_) add_term(p, v);
    return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
    for (const auto& [p, v] : o.terms_) add_term(p, -v);
    return *this;
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    Coefficient r;
    for (const auto& [pa, va] : a.terms_)
        for (const auto& [pb, vb] : b.terms_) r.add_term({pa.gamma + pb.gamma, pa.omega + pb.omega}, va * vb);
    return r;
}

Coefficient& Coefficient::operator*=(const Coefficient& o) { return *this = *this * o; }

Coefficient& Coefficient::operator*=(const GaussianRational& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [p, v] : terms_) v *= s;
    return *this;
}

Coefficient Coefficient::operator-() const {
    Coefficient r = *this;
    for (auto& [p, v] : r.terms_) v = -v;
    return r;
}

Coefficient Coefficient::pow(int k) const {
    if (k < 0) {
        if (terms_.size() != 1) throw std::domain_error("Coefficient: only monomials can be inverted");
        const auto& [p, v] = *terms_.begin();
        if (p.omega != 0) throw std::domain_error("Coefficient: omega is polynomial-only");
        return Coefficient(v.pow(k), {p.gamma * k, 0});
    }
    Coefficient r(1);
    for (int j = 0; j < k; ++j) r *= *this;
    return r;
}

Coefficient Coefficient::conj() const {
    Coefficient r = *this;
    for (auto& [p, v] : r.terms_) v = v.conj();
    return r;
}

Coefficient Coefficient::substitute(const std::optional<GaussianRational>& gamma_value,
                                    const std::optional<GaussianRational>& omega_value) const {
    Coefficient r;
    for (const auto& [p, v] : terms_) {
        GaussianRational w = v;
        ParamPower q = p;
        if (gamma_value && p.gamma != 0) {
            if (p.gamma < 0 && gamma_value->is_zero())
                throw ZeroSubstitution("gamma = 0 substituted into a negative gamma power");
            w *= gamma_value->pow(p.gamma);
            q.gamma = 0;
        }
        if (omega_value && p.omega != 0) {
            w *= omega_value->pow(p.omega);
            q.omega = 0;
        }
        r.add_term(q, w);
    }
    return r;
}

Coefficient Coefficient::gamma_limit() const {
    Coefficient r;
    for (const auto& [p, v] : terms_) {
        if (p.gamma < 0) throw SingularLimit("gamma -> 0 limit does not exist: " + to_string());
        if (p.gamma == 0) r.add_term(p, v);
    }
    return r;
}

std::string Coefficient::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, v] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << '(' << v.to_string() << ')';
        if (p.gamma != 0) os << "*g^" << p.gamma;
        if (p.omega != 0) os << "*w^" << p.omega;
    }
    return os.str();
}

Coefficient Coefficient::parse(std::string_view text) {
    text = trim(text);
    if (text == "0") return {};
    Coefficient r;
    for (auto term : split_top_level(text, " + ")) {
        term = trim(term);
        if (term.empty() || term.front() != '(') throw ParseError("bad coefficient term: " + std::string(term));
        std::size_t close = term.find(')');
        if (close == std::string_view::npos) throw ParseError("unbalanced coefficient term");
        GaussianRational v = GaussianRational::parse(term.substr(1, close - 1));
        ParamPower p;
        std::string_view rest = term.substr(close + 1);
        while (!rest.empty()) {
            if (rest.size() < 4 || rest[0] != '*' || rest[2] != '^')
                throw ParseError("bad coefficient factor: " + std::string(rest));
            char sym = rest[1];
            std::size_t end = rest.find('*', 3);
            std::string_view num = rest.substr(3, end == std::string_view::npos ? rest.size() - 3 : end - 3);
            int e = std::stoi(std::string(num));
            if (sym == 'g') p.gamma = e;
            else if (sym == 'w') p.omega = e;
            else throw ParseError("unknown parameter symbol");
            rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
        }
        r += Coefficient(v, p);
    }
    return r;
}

GaussianRational coeff_eval(const Coefficient& c, const GaussianRational& gamma_value,
                            const GaussianRational& omega_value) {
    return c.substitute(gamma_value, omega_value).constant();
}

}  // namespace cga
