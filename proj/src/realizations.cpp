#include "cga/realizations.hpp"

#include <algorithm>
#include <sstream>

namespace cga {

LinearCombination& accumulate(LinearCombination& acc, const LinearCombination& v, const Coefficient& scale) {
    for (const auto& [k, c] : v) {
        Coefficient& slot = acc[k];
        slot += c * scale;
        if (slot.is_zero()) acc.erase(k);
    }
    return acc;
}

GeneratorTable::GeneratorTable(std::vector<std::string> names, std::set<std::size_t> central)
    : names_(std::move(names)), central_(std::move(central)) {}

std::size_t GeneratorTable::index(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw std::out_of_range("unknown generator " + name);
    return static_cast<std::size_t>(it - names_.begin());
}

void GeneratorTable::set(const std::string& a, const std::string& b, const LinearCombination& value) {
    set(index(a), index(b), value);
}

void GeneratorTable::set(std::size_t a, std::size_t b, const LinearCombination& value) {
    if (a == b) throw std::invalid_argument("self bracket must vanish");
    LinearCombination v;
    accumulate(v, value, a < b ? Coefficient(1) : Coefficient(-1));
    auto key = std::minmax(a, b);
    if (v.empty()) brackets_.erase(key);
    else brackets_[key] = std::move(v);
}

LinearCombination GeneratorTable::bracket(std::size_t a, std::size_t b) const {
    if (a == b) return {};
    auto it = brackets_.find(std::minmax(a, b));
    if (it == brackets_.end()) return {};
    if (a < b) return it->second;
    LinearCombination r;
    return accumulate(r, it->second, -1);
}

LinearCombination GeneratorTable::bracket(const std::string& a, const std::string& b) const {
    return bracket(index(a), index(b));
}

LinearCombination GeneratorTable::bracket(const LinearCombination& u, const LinearCombination& v) const {
    LinearCombination r;
    for (const auto& [i, a] : u)
        for (const auto& [j, b] : v) accumulate(r, bracket(i, j), a * b);
    return r;
}

std::size_t GeneratorTable::nonzero_brackets() const { return brackets_.size(); }

std::optional<std::string> GeneratorTable::jacobi_violation() const {
    const std::size_t n = size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) {
                LinearCombination ua{{a, 1}}, ub{{b, 1}}, uc{{c, 1}};
                LinearCombination s = bracket(bracket(ua, ub), uc);
                accumulate(s, bracket(bracket(ub, uc), ua));
                accumulate(s, bracket(bracket(uc, ua), ub));
                if (!s.empty())
                    return "Jacobi(" + names_[a] + ", " + names_[b] + ", " + names_[c] + ") = " + format(s);
            }
    return std::nullopt;
}

bool GeneratorTable::central_elements_commute() const {
    for (auto k : central_)
        for (std::size_t j = 0; j < size(); ++j)
            if (!bracket(k, j).empty()) return false;
    return true;
}

std::string GeneratorTable::format(const LinearCombination& v) const {
    if (v.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : v) {
        if (!first) os << " + ";
        first = false;
        os << '(' << c.to_string() << ")*" << names_.at(k);
    }
    return os.str();
}

std::string GeneratorTable::to_string() const {
    std::ostringstream os;
    for (const auto& [key, v] : brackets_)
        os << '[' << names_[key.first] << ", " << names_[key.second] << "] = " << format(v) << '\n';
    return os.str();
}

Realization::Realization(std::vector<std::string> labels, std::vector<WeylOp> ops)
    : labels_(std::move(labels)), ops_(std::move(ops)) {
    if (labels_.size() != ops_.size()) throw std::invalid_argument("labels and operators differ in length");
}

const WeylOp& Realization::operator[](const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::out_of_range("no generator " + label);
    return ops_[static_cast<std::size_t>(it - labels_.begin())];
}

bool Realization::has(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

void Realization::add(std::string label, WeylOp op) {
    if (has(label)) throw std::invalid_argument("duplicate generator " + label);
    labels_.push_back(std::move(label));
    ops_.push_back(std::move(op));
}

namespace {

const Coefficient I = Coefficient::i();

WeylOp X() { return coordinate(0); }
WeylOp Y() { return coordinate(1); }
WeylOp Dx() { return partial(0); }
WeylOp Dy() { return partial(1); }
WeylOp Dt() { return partial_t(); }
WeylOp T(int p = 1) { return time_var(p); }

// one-term combination
LinearCombination lc(const GeneratorTable& t, const std::string& name, const Coefficient& c) {
    return {{t.index(name), c}};
}

std::string w_name(int k) { return (k > 0 ? "w+" : "w-") + std::to_string(std::abs(k)); }

}  // namespace

GeneratorTable cga32_table() {
    GeneratorTable t({"z0", "z+", "z-", "w+3", "w+1", "w-1", "w-3", "c"}, {7});
    t.set("z0", "z+", lc(t, "z+", 2 * I));
    t.set("z0", "z-", lc(t, "z-", -2 * I));
    t.set("z+", "z-", lc(t, "z0", -4 * I));
    for (int k : {3, 1, -1, -3}) {
        t.set("z0", w_name(k), lc(t, w_name(k), I * Coefficient(k)));
        if (k + 2 <= 3 && k != 3) t.set("z+", w_name(k), lc(t, w_name(k + 2), I * Coefficient(k - 3)));
        if (k - 2 >= -3 && k != -3) t.set("z-", w_name(k), lc(t, w_name(k - 2), I * Coefficient(k + 3)));
    }
    for (int k : {1, 3}) t.set(w_name(k), w_name(-k), lc(t, "c", Coefficient(16 * (3 - 2 * k))));
    return t;
}

GeneratorTable decoupled_generic_table() {
    GeneratorTable t({"z+", "z0", "z-", "d", "c", "w+w", "w+1", "w-1", "w-w"}, {4});
    const Coefficient half = frac(1, 2);
    const Coefficient w = Coefficient::omega();
    t.set("d", "z+", lc(t, "z+", 1));
    t.set("d", "z-", lc(t, "z-", -1));
    t.set("d", "w+w", lc(t, "w+w", half * w));
    t.set("d", "w+1", lc(t, "w+1", half));
    t.set("d", "w-1", lc(t, "w-1", -half));
    t.set("d", "w-w", lc(t, "w-w", -half * w));
    t.set("z0", "z+", lc(t, "z+", 2 * I));
    t.set("z0", "z-", lc(t, "z-", -2 * I));
    t.set("z+", "z-", lc(t, "z0", -4 * I));
    t.set("z0", "w+1", lc(t, "w+1", I));
    t.set("z0", "w-1", lc(t, "w-1", -I));
    t.set("z+", "w-1", lc(t, "w+1", -2 * I));
    t.set("z-", "w+1", lc(t, "w-1", 2 * I));
    t.set("w+1", "w-1", lc(t, "c", -2));
    t.set("w+w", "w-w", lc(t, "c", 1));
    return t;
}

namespace {

// The generic table at integer omega, with the omega modes renamed.
GeneratorTable generic_at(int omega, const std::string& wp, const std::string& w1p, const std::string& w1m,
                          const std::string& wm) {
    GeneratorTable g = decoupled_generic_table();
    std::vector<std::string> names{"z+", "z0", "z-", "d", "c", wp, w1p, w1m, wm};
    GeneratorTable t(names, {4});
    const GaussianRational wv(omega);
    for (const auto& [key, v] : g.brackets()) {
        LinearCombination s;
        for (const auto& [k, c] : v) s[k] = c.substitute(std::nullopt, wv);
        t.set(key.first, key.second, s);
    }
    return t;
}

}  // namespace

GeneratorTable enhanced_table(int omega) {
    if (omega == 1) {
        GeneratorTable g = generic_at(1, "w+1b", "w+1a", "w-1a", "w-1b");
        std::vector<std::string> names = g.names();
        for (const char* q : {"q1", "q2", "q3"}) names.emplace_back(q);
        GeneratorTable t(names, {4});
        for (const auto& [key, v] : g.brackets()) t.set(key.first, key.second, v);
        t.set("z0", "q1", lc(t, "q1", I));
        t.set("d", "q2", lc(t, "q2", -1));
        t.set("d", "q3", lc(t, "q3", -1));
        t.set("z0", "q3", lc(t, "q3", -I));
        t.set("z+", "q3", lc(t, "q1", -2 * I));
        t.set("z-", "q1", lc(t, "q3", 2 * I));
        t.set("w+1b", "q1", lc(t, "w+1a", 1));
        t.set("w-1a", "q1", lc(t, "w-1b", 2));
        t.set("w+1b", "q2", lc(t, "w-1b", 2));
        t.set("w+1b", "q3", lc(t, "w-1a", 1));
        t.set("w+1a", "q3", lc(t, "w-1b", -2));
        t.set("q1", "q3", lc(t, "q2", -2));
        return t;
    }
    if (omega == 3) {
        GeneratorTable g = generic_at(3, "w+3", "w+1", "w-1", "w-3");
        std::vector<std::string> names = g.names();
        for (const char* r : {"r-1", "r-2", "r-3"}) names.emplace_back(r);
        GeneratorTable t(names, {4});
        for (const auto& [key, v] : g.brackets()) t.set(key.first, key.second, v);
        t.set("d", "r-1", lc(t, "r-1", -1));
        t.set("d", "r-2", lc(t, "r-2", -2));
        t.set("d", "r-3", lc(t, "r-3", -3));
        t.set("z0", "r-1", lc(t, "r-1", I));
        t.set("z0", "r-2", lc(t, "r-2", -I));
        t.set("z-", "r-1", lc(t, "r-2", 2 * I));
        t.set("z+", "r-2", lc(t, "r-1", -2 * I));
        t.set("w+3", "r-1", lc(t, "w+1", 1));
        t.set("w-1", "r-1", lc(t, "w-3", 2));
        t.set("w+3", "r-2", lc(t, "w-1", 1));
        t.set("w+1", "r-2", lc(t, "w-3", -2));
        t.set("w+3", "r-3", lc(t, "w-3", 2));
        t.set("r-1", "r-2", lc(t, "r-3", -2));
        return t;
    }
    throw std::invalid_argument("enhanced symmetry exists only at omega = 1 or 3");
}

GeneratorTable contraction_table() {
    GeneratorTable t({"z0", "z+", "z-", "w+3", "w+1", "w-1", "w-3", "c"}, {7});
    t.set("z0", "z+", lc(t, "z+", 2 * I));
    t.set("z0", "z-", lc(t, "z-", -2 * I));
    for (int k : {3, 1, -1, -3}) t.set("z0", w_name(k), lc(t, w_name(k), I * Coefficient(k)));
    t.set("z+", "w-1", lc(t, "w+1", -4 * I));
    t.set("z-", "w+3", lc(t, "w+1", 6 * I));
    t.set("z-", "w-1", lc(t, "w-3", 2 * I));
    for (int k : {1, 3}) t.set(w_name(k), w_name(-k), lc(t, "c", Coefficient(16 * (3 - 2 * k))));
    return t;
}

Realization realization_free(const Coefficient& g) {
    const Coefficient ig = g.pow(-1);
    const Coefficient ig2 = g.pow(-2);
    Realization r;
    r.add("z0", -2 * I * T() * Dt() - I * X() * Dx() - 3 * I * Y() * Dy() - 2 * I);
    r.add("z+", Dt());
    r.add("z-", -4 * T(2) * Dt() - 4 * (T() * X() - 3 * ig * Y()) * Dx() - 12 * T() * Y() * Dy() -
                    8 * (T() - I * X() * X()));
    r.add("w+3", Dy());
    r.add("w+1", -2 * I * T() * Dy() + 2 * I * ig * Dx());
    r.add("w-1", -4 * T(2) * Dy() + 8 * ig * T() * Dx() - 8 * I * ig * X());
    r.add("w-3", 8 * I * T(3) * Dy() - 24 * I * ig * T(2) * Dx() - 48 * (ig * T() * X() + ig2 * Y()));
    r.add("c", WeylOp(ig2));
    return r;
}

Realization realization_osc(const Coefficient& g) {
    const Coefficient ig = g.pow(-1);
    const Coefficient ig2 = g.pow(-2);
    Realization r;
    r.add("z0", Dt());
    r.add("z+", exp_phase(2) * (Dt() + I * X() * Dx() + 3 * I * Y() * Dy() + I * X() * X() + 2 * I));
    r.add("z-", exp_phase(-2) * (Dt() - I * X() * Dx() - 3 * I * Y() * Dy() + 12 * ig * Y() * Dx() +
                                 7 * I * X() * X() + 12 * ig * X() * Y() - 2 * I));
    r.add("w+3", exp_phase(3) * Dy());
    r.add("w+1", exp_phase(1) * (Dy() + 2 * I * ig * Dx() + 2 * I * ig * X()));
    r.add("w-1", exp_phase(-1) * (Dy() + 4 * I * ig * Dx() - 4 * I * ig * X()));
    r.add("w-3", exp_phase(-3) * (Dy() + 6 * I * ig * Dx() - 18 * I * ig * X() - 48 * ig2 * Y()));
    r.add("c", WeylOp(ig2));
    return r;
}

OmegaOps omega_ops(const Realization& r, const Coefficient& g) {
    const Coefficient g2 = g * g;
    auto ac = [&](const char* a, const char* b) { return anticommutator(r[a], r[b]); };
    OmegaOps o;
    o.plus = I * r["z+"] + g2 * Coefficient(frac(1, 16)) * (ac("w+3", "w-1") - ac("w+1", "w+1"));
    o.zero = I * r["z0"] + g2 * Coefficient(frac(1, 32)) * (ac("w+3", "w-3") - ac("w+1", "w-1"));
    o.minus = I * r["z-"] + g2 * Coefficient(frac(1, 16)) * (ac("w+1", "w-3") - ac("w-1", "w-1"));
    return o;
}

Realization decoupled_generic(const Coefficient& w) {
    const Coefficient half = frac(1, 2);
    Realization r;
    r.add("z+", exp_phase(2) * (Dt() + I * X() * Dx() + I * w * Y() * Dy() + I * X() * X() + I * half));
    r.add("z0", Dt() + I * w * Y() * Dy());
    r.add("z-", exp_phase(-2) * (Dt() - I * X() * Dx() + I * w * Y() * Dy() + I * X() * X() - I * half));
    r.add("d", -I * half * Dt());
    r.add("c", WeylOp(1));
    r.add("w+w", exp_phase(0, 1) * Dy());
    r.add("w+1", exp_phase(1) * (Dx() + X()));
    r.add("w-1", exp_phase(-1) * (Dx() - X()));
    r.add("w-w", exp_phase(0, -1) * Y());
    return r;
}

Realization enhanced_extras(int omega) {
    Realization r;
    if (omega == 1) {
        r.add("q1", Y() * (Dx() + X()));
        r.add("q2", exp_phase(-2) * Y() * Y());
        r.add("q3", exp_phase(-2) * Y() * (Dx() - X()));
    } else if (omega == 3) {
        r.add("r-1", exp_phase(-2) * Y() * (Dx() + X()));
        r.add("r-2", exp_phase(-4) * Y() * (Dx() - X()));
        r.add("r-3", exp_phase(-6) * Y() * Y());
    } else {
        throw std::invalid_argument("enhanced symmetry exists only at omega = 1 or 3");
    }
    return r;
}

Realization decoupled_enhanced(int omega) {
    Realization g = decoupled_generic();
    GeneratorTable t = enhanced_table(omega);
    Realization r;
    const GaussianRational wv(omega);
    for (std::size_t k = 0; k < g.size(); ++k) r.add(t.names()[k], substitute(g.at(k), std::nullopt, wv));
    Realization extra = enhanced_extras(omega);
    for (std::size_t k = 0; k < extra.size(); ++k) r.add(extra.labels()[k], extra.at(k));
    return r;
}

Realization decoupled_quadratic(std::optional<int> omega) {
    Realization g = decoupled_generic();
    Realization r;
    for (const char* label : {"z+", "z0", "z-"}) r.add(label, g[label]);
    r.add("n", Y() * Dy());
    for (const char* label : {"c", "w+w", "w+1", "w-1", "w-w"}) r.add(label, g[label]);
    r.add("s+", exp_phase(1, -1) * Y() * (Dx() + X()));
    r.add("s-", exp_phase(-1, -1) * Y() * (Dx() - X()));
    r.add("s2", exp_phase(0, -2) * Y() * Y());
    if (!omega) return r;
    Realization out;
    for (std::size_t k = 0; k < r.size(); ++k)
        out.add(r.labels()[k], substitute(r.at(k), std::nullopt, GaussianRational(*omega)));
    return out;
}

WeylOp theta_family(const Coefficient& w, const Coefficient& g, const Coefficient& constant) {
    const Coefficient half = frac(1, 2);
    return -half * partial(0, 2) + half * coordinate(0, 2) + w * Y() * Dy() - I * g * X() * Dy() + constant;
}

WeylOp decoupled_omega(const Coefficient& w) { return I * Dt() - theta_family(w, 0, 0); }

WeylOp h0(const Coefficient& g) { return theta_family(3, -g, frac(3, 2)); }

WeylOp x_plus() { return I * X() * Dx() + 3 * I * Y() * Dy() + I * X() * X() + 2 * I; }

WeylOp k_plus(const Coefficient& g) {
    WeylOp s = Dx() + X();
    return Coefficient(frac(1, 2)) * s * s - I * g * X() * Dy();
}

WeylOp decoupling_exponent(const Coefficient& g) {
    return (I * g * Coefficient(frac(3, 8)) * X() + I * g * Coefficient(frac(1, 8)) * Dx() -
            g * g * Coefficient(frac(1, 96)) * Dy()) *
           Dy();
}

WeylOp contraction_shift() { return -I * Coefficient(frac(3, 2)) * T(); }

Realization contraction_printed() {
    Realization r;
    r.add("z0", Dt());
    r.add("z+", exp_phase(2) * (Dt() + I * X() * Dx() + 3 * I * Y() * Dy() + I * X() * X() + 2 * I));
    r.add("z-", 12 * I * exp_phase(-2) * Y() * (Dx() + X()));
    r.add("w+3", exp_phase(3) * Dy());
    r.add("w+1", 2 * I * exp_phase(1) * (Dx() + X()));
    r.add("w-1", 4 * I * exp_phase(-1) * (Dx() - X()));
    r.add("w-3", -48 * exp_phase(-3) * Y());
    r.add("c", WeylOp(1));
    return r;
}

std::vector<int> GenParams::omegas() const {
    std::vector<int> w{1};
    for (std::size_t k = 0; k < signs.size(); ++k) w.push_back(signs[k] * static_cast<int>(2 * (k + 2) - 1));
    return w;
}

void GenParams::validate() const {
    if (two_ell < 3 || two_ell % 2 == 0) throw BadArity("ell must be a half-integer >= 3/2");
    const std::size_t n = coordinates();
    if (n > kMaxCoords) throw BadArity("ell too large for the coordinate limit");
    if (gammas.size() != n - 1)
        throw BadArity("expected " + std::to_string(n - 1) + " couplings, got " + std::to_string(gammas.size()));
    if (signs.size() != n - 1)
        throw BadArity("expected " + std::to_string(n - 1) + " signs, got " + std::to_string(signs.size()));
    for (int s : signs)
        if (s != 1 && s != -1) throw BadArity("signs must be +1 or -1");
}

namespace {

WeylOp gen_couplings(const GenParams& p) {
    WeylOp h;
    for (std::size_t j = 0; j + 1 < p.coordinates(); ++j) h += I * p.gammas[j] * coordinate(j) * partial(j + 1);
    return h;
}

}  // namespace

WeylOp gen_free(const GenParams& p) {
    p.validate();
    WeylOp h = -Coefficient(frac(1, 2)) * partial(0, 2) + gen_couplings(p);
    return I * Dt() - h;
}

WeylOp gen_osc(const GenParams& p) {
    p.validate();
    WeylOp h = -Coefficient(frac(1, 2)) * partial(0, 2) + Coefficient(frac(1, 2)) * coordinate(0, 2);
    auto w = p.omegas();
    for (std::size_t i = 1; i < p.coordinates(); ++i) h += Coefficient(w[i]) * coordinate(i) * partial(i);
    h += gen_couplings(p);
    return I * Dt() - h;
}

}  // namespace cga
