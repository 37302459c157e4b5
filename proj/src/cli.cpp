#include "cga/cli.hpp"

#include "cga/invariance.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

namespace cga::cli {

using json = nlohmann::json;

std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Skip: return "skip";
    }
    return "fail";
}

Status status_from_string(const std::string& s) {
    if (s == "pass") return Status::Pass;
    if (s == "fail") return Status::Fail;
    if (s == "skip") return Status::Skip;
    throw UsageError("unknown status " + s);
}

std::size_t Report::count(Status s) const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [&](const auto& c) { return c.status == s; }));
}

// --- options -----------------------------------------------------------

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("--" + key + ": not a number: " + s);
    }
}

int parse_int(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("--" + key + ": not an integer: " + s);
    }
}

Rational parse_rational_option(const std::string& key, const std::string& s) {
    try {
        return parse_rational(s);
    } catch (const std::exception&) {
        throw UsageError("--" + key + ": not a rational p/q: " + s);
    }
}

std::string signs_text(const std::vector<int>& signs) {
    std::string s;
    for (std::size_t k = 0; k < signs.size(); ++k) s += (k ? "," : "") + std::string(signs[k] > 0 ? "+" : "-");
    return s;
}

std::string ell_text(int two_ell) { return std::to_string(two_ell) + "/2"; }

}  // namespace

void apply_option(Options& o, const std::string& key, const std::string& v) {
    if (key == "gamma") {
        if (v == "formal") o.gamma.reset();
        else {
            try {
                o.gamma = GaussianRational::parse(v);
            } catch (const std::exception&) {
                throw UsageError("--gamma: not a Gaussian rational: " + v);
            }
        }
    } else if (key == "gamma-bar") {
        auto comma = v.find(',');
        if (comma == std::string::npos) o.gamma_bar = {parse_double(key, v), 0};
        else o.gamma_bar = {parse_double(key, v.substr(0, comma)), parse_double(key, v.substr(comma + 1))};
    } else if (key == "omega") {
        if (v == "formal") o.omega.reset();
        else o.omega = parse_rational_option(key, v);
    } else if (key == "ell") {
        Rational l = parse_rational_option(key, v);
        Rational twice = 2 * l;
        if (twice.get_den() != 1 || twice.get_num() % 2 == 0 || twice < 3) throw UsageError("--ell: need a half-integer >= 3/2");
        o.two_ell = static_cast<int>(twice.get_num().get_si());
    } else if (key == "signs") {
        if (v == "all") {
            o.signs.reset();
            return;
        }
        std::vector<int> s;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item == "+" || item == "+1" || item == "1") s.push_back(1);
            else if (item == "-" || item == "-1") s.push_back(-1);
            else throw UsageError("--signs: expected entries + or -: " + v);
        }
        o.signs = s;
    } else if (key == "cutoff-a" || key == "cutoff-b") {
        int n = parse_int(key, v);
        if (n < 1) throw UsageError("--" + key + ": cutoff must be at least 1");
        (key == "cutoff-a" ? o.cutoff_a : o.cutoff_b) = n;
    } else if (key == "degree-bound") {
        o.degree_bound = parse_int(key, v);
        if (o.degree_bound < 0) throw UsageError("--degree-bound: must be nonnegative");
    } else if (key == "max-weyl-degree") {
        if (v == "none") o.max_weyl_degree.reset();
        else o.max_weyl_degree = parse_int(key, v);
    } else if (key == "realization") {
        if (v != "free" && v != "osc" && v != "both") throw UsageError("--realization: free, osc or both");
        o.realization = v;
    } else if (key == "format") {
        if (v != "json" && v != "md") throw UsageError("--format: json or md");
        o.format = v;
    } else if (key == "out") {
        o.out = v;
    } else if (key == "golden") {
        o.golden_dir = v;
    } else if (key == "update-golden") {
        o.update_golden = v == "true";
    } else if (key == "deterministic") {
        o.deterministic = v == "true";
    } else {
        throw UsageError("unknown option " + key);
    }
}

json options_to_json(const Options& o) {
    json j;
    j["gamma"] = o.gamma ? o.gamma->to_string() : "formal";
    j["gamma-bar"] = format_double(o.gamma_bar.real()) + "," + format_double(o.gamma_bar.imag());
    j["omega"] = o.omega ? cga::to_string(*o.omega) : "formal";
    j["ell"] = ell_text(o.two_ell);
    j["signs"] = o.signs ? signs_text(*o.signs) : "all";
    j["cutoff-a"] = std::to_string(o.cutoff_a);
    j["cutoff-b"] = std::to_string(o.cutoff_b);
    j["degree-bound"] = std::to_string(o.degree_bound);
    j["max-weyl-degree"] = o.max_weyl_degree ? std::to_string(*o.max_weyl_degree) : "none";
    j["realization"] = o.realization;
    j["format"] = o.format;
    j["out"] = o.out;
    j["golden"] = o.golden_dir;
    j["update-golden"] = o.update_golden ? "true" : "false";
    j["deterministic"] = o.deterministic ? "true" : "false";
    return j;
}

Options options_from_json(const json& j, Options base) {
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        std::string text;
        if (value.is_string()) text = value.get<std::string>();
        else if (value.is_boolean()) text = value.get<bool>() ? "true" : "false";
        else if (value.is_number_integer()) text = std::to_string(value.get<long>());
        else if (value.is_number()) text = format_double(value.get<double>());
        else throw UsageError("config value for " + key + " must be a string, number or boolean");
        apply_option(base, key, text);
    }
    return base;
}

// --- suites --------------------------------------------------------------

namespace {

const Coefficient I = Coefficient::i();

struct Outcome {
    bool ok = true;
    std::string details;
    std::string residual;
};

Outcome verdict(bool ok, std::string details = {}, std::string residual = {}) {
    return {ok, std::move(details), std::move(residual)};
}

class Suite {
public:
    Suite(Report& r, std::string prefix, bool deterministic)
        : report_(r), prefix_(std::move(prefix)), deterministic_(deterministic) {}

    void check(const std::string& id, const std::function<Outcome()>& f) {
        auto t0 = std::chrono::steady_clock::now();
        CheckRecord rec{prefix_ + id, Status::Pass, {}, {}, 0};
        try {
            Outcome o = f();
            rec.status = o.ok ? Status::Pass : Status::Fail;
            rec.details = o.details;
            rec.residual = o.residual;
        } catch (const std::exception& e) {
            rec.status = Status::Fail;
            rec.details = std::string("exception: ") + e.what();
        }
        if (!deterministic_) rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report_.checks.push_back(rec);
    }
    void skip(const std::string& id, const std::string& why) {
        report_.checks.push_back({prefix_ + id, Status::Skip, why, {}, 0});
    }
    void artifact(const std::string& name, const std::string& value) { report_.artifacts[prefix_ + name] = value; }

private:
    Report& report_;
    std::string prefix_;
    bool deterministic_;
};

Coefficient gamma_of(const Options& o) { return o.gamma ? Coefficient(*o.gamma) : Coefficient::gamma(); }

std::string realization_text(const Realization& r) {
    std::string s;
    for (std::size_t k = 0; k < r.size(); ++k) s += r.labels()[k] + ": " + r.at(k).to_string() + "\n";
    return s;
}

WeylOp combination(const Realization& r, const LinearCombination& lc) {
    WeylOp a;
    for (const auto& [k, c] : lc) a += c * r.at(k);
    return a;
}

std::vector<std::pair<std::string, Realization>> chosen_realizations(const Options& o) {
    std::vector<std::pair<std::string, Realization>> out;
    if (o.realization != "osc") out.emplace_back("free", realization_free(gamma_of(o)));
    if (o.realization != "free") out.emplace_back("osc", realization_osc(gamma_of(o)));
    return out;
}

void suite_verify_algebra(Suite& s, const Options& o) {
    const GeneratorTable t = cga32_table();
    s.check("table:jacobi", [&] {
        auto v = t.jacobi_violation();
        return verdict(!v, "Jacobi identity on all triples of the 8-generator table", v.value_or(""));
    });
    s.check("table:central", [&] { return verdict(t.central_elements_commute(), "c is central"); });
    s.artifact("table", t.to_string());
    for (const auto& [name, r] : chosen_realizations(o)) {
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = i + 1; j < t.size(); ++j) {
                const std::string id = name + ":[" + t.names()[i] + "," + t.names()[j] + "]";
                s.check(id, [&, i, j] {
                    WeylOp actual = commutator(r[t.names()[i]], r[t.names()[j]]);
                    WeylOp expected = combination(r, t.bracket(i, j));
                    WeylOp diff = actual - expected;
                    return verdict(diff.is_zero(), "= " + t.format(t.bracket(i, j)), diff.is_zero() ? "" : diff.to_string());
                });
            }
        s.artifact(name, realization_text(r));
    }
}

void suite_omega(Suite& s, const Options& o) {
    for (const auto& [name, r] : chosen_realizations(o)) {
        OmegaOps w = omega_ops(r, gamma_of(o));
        auto rel = [&](const std::string& id, const WeylOp& lhs, const WeylOp& rhs, const std::string& what) {
            s.check(name + ":" + id, [=] {
                WeylOp d = lhs - rhs;
                return verdict(d.is_zero(), what, d.is_zero() ? "" : d.to_string());
            });
        };
        rel("[O0,O+]", commutator(w.zero, w.plus), Coefficient(-2) * w.plus, "[Omega0, Omega+] = -2 Omega+");
        rel("[O0,O-]", commutator(w.zero, w.minus), Coefficient(2) * w.minus, "[Omega0, Omega-] = 2 Omega-");
        rel("[O+,O-]", commutator(w.plus, w.minus), Coefficient(4) * w.zero, "[Omega+, Omega-] = 4 Omega0");
        if (name == "free")
            rel("form", w.plus, gen_free(GenParams{3, {gamma_of(o)}, {1}}), "Omega+ = i Dtau + 1/2 Dx^2 - i gamma x Dy");
        else
            rel("form", w.zero, I * partial_t() - h0(gamma_of(o)), "Omega0 = i Dt - H0");
        s.artifact(name, "plus: " + w.plus.to_string() + "\nzero: " + w.zero.to_string() + "\nminus: " + w.minus.to_string() + "\n");
    }
}

struct PrintedMultiplier {
    std::string realization;
    std::string omega;
    std::string generator;
    Multiplier f;
};

std::vector<PrintedMultiplier> printed_multipliers() {
    const WeylOp tau = time_var();
    return {
        {"free", "plus", "z0", {WeylOp(Coefficient(2) * I), 0}},
        {"free", "plus", "z-", {Coefficient(8) * tau, 0}},
        {"free", "zero", "z+", {WeylOp(1), 1}},
        {"free", "zero", "z-", {Coefficient(4) * tau, 0}},
        {"free", "minus", "z+", {WeylOp(2), 1}},
        {"free", "minus", "z0", {WeylOp(Coefficient(-2) * I), 0}},
        {"osc", "plus", "z0", {WeylOp(Coefficient(2) * I), 0}},
        {"osc", "plus", "z-", {Coefficient(4) * I * exp_phase(-2), 0}},
        {"osc", "zero", "z+", {Coefficient(-2) * I * exp_phase(2), 0}},
        {"osc", "zero", "z-", {Coefficient(2) * I * exp_phase(-2), 0}},
        {"osc", "minus", "z+", {-Coefficient(4) * I * exp_phase(2), 0}},
        {"osc", "minus", "z0", {WeylOp(Coefficient(-2) * I), 0}},
    };
}

void suite_onshell(Suite& s, const Options& o) {
    const auto printed = printed_multipliers();
    for (const auto& [name, r] : chosen_realizations(o)) {
        OmegaOps w = omega_ops(r, gamma_of(o));
        for (const auto& [oname, om] : std::vector<std::pair<std::string, WeylOp>>{{"plus", w.plus}, {"zero", w.zero}, {"minus", w.minus}}) {
            const OnShellReport rep = onshell_report(r, om);
            std::vector<std::string> expect;
            for (const auto& p : printed)
                if (p.realization == name && p.omega == oname) expect.push_back(p.generator);
            std::string art;
            for (const auto& e : rep.entries)
                art += e.generator + ": " + (e.multiplier ? e.multiplier->to_string() : "not in ideal") + "\n";
            s.artifact(name + ":" + oname, art);
            s.check(name + ":" + oname + ":ideal", [&] {
                std::string nz;
                for (const auto& g : rep.nonzero()) nz += g + " ";
                return verdict(rep.ok(), "nonzero commutators: " + nz);
            });
            s.check(name + ":" + oname + ":list", [&] {
                auto nz = rep.nonzero();
                std::sort(nz.begin(), nz.end());
                std::sort(expect.begin(), expect.end());
                return verdict(nz == expect, "nonzero commutators match the printed list");
            });
            for (const auto& p : printed) {
                if (p.realization != name || p.omega != oname) continue;
                s.check(name + ":" + oname + ":" + p.generator, [&] {
                    auto it = std::find_if(rep.entries.begin(), rep.entries.end(), [&](const auto& e) { return e.generator == p.generator; });
                    if (it == rep.entries.end() || !it->multiplier) return verdict(false, "no multiplier");
                    return verdict(*it->multiplier == p.f, "f = " + it->multiplier->to_string() + ", printed " + p.f.to_string());
                });
            }
        }
    }
    s.check("decoupled:generic", [&] {
        auto rep = onshell_report(decoupled_generic(), decoupled_omega(Coefficient::omega()));
        return verdict(rep.ok(), "nine generators of the decoupled oscillator with formal omega");
    });
    for (int w : {1, 3}) {
        s.check("decoupled:omega=" + std::to_string(w), [&] {
            auto rep = onshell_report(decoupled_enhanced(w), decoupled_omega(w));
            return verdict(rep.ok(), "twelve enhanced generators");
        });
    }
}

void suite_critical(Suite& s, const Options&) {
    const CriticalAnalysis c = critical_analysis();
    std::string roots;
    for (const auto& r : c.rational_roots) roots += cga::to_string(r) + " ";
    s.artifact("eliminant", c.eliminant.to_string('w'));
    std::string sols;
    for (const auto& x : c.solutions) sols += "omega=" + cga::to_string(x.omega) + " lambda=" + cga::to_string(x.lambda) + "\n";
    s.artifact("solutions", sols);
    s.check("omega-set", [&] {
        std::set<Rational> w;
        for (const auto& x : c.solutions) w.insert(x.omega);
        return verdict(w == std::set<Rational>{Rational(-3), frac(-1, 3), frac(1, 3), Rational(3)},
                       "rational roots " + roots + "; irrational part of degree " + std::to_string(c.residual_degree));
    });
    for (const auto& x : c.solutions) {
        s.check("omega=" + cga::to_string(x.omega) + ",lambda=" + cga::to_string(x.lambda), [&] {
            GaussianRational f = critical_first(x.omega, x.lambda), g = critical_second(x.omega, x.lambda);
            Rational expect = abs(x.omega) == 3 ? Rational(2) : frac(2, 3);
            return verdict(f.is_zero() && g.is_zero() && abs(x.lambda) == expect, "exact back-substitution into both conditions",
                           f.to_string() + ", " + g.to_string());
        });
    }
    for (int w : {3, -3}) {
        s.check("both-signs:omega=" + std::to_string(w), [&] {
            bool ok = true;
            for (int l : {2, -2}) ok = ok && critical_first(w, l).is_zero() && critical_second(w, l).is_zero();
            return verdict(ok, "lambda = +2 and -2 both solve the system");
        });
    }
}

std::string symmetries_text(const std::vector<SymmetryResult>& rs) {
    std::string s;
    for (const auto& r : rs)
        s += "[" + std::to_string(r.lambda.m) + "," + std::to_string(r.lambda.n) + "] " + r.generator.to_string() + "  f = " +
             r.multiplier.to_string() + "\n";
    return s;
}

void suite_symmetries(Suite& s, const Options& o) {
    const Coefficient w = o.omega ? Coefficient(*o.omega) : Coefficient::omega();
    // two formal symbols are out of reach of the elimination, so formal omega gets gamma = 0
    const bool fallback = !o.gamma && !o.omega;
    const Coefficient g = fallback ? Coefficient() : gamma_of(o);
    // t -> t/q puts the adjoint spectrum of q * theta on the integer phase lattice
    const Rational q = o.omega ? Rational(o.omega->get_den()) : Rational(1);
    const WeylOp om = I * partial_t() - Coefficient(q) * theta_family(w, g);
    SymmetryOptions so;
    so.degree_bound = o.degree_bound;
    so.max_weyl_degree = o.max_weyl_degree;
    std::vector<SymmetryResult> rs;
    std::string bound = std::string(fallback ? "gamma = 0 for formal omega, " : "") + (q != 1 ? "time rescaled by " + cga::to_string(q) + ", " : "") +
                        "coefficient degree <= " + std::to_string(o.degree_bound) + ", Weyl degree " +
                              (o.max_weyl_degree ? "<= " + std::to_string(*o.max_weyl_degree) : std::string("unbounded"));
    s.check("search", [&] {
        rs = find_symmetries(om, so);
        return verdict(true, std::to_string(rs.size()) + " generators (" + bound + ")");
    });
    s.artifact("generators", symmetries_text(rs));
    s.check("on-shell", [&] {
        for (const auto& r : rs) {
            WeylOp d = commutator(r.generator, om) - r.multiplier.numerator * om;
            if (!d.is_zero() || r.multiplier.t_denominator != 0) return verdict(false, "generator fails [Z, Omega] = f Omega", d.to_string());
        }
        return verdict(true, "every generator satisfies [Z, Omega] = f Omega exactly");
    });
    std::vector<WeylOp> ops;
    for (const auto& r : rs) ops.push_back(r.generator);
    s.check("closure", [&] {
        try {
            GeneratorTable t = close_algebra(ops);
            return verdict(true, "span closes; " + algebra_invariants(t).to_string());
        } catch (const NotClosed& e) {
            return verdict(false, "span does not close at " + e.pair, e.residual.to_string());
        }
    });

    const bool decoupled = g.is_zero();
    const std::optional<int> wint =
        o.omega && o.omega->get_den() == 1 ? std::optional<int>(static_cast<int>(o.omega->get_num().get_si())) : std::nullopt;
    if (!decoupled) {
        if (!o.omega) return;
        const bool critical = abs(*o.omega) == 3 || abs(*o.omega) == frac(1, 3);
        s.check("coupled:dimension", [&] {
            return verdict(critical ? rs.size() == 8 : rs.size() < 8,
                           critical ? "critical omega: 8 generators span the centrally extended ell = 3/2 algebra"
                                    : "non-critical omega: fewer than 8 generators");
        });
        return;
    }
    if (!o.omega || (wint && (*wint == 1 || *wint == 3))) {
        const std::size_t printed = o.omega ? 12 : 9;
        s.check("printed:dimension", [&] {
            SymmetryOptions full = so;
            full.max_weyl_degree.reset();
            SymmetryOptions capped = so;
            capped.max_weyl_degree = 2;
            std::size_t nf = find_symmetries(om, full).size(), nc = find_symmetries(om, capped).size();
            std::string d = "printed " + std::to_string(printed) + "; found " + std::to_string(nf) + " first-order, " +
                            std::to_string(nc) + " of Weyl degree <= 2";
            if (!o.omega) {
                SymmetryOptions restricted = capped;
                restricted.lambdas = std::vector<Phase>{{0, 0}, {1, 0}, {-1, 0}, {2, 0}, {-2, 0}, {0, 1}, {0, -1}};
                d += "; " + std::to_string(find_symmetries(om, restricted).size()) +
                     " when phases are limited to 0, +-1, +-2, +-omega; the extra three are "
                     "e^{i(1-omega)t} y(Dx+x), e^{-i(1+omega)t} y(Dx-x), e^{-2i omega t} y^2";
            }
            return verdict(rs.size() == printed, d);
        });
    }
    if (wint && (*wint == 1 || *wint == 3)) {
        const int other = *wint == 1 ? 3 : 1;
        s.check("enhanced:in-span", [&] {
            const Realization e = decoupled_enhanced(*wint);
            SymmetryOptions capped = so;
            capped.max_weyl_degree = 2;
            std::vector<WeylOp> base;
            for (const auto& r : find_symmetries(om, capped)) base.push_back(r.generator);
            for (std::size_t k = 0; k < e.size(); ++k) {
                auto all = base;
                all.push_back(e.at(k));
                try {
                    close_algebra(all);
                    return verdict(false, e.labels()[k] + " is outside the found span");
                } catch (const std::invalid_argument&) {
                } catch (const NotClosed&) {
                    return verdict(false, e.labels()[k] + " is outside the found span");
                }
            }
            return verdict(true, "all printed enhanced generators lie in the span");
        });
        s.check("enhanced:table", [&] {
            const Realization e = decoupled_enhanced(*wint);
            GeneratorTable t = close_algebra(e.ops(), e.labels());
            return verdict(t.to_string() == enhanced_table(*wint).to_string(), "realized structure constants equal the encoded table");
        });
        s.check("printed:inequivalent-to-omega=" + std::to_string(other), [&] {
            const Realization a = decoupled_quadratic(*wint), b = decoupled_quadratic(other);
            GeneratorTable ta = close_algebra(a.ops(), a.labels()), tb = close_algebra(b.ops(), b.labels());
            const bool same = ta.to_string() == tb.to_string();
            return verdict(!same, same ? "structure constants coincide in the basis z+, z0, z-, y Dy, c, w+-omega, w+-1, s+, s-, s2, "
                                          "so the algebras are isomorphic"
                                        : "structure constants differ");
        });
    }
}

void suite_contract(Suite& s, const Options&) {
    Realization c;
    s.check("limit", [&] {
        c = contract(realization_osc());
        return verdict(true, "rescaled gamma -> 0 limit exists (powers 0 for z0, z+, w+3; 1 for z-, w+1, w-1; 2 for w-3, c)");
    });
    if (c.size() == 0) return;
    s.artifact("contracted", realization_text(c));
    s.check("table", [&] {
        auto t = verify_table(c, contraction_table());
        std::string f;
        for (const auto& x : t.failures) f += x + "; ";
        return verdict(t.ok(), std::to_string(t.pairs) + " pairs against the contracted table", f);
    });
    s.check("singular-without-rescaling", [&] {
        auto p = default_contraction_powers();
        p["c"] = 0;
        try {
            contract(realization_osc(), p);
        } catch (const SingularLimit&) {
            return verdict(true, "c needs the second power of gamma");
        }
        return verdict(false, "limit unexpectedly regular");
    });
    s.check("not-a-subalgebra", [&] {
        return verdict(contraction_table().bracket("z+", "z-").empty() && !cga32_table().bracket("z+", "z-").empty(),
                       "[z+, z-] vanishes only after contraction");
    });
    const Realization e3 = decoupled_enhanced(3);
    const WeylOp shift = contraction_shift();
    for (const auto& [label, combo] : contraction_identification()) {
        s.check("identification:" + label, [&, label = label, combo = combo] {
            WeylOp a;
            std::string d;
            for (const auto& [name, coeff] : combo) {
                a += coeff * e3[name];
                d += (d.empty() ? "" : " + ") + ("(" + coeff.to_string() + ")" + name);
            }
            WeylOp diff = similarity(shift, a) - c[label];
            return verdict(diff.is_zero(), "e^S (" + d + ") e^-S with S = -(3/2)it", diff.is_zero() ? "" : diff.to_string());
        });
    }
    s.check("printed-right-hand-sides", [&] {
        const Realization p = contraction_printed();
        std::string off;
        for (const auto& l : p.labels())
            if (!(p[l] == c[l])) off += l + " ";
        return verdict(true, off.empty() ? "all agree" : "differ from the limit: " + off + "(printed z- is i times the limit)");
    });
}

void suite_spectrum(Suite& s, const Options& o) {
    const int na = o.cutoff_a, nb = o.cutoff_b;
    auto levels = [&](int b_mode) {
        std::vector<double> v;
        for (int n = 0; n <= na; ++n)
            for (int m = 0; m <= nb; ++m) v.push_back(n + b_mode * m + 0.5);
        std::sort(v.begin(), v.end());
        return v;
    };
    const FockMatrix k = k_matrix(o.gamma_bar, na, nb);
    s.check("triangular", [&] {
        double below = max_below_diagonal(k);
        return verdict(below == 0.0, "entries <i|K|j> with i after j in the energy order vanish identically; coupling block max " +
                                         format_double(max_above_diagonal(k)));
    });
    s.check("diagonal", [&] {
        for (std::size_t i = 0; i < k.basis.size(); ++i) {
            auto [n, m] = k.basis.state(i);
            if (k.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) != Complex(n + 3 * m + 0.5)) return verdict(false, "diagonal differs");
        }
        return verdict(true, "diagonal is n + 3m + 1/2");
    });
    auto compare = [&](const std::string& id, const FockMatrix& m, const std::vector<double>& expect, const std::string& what) {
        s.check(id, [&, what] {
            Spectrum sp = spectrum(m);
            double err = 0;
            for (std::size_t i = 0; i < expect.size(); ++i) err = std::max(err, std::abs(sp.values[i] - expect[i]));
            std::string low;
            for (std::size_t i = 0; i < 5 && i < sp.values.size(); ++i) low += format_double(std::round(sp.values[i].real() * 1e9) / 1e9) + " ";
            return verdict(err < 1e-9, what + "; lowest " + low + "; max residual " + format_double(sp.max_residual),
                           "max deviation " + format_double(err));
        });
    };
    compare("eigenvalues", k, levels(3), "eigenvalues n + 3m + 1/2");
    for (Complex gb : {Complex(0), Complex(0.3), Complex(0.7, 0.2), Complex(2)})
        compare("gamma-independence:" + format_double(gb.real()) + "," + format_double(gb.imag()), k_matrix(gb, na, nb), levels(3),
                "same levels at this gbar");
    compare("unbounded", k_matrix(o.gamma_bar, na, nb, -3), levels(-3),
            "modes (1, -3): eigenvalues n - 3m + 1/2, unbounded below, |0,0> is a reference state");
    std::vector<double> nl;
    for (int n = 0; n <= na; ++n)
        for (int m = 0; m <= nb; ++m) nl.push_back(n + m);
    std::sort(nl.begin(), nl.end());
    compare("number-operator", n_matrix(o.gamma_bar, na, nb), nl, "N has eigenvalues n + m");
    s.artifact("levels", [&] {
        std::string t;
        auto v = levels(3);
        for (std::size_t i = 0; i < 10; ++i) t += format_double(v[i]) + "\n";
        return t;
    }());
}

void suite_modes(Suite& s, const Options& o) {
    std::vector<ModeSolution> modes;
    s.check("solve", [&] {
        modes = mode_solver();
        std::string l;
        for (const auto& m : modes) l += cga::to_string(m.lambda) + " ";
        return verdict(true, "eigenvalues " + l);
    });
    if (modes.empty()) return;
    std::string art;
    for (const auto& m : modes) art += "A[" + cga::to_string(m.lambda) + "] = " + ladder_string(m.op()) + "\n";
    art += "N = " + ladder_string(n_operator()) + "\n";
    s.artifact("modes", art);
    s.check("eigenvalues", [&] {
        std::vector<Rational> l;
        for (const auto& m : modes) l.push_back(m.lambda);
        return verdict(l == std::vector<Rational>{-3, -1, 1, 3}, "adjoint eigenvalues -3, -1, 1, 3 (the printed list says +-3, +-1/3)");
    });
    const LadderOp k = k_operator();
    for (const auto& m : modes)
        s.check("[K,A" + cga::to_string(m.lambda) + "]", [&] {
            WeylOp d = commutator(k, m.op()) - Coefficient(m.lambda) * m.op();
            return verdict(d.is_zero(), "exact with formal gbar", d.is_zero() ? "" : d.to_string());
        });
    s.check("pairing", [&] {
        for (const auto& x : modes)
            for (const auto& y : modes) {
                if (!x.lowering || y.lowering) continue;
                WeylOp c = commutator(x.op(), y.op());
                if (!(c == WeylOp(x.lambda == -y.lambda ? Coefficient(1) : Coefficient()))) return verdict(false, "[A-i, Aj] != delta", c.to_string());
            }
        return verdict(true, "[A-i, Aj] = delta_ij exactly");
    });
    s.check("invertible", [&] {
        auto d = invert_modes(modes);
        const std::array<LadderOp, 4> basis{ladder::a(), ladder::a_dag(), ladder::b(), ladder::b_dag()};
        for (std::size_t j = 0; j < 4; ++j) {
            LadderOp back;
            for (std::size_t i = 0; i < 4; ++i) back += d[j][i] * modes[i].op();
            if (!(back == basis[j])) return verdict(false, "a, a+, b, b+ not recovered");
        }
        return verdict(true, "a, a+, b, b+ recovered exactly from the modes");
    });
    s.check("printed:modes", [&] {
        const Coefficient g = Coefficient::gamma();
        using namespace ladder;
        const std::vector<LadderOp> printed{
            b(), a() + Coefficient(frac(1, 2)) * g * b(), a_dag() - Coefficient(frac(1, 4)) * g * b(),
            b_dag() - Coefficient(frac(1, 2)) * g * a_dag() - Coefficient(frac(1, 4)) * g * a() + Coefficient(frac(1, 24)) * g * g * b()};
        bool ok = true;
        for (std::size_t i = 0; i < 4; ++i) {
            WeylOp flipped;
            for (const auto& [mono, c] : printed[i].terms()) {
                Coefficient cc;
                for (const auto& [p, v] : c.terms()) cc += Coefficient(v, p) * Coefficient(p.gamma % 2 != 0 ? -1 : 1);
                flipped += WeylOp::monomial(mono, cc);
            }
            ok = flipped == modes[i].op();
            // printed modes with gbar -> -gbar
            if (!ok) break;
        }
        return verdict(ok, "printed modes agree after gbar -> -gbar");
    });
    s.check("numeric:" + format_double(o.gamma_bar.real()) + "," + format_double(o.gamma_bar.imag()), [&] {
        const int na = o.cutoff_a, nb = o.cutoff_b;
        const FockMatrix km = k_matrix(o.gamma_bar, na, nb);
        double worst = 0;
        for (const auto& m : modes) {
            const FockMatrix am = fock_matrix(m.op(), o.gamma_bar, na, nb);
            Eigen::MatrixXcd r = km.m * am.m - am.m * km.m - m.lambda.get_d() * am.m;
            for (std::size_t j = 0; j < km.basis.size(); ++j) {
                auto [n, q] = km.basis.state(j);
                if (n < na - 1 && q < nb - 1) worst = std::max(worst, r.col(static_cast<Eigen::Index>(j)).norm());
            }
        }
        return verdict(worst < 1e-9, "[K, A] = lambda A on truncated matrices away from the cutoff", "max residual " + format_double(worst));
    });
}

void suite_overlap(Suite& s, const Options& o) {
    const Complex gb = o.gamma_bar;
    const int na = o.cutoff_a, nb = o.cutoff_b;
    const double m2 = std::norm(gb), formula = m2 / (16 + 9 * m2);
    double p = 0;
    s.check("vacuum-decay", [&] {
        p = overlap_probability(eigenstate(1, 1, gb, na, nb), eigenstate(0, 0, gb, na, nb));
        return verdict(std::abs(p - formula) < 1e-12, "p = " + format_double(p) + ", |gbar|^2/(16+9|gbar|^2) = " + format_double(formula),
                       format_double(std::abs(p - formula)));
    });
    s.check("bound", [&] { return verdict(p < 1.0 / 9, "p < 1/9"); });
    s.check("self-overlap", [&] {
        auto st = eigenstate(1, 1, gb, na, nb);
        double q = overlap_probability(st, st);
        return verdict(std::abs(q - 1) < 1e-12, "normalized self-overlap " + format_double(q));
    });
    s.check("expansion", [&] {
        auto st = eigenstate(1, 1, gb, na, nb);
        const auto& b = st.basis;
        double c2 = std::abs(st.v(static_cast<Eigen::Index>(b.index(2, 0)))) / std::sqrt(2.0);
        double c0 = std::abs(st.v(static_cast<Eigen::Index>(b.index(0, 0))));
        double g = std::abs(gb);
        return verdict(std::abs(c2 - g / 2) < 1e-12 && std::abs(c0 - g / 4) < 1e-12,
                       "|1,1> + c2|2,0> + c0|0,0> with |c2| = |gbar|/2, |c0| = |gbar|/4");
    });
    s.check("large-coupling", [&] {
        double q = overlap_probability(eigenstate(1, 1, 1e3, na, nb), eigenstate(0, 0, 1e3, na, nb));
        return verdict(std::abs(q - 1.0 / 9) < 1e-4 && q < 1.0 / 9, "p -> 1/9 at |gbar| = 1000: " + format_double(q));
    });
    s.check("eigenbasis", [&] {
        double c = eigenbasis_condition(gb, na, nb);
        return verdict(std::isfinite(c), "condition number of the normalized eigenbasis " + format_double(c));
    });
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", p);
    s.artifact("probability", buf);
}

void suite_eigencheck(Suite& s, const Options&) {
    H0EigenReport rep;
    bool ran = false;
    s.check("identities", [&] {
        rep = h0_eigencheck(6);
        ran = true;
        return verdict(true, "w+1 psi00 = w+3 psi00 = 0, [H0, w-1] = w-1, [H0, w-3] = 3 w-3, H0 = gamma^2/16(w-1 w+1 - w-3 w+3) + 2");
    });
    if (!ran) return;
    s.check("levels", [&] {
        return verdict(rep.levels.size() == 12, "H0 psi(n,m) = (n+3m+2) psi(n,m) exactly for all " + std::to_string(rep.levels.size()) +
                                                      " states with n + 3m <= 6");
    });
    std::string art;
    for (const auto& l : rep.levels) art += "psi(" + std::to_string(l.n) + "," + std::to_string(l.m) + ") = " + l.psi.to_string() + "\n";
    s.artifact("eigenfunctions", art);
    for (const auto& p : rep.printed) {
        s.check("printed:psi(" + std::to_string(p.n) + "," + std::to_string(p.m) + ")", [&] {
            auto ratio = p.computed.ratio_to(p.printed);
            bool ok = ratio.has_value();
            return verdict(ok, ok ? "printed = (" + ratio->to_string() + ") * computed"
                                  : std::string("printed is not a multiple of the computed eigenfunction") +
                                        (p.printed_is_eigenfunction ? "" : " and is not an eigenfunction"),
                           ok ? "" : "computed " + p.computed.to_string() + " vs printed " + p.printed.to_string());
        });
    }
}

std::vector<std::vector<int>> all_signs(std::size_t k) {
    std::vector<std::vector<int>> out;
    for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
        std::vector<int> s;
        for (std::size_t i = 0; i < k; ++i) s.push_back((mask >> i) & 1 ? -1 : 1);
        out.push_back(s);
    }
    return out;
}

void suite_general_l(Suite& s, const Options& o) {
    const std::size_t nsigns = static_cast<std::size_t>((o.two_ell - 1) / 2);
    std::vector<std::vector<int>> choices;
    if (o.signs) {
        if (o.signs->size() != nsigns) throw UsageError("--signs needs " + std::to_string(nsigns) + " entries for ell = " + ell_text(o.two_ell));
        choices.push_back(*o.signs);
    } else {
        choices = all_signs(nsigns);
    }
    std::vector<Coefficient> gammas;
    for (std::size_t j = 0; j < nsigns; ++j)
        gammas.push_back(o.gamma ? Coefficient(*o.gamma) : j == 0 ? Coefficient::gamma() : Coefficient(frac(1, 2)));
    for (const auto& signs : choices) {
        const std::string id = "ell=" + ell_text(o.two_ell) + ",signs=" + signs_text(signs);
        std::vector<SymmetryResult> rs;
        const GenParams p{o.two_ell, gammas, signs};
        const WeylOp om = gen_osc(p);
        s.check(id + ":search", [&] {
            SymmetryOptions so;
            so.degree_bound = o.degree_bound;
            so.max_weyl_degree = o.max_weyl_degree;
            rs = find_symmetries(om, so);
            const std::size_t expect = static_cast<std::size_t>(o.two_ell + 5);
            return verdict(rs.size() == expect, std::to_string(rs.size()) + " generators, dimension of the centrally extended algebra is " +
                                                    std::to_string(expect));
        });
        s.artifact(id, symmetries_text(rs));
        for (int l : {2, -2}) {
            s.check(id + ":lambda=" + std::to_string(l), [&, l] {
                for (const auto& r : rs)
                    if (r.lambda == Phase{l, 0} && !time_derivative_part(r.generator).is_zero()) {
                        WeylOp d = commutator(r.generator, om) - r.multiplier.numerator * om;
                        return verdict(d.is_zero(), "time-phase generator with Dt part, [Z, Omega] = f Omega exactly, f = " + r.multiplier.to_string(),
                                       d.is_zero() ? "" : d.to_string());
                    }
                return verdict(false, "no generator with a Dt part at this phase");
            });
        }
    }
}

using SuiteFn = void (*)(Suite&, const Options&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
    static const std::vector<std::pair<std::string, SuiteFn>> t{
        {"verify-algebra", suite_verify_algebra}, {"omega", suite_omega},       {"onshell", suite_onshell},
        {"critical", suite_critical},             {"symmetries", suite_symmetries}, {"contract", suite_contract},
        {"spectrum", suite_spectrum},             {"modes", suite_modes},       {"overlap", suite_overlap},
        {"eigencheck", suite_eigencheck},         {"general-l", suite_general_l},
    };
    return t;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, fn] : suite_table()) n.push_back(name);
        n.push_back("all");
        return n;
    }();
    return names;
}

Report run(const std::string& suite, const Options& options) {
    Report r{suite, options, {}, {}};
    bool found = false;
    for (const auto& [name, fn] : suite_table()) {
        if (suite != "all" && suite != name) continue;
        found = true;
        Suite s(r, suite == "all" ? name + "/" : "", options.deterministic);
        fn(s, options);
    }
    if (!found) throw UsageError("unknown suite " + suite);
    return r;
}

// --- serialization -------------------------------------------------------

json to_json(const Report& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"id", c.id}, {"status", to_string(c.status)}, {"details", c.details}, {"residual", c.residual}, {"seconds", c.seconds}});
    return {
        {"schema", "cga-verify-report"},
        {"version", kReportVersion},
        {"tool_version", kToolVersion},
        {"suite", r.suite},
        {"options", options_to_json(r.options)},
        {"checks", checks},
        {"artifacts", r.artifacts},
        {"summary", {{"pass", r.count(Status::Pass)}, {"fail", r.count(Status::Fail)}, {"skip", r.count(Status::Skip)}}},
    };
}

Report report_from_json(const json& j) {
    try {
        if (j.at("schema") != "cga-verify-report") throw UsageError("not a cga-verify report");
        if (j.at("version").get<int>() != kReportVersion) throw UsageError("unsupported report version");
        Report r;
        r.suite = j.at("suite").get<std::string>();
        r.options = options_from_json(j.at("options"));
        for (const auto& c : j.at("checks"))
            r.checks.push_back({c.at("id").get<std::string>(), status_from_string(c.at("status").get<std::string>()),
                                c.at("details").get<std::string>(), c.at("residual").get<std::string>(), c.at("seconds").get<double>()});
        r.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed report: ") + e.what());
    }
}

std::string to_markdown(const Report& r) {
    auto cell = [](std::string s) {
        std::string out;
        for (char ch : s) {
            if (ch == '|') out += "\\|";
            else if (ch == '\n') out += "<br>";
            else out += ch;
        }
        return out;
    };
    std::ostringstream md;
    md << "# cga_verify: " << r.suite << "\n\n";
    md << r.count(Status::Pass) << " passed, " << r.count(Status::Fail) << " failed, " << r.count(Status::Skip) << " skipped\n\n";
    md << "| check | status | details | residual | seconds |\n|---|---|---|---|---|\n";
    for (const auto& c : r.checks) {
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.3f", c.seconds);
        md << "| " << cell(c.id) << " | " << to_string(c.status) << " | " << cell(c.details) << " | " << cell(c.residual) << " | " << secs << " |\n";
    }
    return md.str();
}

namespace {

std::string golden_path(const std::string& dir, const std::string& suite) { return dir + "/" + suite + ".json"; }

}  // namespace

void compare_golden(Report& r, const std::string& dir) {
    std::ifstream in(golden_path(dir, r.suite));
    if (!in) {
        r.checks.push_back({"golden", Status::Fail, "no fixture " + golden_path(dir, r.suite), {}, 0});
        return;
    }
    json fixture;
    try {
        in >> fixture;
    } catch (const json::exception& e) {
        r.checks.push_back({"golden", Status::Fail, std::string("unreadable fixture: ") + e.what(), {}, 0});
        return;
    }
    std::set<std::string> keys;
    for (const auto& [k, v] : r.artifacts) keys.insert(k);
    for (const auto& [k, v] : fixture.items()) keys.insert(k);
    for (const auto& k : keys) {
        CheckRecord c{"golden:" + k, Status::Pass, "matches fixture", {}, 0};
        auto it = r.artifacts.find(k);
        if (it == r.artifacts.end()) c = {"golden:" + k, Status::Fail, "artifact missing from the run", {}, 0};
        else if (!fixture.contains(k)) c = {"golden:" + k, Status::Fail, "artifact missing from the fixture", {}, 0};
        else if (fixture[k].get<std::string>() != it->second)
            c = {"golden:" + k, Status::Fail, "differs from fixture", it->second, 0};
        r.checks.push_back(c);
    }
}

void write_golden(const Report& r, const std::string& dir) {
    std::ofstream out(golden_path(dir, r.suite));
    if (!out) throw UsageError("cannot write " + golden_path(dir, r.suite));
    out << json(r.artifacts).dump(2) << "\n";
}

json catalog_json() {
    json tables = {
        {"cga32", cga32_table().to_string()},
        {"decoupled_generic", decoupled_generic_table().to_string()},
        {"enhanced_omega1", enhanced_table(1).to_string()},
        {"enhanced_omega3", enhanced_table(3).to_string()},
        {"contraction", contraction_table().to_string()},
    };
    json reals;
    auto put = [&](const std::string& name, const Realization& r) {
        json o = json::object();
        for (std::size_t k = 0; k < r.size(); ++k) o[r.labels()[k]] = r.at(k).to_string();
        reals[name] = o;
    };
    put("free", realization_free());
    put("osc", realization_osc());
    put("decoupled_generic", decoupled_generic());
    put("decoupled_enhanced_omega1", decoupled_enhanced(1));
    put("decoupled_enhanced_omega3", decoupled_enhanced(3));
    put("decoupled_quadratic", decoupled_quadratic());
    put("contraction_printed", contraction_printed());
    json ops = {
        {"h0", h0().to_string()},
        {"x_plus", x_plus().to_string()},
        {"k_plus", k_plus().to_string()},
        {"decoupling_exponent", decoupling_exponent().to_string()},
        {"K", ladder_string(k_operator())},
        {"N", ladder_string(n_operator())},
    };
    return {{"tables", tables}, {"realizations", reals}, {"operators", ops}};
}

// --- command line --------------------------------------------------------

Invocation parse_args(int argc, const char* const* argv) {
    CLI::App app{"Exact verification suites for the centrally extended conformal Galilei algebra and its invariant PDEs",
                 "cga_verify"};
    Invocation inv;
    std::string config;
    const std::vector<std::pair<std::string, std::string>> value_flags{
        {"gamma", "coupling gamma: Gaussian rational or 'formal' (default formal)"},
        {"gamma-bar", "Fock coupling gbar as 're,im' (default 1)"},
        {"omega", "frequency omega as p/q or 'formal' (default formal)"},
        {"ell", "half-integer ell for general-l (default 5/2)"},
        {"signs", "epsilon signs for general-l, e.g. '+,-', or 'all' (default all)"},
        {"cutoff-a", "Fock cutoff N_a (default 12)"},
        {"cutoff-b", "Fock cutoff N_b (default 12)"},
        {"degree-bound", "coefficient degree bound of the symmetry ansatz (default 2)"},
        {"max-weyl-degree", "cap on total Weyl degree of symmetry generators, or 'none' (default 2)"},
        {"realization", "free, osc or both (default both)"},
        {"format", "json or md (default json)"},
        {"out", "write the report to PATH instead of stdout"},
        {"golden", "compare artifacts with DIR/<suite>.json"},
    };
    std::map<std::string, std::string> values;
    for (const auto& [name, help] : value_flags) app.add_option("--" + name, values[name], help);
    app.add_option("suite", inv.suite, "suite: verify-algebra, omega, onshell, critical, symmetries, contract, spectrum, modes, overlap, eigencheck, general-l, all");
    app.add_option("--config", config, "JSON file with the same keys as the flags");
    bool update = false, deterministic = false;
    app.add_flag("--update-golden", update, "write the artifacts to the --golden directory");
    app.add_flag("--deterministic", deterministic, "record zero timings");
    app.add_flag("--catalog", inv.catalog, "print the catalog of tables and realizations");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        inv.help = true;
        inv.help_text = app.help();
        return inv;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    if (!config.empty()) {
        std::ifstream in(config);
        if (!in) throw UsageError("cannot read config " + config);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw UsageError(std::string("config is not JSON: ") + e.what());
        }
        inv.options = options_from_json(j, inv.options);
    }
    for (const auto& [name, help] : value_flags)
        if (app.count("--" + name) > 0) apply_option(inv.options, name, values[name]);
    if (update) inv.options.update_golden = true;
    if (deterministic) inv.options.deterministic = true;
    if (inv.options.update_golden && inv.options.golden_dir.empty()) throw UsageError("--update-golden needs --golden DIR");
    if (inv.catalog) return inv;
    if (inv.suite.empty()) throw UsageError("a suite name is required");
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), inv.suite) == names.end()) throw UsageError("unknown suite " + inv.suite);
    return inv;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        Invocation inv = parse_args(argc, argv);
        if (inv.help) {
            out << inv.help_text;
            return 0;
        }
        auto emit = [&](const std::string& text) {
            if (inv.options.out.empty()) {
                out << text;
                return;
            }
            std::ofstream f(inv.options.out);
            if (!f) throw UsageError("cannot write " + inv.options.out);
            f << text;
        };
        if (inv.catalog) {
            emit(catalog_json().dump(2) + "\n");
            return 0;
        }
        Report r = run(inv.suite, inv.options);
        if (!inv.options.golden_dir.empty()) {
            if (inv.options.update_golden) write_golden(r, inv.options.golden_dir);
            else compare_golden(r, inv.options.golden_dir);
        }
        emit(inv.options.format == "md" ? to_markdown(r) : to_json(r).dump(2) + "\n");
        return r.ok() ? 0 : 1;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace cga::cli
