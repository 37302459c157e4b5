#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cga/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cga;
using namespace cga::cli;
namespace fs = std::filesystem;

namespace {

int invoke(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    args.insert(args.begin(), "cga_verify");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

Invocation parse(std::vector<std::string> args) {
    args.insert(args.begin(), "cga_verify");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse_args(static_cast<int>(argv.size()), argv.data());
}

const CheckRecord& find_check(const Report& r, const std::string& id) {
    for (const auto& c : r.checks)
        if (c.id == id) return c;
    FAIL("missing check " << id);
    return r.checks.front();
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("cga_cli_test_" + name); }

}  // namespace

TEST_CASE("option parsing") {
    Options o;
    apply_option(o, "gamma", "1/2-3/4i");
    CHECK(*o.gamma == GaussianRational(frac(1, 2), frac(-3, 4)));
    apply_option(o, "gamma", "formal");
    CHECK_FALSE(o.gamma.has_value());

    apply_option(o, "gamma-bar", "0.5,-0.25");
    CHECK(o.gamma_bar == Complex(0.5, -0.25));
    apply_option(o, "gamma-bar", "4");
    CHECK(o.gamma_bar == Complex(4, 0));

    apply_option(o, "omega", "-1/3");
    CHECK(*o.omega == frac(-1, 3));
    apply_option(o, "ell", "7/2");
    CHECK(o.two_ell == 7);
    apply_option(o, "signs", "+,-,-");
    CHECK(*o.signs == std::vector<int>{1, -1, -1});
    apply_option(o, "signs", "all");
    CHECK_FALSE(o.signs.has_value());
    apply_option(o, "max-weyl-degree", "none");
    CHECK_FALSE(o.max_weyl_degree.has_value());

    CHECK_THROWS_AS(apply_option(o, "gamma-bar", "1,x"), UsageError);
    CHECK_THROWS_AS(apply_option(o, "omega", "third"), UsageError);
    CHECK_THROWS_AS(apply_option(o, "ell", "2"), UsageError);
    CHECK_THROWS_AS(apply_option(o, "ell", "1/2"), UsageError);
    CHECK_THROWS_AS(apply_option(o, "signs", "+,0"), UsageError);
    CHECK_THROWS_AS(apply_option(o, "cutoff-a", "0"), UsageError);
    CHECK_THROWS_AS(apply_option(o, "cutoff-b", "3.5"), UsageError);
    CHECK_THROWS_AS(apply_option(o, "realization", "neither"), UsageError);
    CHECK_THROWS_AS(apply_option(o, "format", "xml"), UsageError);
    CHECK_THROWS_AS(apply_option(o, "colour", "red"), UsageError);
}

TEST_CASE("options round-trip through JSON") {
    Options o;
    o.gamma = GaussianRational(frac(2, 3), 1);
    o.gamma_bar = Complex(0.1, 1.0 / 3);
    o.omega = frac(1, 3);
    o.two_ell = 7;
    o.signs = std::vector<int>{-1, 1, -1};
    o.cutoff_a = 9;
    o.cutoff_b = 4;
    o.degree_bound = 3;
    o.max_weyl_degree.reset();
    o.realization = "osc";
    o.format = "md";
    o.out = "x.json";
    o.deterministic = true;
    CHECK(options_from_json(options_to_json(o)) == o);
    CHECK(options_from_json(options_to_json(Options{})) == Options{});

    CHECK(options_from_json(nlohmann::json{{"cutoff-a", 5}, {"deterministic", true}, {"gamma-bar", 0.5}}).cutoff_a == 5);
    CHECK_THROWS_AS(options_from_json(nlohmann::json::array()), UsageError);
    CHECK_THROWS_AS(options_from_json(nlohmann::json{{"cutoff-a", nlohmann::json::array()}}), UsageError);
}

TEST_CASE("report round-trips through JSON") {
    Options o;
    o.cutoff_a = o.cutoff_b = 8;
    for (const std::string suite : {"overlap", "eigencheck", "critical"}) {
        Report r = run(suite, o);
        CHECK(report_from_json(to_json(r)) == r);
        CHECK(report_from_json(nlohmann::json::parse(to_json(r).dump())) == r);
    }
    nlohmann::json j = to_json(run("overlap", o));
    CHECK(j["schema"] == "cga-verify-report");
    CHECK(j["version"] == kReportVersion);
    CHECK(j["summary"]["pass"].get<std::size_t>() + j["summary"]["fail"].get<std::size_t>() == j["checks"].size());
    j["version"] = kReportVersion + 1;
    CHECK_THROWS_AS(report_from_json(j), UsageError);
    CHECK_THROWS_AS(report_from_json(nlohmann::json{{"schema", "cga-verify-report"}}), UsageError);
}

TEST_CASE("flags override config which overrides defaults") {
    const fs::path cfg = temp_path("config.json");
    {
        std::ofstream f(cfg);
        f << R"({"gamma-bar": "4,0", "cutoff-a": 7, "omega": "3", "format": "md"})";
    }
    Invocation inv = parse({"overlap", "--config", cfg.string(), "--cutoff-a", "9"});
    CHECK(inv.suite == "overlap");
    CHECK(inv.options.gamma_bar == Complex(4, 0));
    CHECK(inv.options.cutoff_a == 9);
    CHECK(*inv.options.omega == 3);
    CHECK(inv.options.format == "md");
    CHECK(inv.options.cutoff_b == Options{}.cutoff_b);

    {
        std::ofstream f(cfg);
        f << R"({"colour": "red"})";
    }
    CHECK_THROWS_AS(parse({"overlap", "--config", cfg.string()}), UsageError);
    {
        std::ofstream f(cfg);
        f << "not json";
    }
    CHECK_THROWS_AS(parse({"overlap", "--config", cfg.string()}), UsageError);
    CHECK_THROWS_AS(parse({"overlap", "--config", temp_path("missing.json").string()}), UsageError);
    fs::remove(cfg);

    CHECK_THROWS_AS(parse({}), UsageError);
    CHECK_THROWS_AS(parse({"nonsense"}), UsageError);
    CHECK_THROWS_AS(parse({"overlap", "--no-such-flag"}), UsageError);
    CHECK_THROWS_AS(parse({"overlap", "--update-golden"}), UsageError);
    CHECK(parse({"--catalog"}).catalog);
    CHECK(parse({"--help"}).help);
}

TEST_CASE("exit codes") {
    std::string out, err;
    CHECK(invoke({"overlap", "--cutoff-a", "8", "--cutoff-b", "8"}, &out) == 0);
    CHECK(nlohmann::json::parse(out)["summary"]["fail"] == 0);
    // the printed psi(1,1) differs from the computed eigenfunction
    CHECK(invoke({"eigencheck"}, &out) == 1);
    CHECK(invoke({"bogus"}, &out, &err) == 2);
    CHECK(err.find("unknown suite") != std::string::npos);
    CHECK(invoke({"overlap", "--gamma-bar", "1,i"}, &out, &err) == 2);
    CHECK(invoke({"general-l", "--signs", "+"}, &out, &err) == 2);
    CHECK(invoke({"--help"}, &out) == 0);
    CHECK(out.find("--gamma-bar") != std::string::npos);
    CHECK(invoke({"--catalog"}, &out) == 0);
    auto cat = nlohmann::json::parse(out);
    CHECK(cat["tables"].contains("cga32"));
    CHECK(cat["realizations"]["osc"].size() == 8);
}

TEST_CASE("verify-algebra on the oscillator realization") {
    Options o;
    o.realization = "osc";
    Report r = run("verify-algebra", o);
    std::size_t pairs = 0;
    for (const auto& c : r.checks)
        if (c.id.rfind("osc:[", 0) == 0) {
            ++pairs;
            CHECK_MESSAGE(c.status == Status::Pass, c.id);
        }
    CHECK(pairs == 8 * 7 / 2);
    CHECK(r.ok());
    for (const auto& c : r.checks) CHECK(c.id.rfind("free:", 0) != 0);
}

TEST_CASE("overlap at gbar = 1") {
    Options o;
    o.gamma_bar = 1;
    Report r = run("overlap", o);
    CHECK(r.ok());
    CHECK(std::stod(r.artifacts.at("probability")) == doctest::Approx(1.0 / 25).epsilon(1e-12));
    CHECK(find_check(r, "vacuum-decay").status == Status::Pass);
}

TEST_CASE("symmetries of the decoupled oscillator at omega = 3") {
    Options o;
    o.omega = 3;
    o.gamma = GaussianRational(0);
    Report r = run("symmetries", o);
    CHECK(find_check(r, "search").details.rfind("12 generators", 0) == 0);
    CHECK(find_check(r, "on-shell").status == Status::Pass);
    CHECK(find_check(r, "closure").status == Status::Pass);
    CHECK(find_check(r, "printed:dimension").status == Status::Pass);
    CHECK(find_check(r, "enhanced:in-span").status == Status::Pass);
    // the omega = 1 and omega = 3 algebras turn out isomorphic
    CHECK(find_check(r, "printed:inequivalent-to-omega=1").status == Status::Fail);
}

TEST_CASE("coupled symmetries at the critical frequencies") {
    for (const std::string w : {"3", "-3", "1/3", "-1/3", "2"}) {
        Options o;
        apply_option(o, "omega", w);
        o.gamma = GaussianRational(1);
        Report r = run("symmetries", o);
        CAPTURE(w);
        CHECK(r.ok());
        const bool critical = w != "2";
        CHECK((find_check(r, "search").details.rfind("8 generators", 0) == 0) == critical);
    }
}

TEST_CASE("deterministic runs are byte identical") {
    std::string a, b;
    CHECK(invoke({"modes", "--deterministic"}, &a) == 0);
    CHECK(invoke({"modes", "--deterministic"}, &b) == 0);
    CHECK(a == b);
    for (const auto& c : nlohmann::json::parse(a)["checks"]) CHECK(c["seconds"] == 0.0);
}

TEST_CASE("markdown output") {
    std::string out;
    CHECK(invoke({"critical", "--format", "md"}, &out) == 0);
    CHECK(out.rfind("# cga_verify: critical", 0) == 0);
    CHECK(out.find("| check | status | details | residual | seconds |") != std::string::npos);
    CHECK(out.find("| omega-set | pass |") != std::string::npos);
}

TEST_CASE("out flag writes the report to a file") {
    const fs::path p = temp_path("report.json");
    std::string out;
    CHECK(invoke({"critical", "--out", p.string()}, &out) == 0);
    CHECK(out.empty());
    std::ifstream f(p);
    nlohmann::json j;
    f >> j;
    CHECK(j["suite"] == "critical");
    fs::remove(p);
}

TEST_CASE("golden fixtures match") {
    for (const auto& suite : suite_names()) {
        if (suite == "all") continue;
        CAPTURE(suite);
        Report r = run(suite);
        REQUIRE_FALSE(r.artifacts.empty());
        compare_golden(r, CGA_GOLDEN_DIR);
        std::size_t golden = 0;
        for (const auto& c : r.checks)
            if (c.id.rfind("golden", 0) == 0) {
                ++golden;
                CHECK_MESSAGE(c.status == Status::Pass, c.id << ": " << c.details);
            }
        CHECK(golden == r.artifacts.size());
    }
}

TEST_CASE("golden comparison detects drift") {
    const fs::path dir = temp_path("golden");
    fs::create_directories(dir);
    Report r = run("critical");
    write_golden(r, dir.string());
    Report same = r;
    compare_golden(same, dir.string());
    CHECK(same.ok());

    nlohmann::json j;
    {
        std::ifstream f(dir / "critical.json");
        f >> j;
    }
    j["solutions"] = "omega=5 lambda=1\n";
    j["extra"] = "x";
    {
        std::ofstream f(dir / "critical.json");
        f << j.dump();
    }
    Report drift = r;
    compare_golden(drift, dir.string());
    CHECK(find_check(drift, "golden:solutions").status == Status::Fail);
    CHECK(find_check(drift, "golden:extra").status == Status::Fail);
    CHECK(find_check(drift, "golden:eliminant").status == Status::Pass);

    Report missing = run("modes");
    compare_golden(missing, dir.string());
    CHECK(find_check(missing, "golden").status == Status::Fail);
    fs::remove_all(dir);

    std::string out;
    CHECK(invoke({"critical", "--golden", CGA_GOLDEN_DIR}, &out) == 0);
}

TEST_CASE("all runs every suite with prefixed ids") {
    Report r = run("all");
    for (const auto& suite : suite_names()) {
        if (suite == "all") continue;
        bool seen = false;
        for (const auto& c : r.checks) seen = seen || c.id.rfind(suite + "/", 0) == 0;
        CHECK_MESSAGE(seen, suite);
    }
    std::size_t fails = r.count(Status::Fail);
    CHECK(fails == 2);
    CHECK(find_check(r, "symmetries/printed:dimension").status == Status::Fail);
    CHECK(find_check(r, "eigencheck/printed:psi(1,1)").status == Status::Fail);
}
