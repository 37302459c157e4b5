#ifndef CGA_CLI_HPP
#define CGA_CLI_HPP

#include "cga/fock.hpp"

#include "json.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cga::cli {

inline constexpr int kReportVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Status { Pass, Fail, Skip };
std::string to_string(Status s);
Status status_from_string(const std::string& s);

struct CheckRecord {
    std::string id;
    Status status = Status::Pass;
    std::string details;
    std::string residual;
    double seconds = 0;
    friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct Options {
    std::optional<GaussianRational> gamma;  // formal when empty
    Complex gamma_bar{1, 0};
    std::optional<Rational> omega;  // formal when empty
    int two_ell = 5;
    std::optional<std::vector<int>> signs;  // every sign choice when empty
    int cutoff_a = 12;
    int cutoff_b = 12;
    int degree_bound = 2;
    std::optional<int> max_weyl_degree = 2;  // empty: full first-order space
    std::string realization = "both";        // free, osc, both
    std::string format = "json";             // json, md
    std::string out;
    std::string golden_dir;
    bool update_golden = false;
    bool deterministic = false;  // zero timings
    friend bool operator==(const Options&, const Options&) = default;
};

/// Sets one option from its flag name without dashes ("gamma-bar") and a text value.
void apply_option(Options& o, const std::string& key, const std::string& value);
/// Keys as flag names, values as the text apply_option accepts.
nlohmann::json options_to_json(const Options& o);
/// Applies every key of a config object on top of `base`; unknown keys are usage errors.
Options options_from_json(const nlohmann::json& j, Options base = {});

struct Report {
    std::string suite;
    Options options;
    std::vector<CheckRecord> checks;
    std::map<std::string, std::string> artifacts;  // canonical serializations for golden files

    std::size_t count(Status s) const;
    bool ok() const { return count(Status::Fail) == 0; }
    friend bool operator==(const Report&, const Report&) = default;
};

const std::vector<std::string>& suite_names();
/// Runs one suite ("all" runs every suite, check ids prefixed by suite); throws UsageError.
Report run(const std::string& suite, const Options& options = {});

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);
std::string to_markdown(const Report& r);

/// Adds one golden check per artifact, comparing with DIR/<suite>.json.
void compare_golden(Report& r, const std::string& dir);
void write_golden(const Report& r, const std::string& dir);

/// Tables and realizations of the catalog as canonical strings.
nlohmann::json catalog_json();

struct Invocation {
    std::string suite;
    Options options;
    bool catalog = false;
    bool help = false;
    std::string help_text;
};
/// Flags override the --config file, which overrides defaults. Throws UsageError.
Invocation parse_args(int argc, const char* const* argv);

/// Full command-line behavior; returns 0 on success, 1 on a failed check, 2 on usage or internal errors.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cga::cli

#endif
