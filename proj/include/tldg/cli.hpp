#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tldg/solver.hpp"
#include "tldg/study.hpp"

namespace tldg::cli {

/// Bad command line or config file. `key` names the offending setting when
/// there is one.
class UsageError : public std::runtime_error {
public:
    UsageError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : "--" + key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// --help was given; carries the text to print.
struct HelpRequested {
    std::string text;
};

enum class Command { solve, space_order, time_order, stability, demo };

struct SolveOptions {
    std::string problem = "ex4.1";
    double alpha = 0.5;
    double gamma = 2.0;
    double delta = 0.3;
    std::optional<double> rho;  ///< only for problems without a closed-form solution
    int degree = 2;
    int cells = 20;
    double a = 0.0;  ///< ex4.3 only
    double b = 6.0;
    MeshKind mesh = MeshKind::uniform;
    std::uint64_t seed = 1;
    double final_time = 1.0;
    int steps = 1000;
    InitialMode initial = InitialMode::gauss_radau;
    int quad_order = 0;
    int samples = 4;             ///< points per cell in the solution CSV
    std::string out;             ///< solution CSV (x,u)
    std::string mesh_out;        ///< interface coordinates
    int errors_every = 0;        ///< > 0: errors at every n-th level too
    std::string errors_out;
};

struct DemoOptions {
    double alpha = 0.3;
    double gamma = 2.0;
    double delta = 0.2;
    double rho = 0.0;
    int degree = 2;
    double tau = 0.001;
    double h = 0.01;
    double final_time = 1.0;
    double a = 0.0;
    double b = 6.0;
    std::vector<double> times = {0.0, 0.1, 0.5, 1.0};
    int samples = 4;
    std::string out_dir = ".";
    std::string prefix = "demo";
    // derived during validation
    int cells = 0;
    int steps = 0;
    std::vector<int> snapshot_steps;
};

struct CliConfig {
    Command command = Command::solve;
    SolveOptions solve;
    SpatialStudyParams space;
    TemporalStudyParams time;
    StabilityParams stability;
    DemoOptions demo;
    std::string out;      ///< study CSV; empty writes the CSV to stdout
    bool timing = true;   ///< false writes wall_time_s as 0
    bool table = false;   ///< also print the study table
    std::string config_path;
};

/// Flat `key = value` lines, `#` starts a comment. Duplicate keys keep the
/// last value. Throws UsageError on a malformed line or unreadable file.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

/// args excludes the program name. Precedence: defaults < --config file <
/// flags. Throws UsageError or HelpRequested; on return the config is
/// fully validated.
CliConfig parse_args(const std::vector<std::string>& args);

/// Executes a validated config. Returns 0 on success, 1 on numerical failure.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-status contract (2 on usage errors).
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string usage();

}  // namespace tldg::cli
