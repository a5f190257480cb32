#include "tldg/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tldg/errors.hpp"
#include "tldg/problems.hpp"

namespace tldg::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size()) throw UsageError(key, "'" + text + "' is not a number");
    if (!std::isfinite(v)) throw UsageError(key, "value must be finite");
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError(key, "'" + text + "' is not an integer");
    return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& key, const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    if (parts.empty() || std::any_of(parts.begin(), parts.end(), [](const std::string& p) { return p.empty(); })) {
        throw UsageError(key, "expected a comma-separated list, got '" + text + "'");
    }
    return parts;
}

std::vector<double> double_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& p : split_list(key, text)) out.push_back(parse_double(key, p));
    return out;
}

std::vector<int> int_list(const std::string& key, const std::string& text) {
    std::vector<int> out;
    for (const auto& p : split_list(key, text)) out.push_back(parse_int(key, p));
    return out;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha", "alpha must lie in (0, 1), got " + fmt17(alpha));
}

void check_gamma(double gamma) {
    if (!(gamma >= 0.0)) throw UsageError("gamma", "gamma must be >= 0, got " + fmt17(gamma));
}

void check_delta_key(double delta) {
    try {
        check_delta(delta);
    } catch (const std::invalid_argument& e) {
        throw UsageError("delta", e.what());
    }
}

void check_degree(int k) {
    // quadrature order k+2 must stay within the 32-point table
    if (k < 0 || k > 30) throw UsageError("k", "polynomial degree must lie in [0, 30], got " + std::to_string(k));
}

void check_cells(const std::string& key, int n) {
    if (n < 2) throw UsageError(key, "need at least 2 cells, got " + std::to_string(n));
}

void check_positive(const std::string& key, double v) {
    if (!(v > 0.0)) throw UsageError(key, "must be > 0, got " + fmt17(v));
}

int steps_from(const std::string& key, double final_time, double tau) {
    check_positive(key, tau);
    try {
        return steps_for(final_time, tau);
    } catch (const std::invalid_argument&) {
        throw UsageError(key, "T / tau must be an integer (T = " + fmt17(final_time) + ", tau = " + fmt17(tau) + ")");
    }
}

void check_output_path(const std::string& key, const std::string& path) {
    if (path.empty()) return;
    const std::filesystem::path p(path);
    const auto parent = p.parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
        throw UsageError(key, "directory '" + parent.string() + "' does not exist");
    }
}

void check_problem(const std::string& label) {
    if (label != "ex4.1" && label != "ex4.2" && label != "ex4.3") {
        throw UsageError("problem", "unknown problem '" + label + "' (expected ex4.1, ex4.2 or ex4.3)");
    }
}

const std::map<std::string, MeshKind> kMeshKinds = {{"uniform", MeshKind::uniform}, {"perturbed", MeshKind::perturbed}};
const std::map<std::string, InitialMode> kInitialModes = {{"gauss-radau", InitialMode::gauss_radau},
                                                          {"l2", InitialMode::l2}};

// Raw text for list-valued and derived settings; parsed after CLI11 is done.
struct RawArgs {
    std::string cells;
    std::string taus;
    std::string alphas;
    std::string gammas;
    std::string deltas;
    std::string degrees;
    std::string times;
    std::string mesh = "uniform";
    std::string initial = "gauss-radau";
    double tau = 0.0;
    std::string config;
};

struct Built {
    std::unique_ptr<CLI::App> app;
    std::map<std::string, CLI::App*> subs;
};

void add_common_scheme(CLI::App* s, RawArgs& raw, std::uint64_t& seed, int& quad) {
    s->add_option("--mesh", raw.mesh, "uniform | perturbed")->check(CLI::IsMember({"uniform", "perturbed"}));
    s->add_option("--seed", seed, "seed of the perturbed mesh");
    s->add_option("--initial", raw.initial, "initial projection: gauss-radau | l2")
        ->check(CLI::IsMember({"gauss-radau", "l2"}));
    s->add_option("--quad", quad, "Gauss points per cell (0 = max(k+2, 6))");
}

Built build_app(CliConfig& c, RawArgs& raw) {
    Built b;
    b.app = std::make_unique<CLI::App>("Tempered fractional diffusion solver (LDG in space, L1 in time)", "tldg");
    auto& app = *b.app;
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    // no -h: demo uses --h for the cell size
    app.set_help_flag("--help", "print this help and exit");
    app.set_help_all_flag("--help-all", "help for every subcommand");

    auto config_opt = [&raw](CLI::App* s) {
        s->add_option("--config", raw.config, "flat key = value file; flags given on the command line win");
    };
    auto study_out = [&c](CLI::App* s) {
        s->add_option("--out", c.out, "CSV output path (default: CSV on stdout)");
        s->add_flag_function("--no-timing,--deterministic", [&c](std::int64_t) { c.timing = false; },
                    "write wall_time_s as 0 for byte-identical files");
        s->add_flag("--table", c.table, "print the error table on stdout as well");
    };

    {
        auto* s = app.add_subcommand("solve", "single solve to T; prints errors when the exact solution is known");
        auto& o = c.solve;
        config_opt(s);
        s->add_option("--problem", o.problem, "ex4.1 | ex4.2 | ex4.3");
        s->add_option("--alpha", o.alpha, "fractional order in (0, 1)");
        s->add_option("--gamma", o.gamma, "tempering parameter >= 0");
        s->add_option("--delta", o.delta, "flux weight, != 1/2");
        s->add_option("--rho", o.rho, "reaction coefficient (ex4.3 only)");
        s->add_option("--k", o.degree, "polynomial degree");
        s->add_option("--N", o.cells, "number of cells");
        s->add_option("--a", o.a, "left end (ex4.3 only)");
        s->add_option("--b", o.b, "right end (ex4.3 only)");
        s->add_option("--T", o.final_time, "final time");
        s->add_option("--M", o.steps, "number of time steps");
        s->add_option("--tau", raw.tau, "time step (alternative to --M)");
        add_common_scheme(s, raw, o.seed, o.quad_order);
        s->add_option("--samples", o.samples, "points per cell in the solution CSV");
        s->add_option("--out", o.out, "solution CSV (x,u)");
        s->add_option("--mesh-out", o.mesh_out, "mesh interfaces CSV");
        s->add_option("--errors-every", o.errors_every, "also report errors at every n-th time level");
        s->add_option("--errors-out", o.errors_out, "CSV for --errors-every (default: stdout)");
        b.subs["solve"] = s;
    }
    {
        auto* s = app.add_subcommand("space-order", "spatial convergence study at fixed M");
        auto& o = c.space;
        config_opt(s);
        s->add_option("--problem", o.problem, "ex4.1 | ex4.2");
        s->add_option("--alpha", o.alpha, "fractional order in (0, 1)");
        s->add_option("--gamma", o.gamma, "tempering parameter >= 0");
        s->add_option("--delta", o.delta, "flux weight, != 1/2");
        s->add_option("--k", o.degree, "polynomial degree");
        s->add_option("--N", raw.cells, "comma-separated cell counts");
        s->add_option("--T", o.final_time, "final time");
        s->add_option("--M", o.steps, "number of time steps");
        s->add_option("--tau", raw.tau, "time step (alternative to --M)");
        s->add_option("--linf-samples", o.linf_samples, "extra equispaced points per cell for the max error");
        add_common_scheme(s, raw, o.seed, o.quad_order);
        study_out(s);
        b.subs["space-order"] = s;
    }
    {
        auto* s = app.add_subcommand("time-order", "temporal convergence study at fixed N");
        auto& o = c.time;
        config_opt(s);
        s->add_option("--problem", o.problem, "ex4.1 | ex4.2");
        s->add_option("--alpha", o.alpha, "fractional order in (0, 1)");
        s->add_option("--gamma", o.gamma, "tempering parameter >= 0");
        s->add_option("--delta", o.delta, "flux weight, != 1/2");
        s->add_option("--k", o.degree, "polynomial degree");
        s->add_option("--N", o.cells, "number of cells");
        s->add_option("--T", o.final_time, "final time");
        s->add_option("--tau", raw.taus, "comma-separated decreasing time steps");
        s->add_option("--linf-samples", o.linf_samples, "extra equispaced points per cell for the max error");
        add_common_scheme(s, raw, o.seed, o.quad_order);
        study_out(s);
        b.subs["time-order"] = s;
    }
    {
        auto* s = app.add_subcommand("stability", "f = 0 runs from random data; checks ||u^n|| <= ||u^0||");
        auto& o = c.stability;
        config_opt(s);
        s->add_option("--alpha", raw.alphas, "comma-separated alphas");
        s->add_option("--gamma", raw.gammas, "comma-separated gammas");
        s->add_option("--delta", raw.deltas, "comma-separated deltas");
        s->add_option("--tau", raw.taus, "comma-separated time steps");
        s->add_option("--k", raw.degrees, "comma-separated degrees");
        s->add_option("--rho", o.rho, "reaction coefficient >= 0");
        s->add_option("--N", o.cells, "number of cells");
        s->add_option("--steps", o.steps, "time steps per case");
        s->add_option("--seed", o.seed, "seed of the random initial data");
        s->add_option("--out", c.out, "CSV output path (default: CSV on stdout)");
        b.subs["stability"] = s;
    }
    {
        auto* s = app.add_subcommand("demo", "Gaussian pulse snapshots for plotting");
        auto& o = c.demo;
        config_opt(s);
        s->add_option("--alpha", o.alpha, "fractional order in (0, 1)");
        s->add_option("--gamma", o.gamma, "tempering parameter >= 0");
        s->add_option("--delta", o.delta, "flux weight, != 1/2");
        s->add_option("--rho", o.rho, "reaction coefficient >= 0");
        s->add_option("--k", o.degree, "polynomial degree");
        s->add_option("--tau", o.tau, "time step");
        s->add_option("--h", o.h, "cell size; (b - a) / h must be an integer");
        s->add_option("--T", o.final_time, "final time");
        s->add_option("--a", o.a, "left end");
        s->add_option("--b", o.b, "right end");
        s->add_option("--times", raw.times, "comma-separated snapshot times");
        s->add_option("--samples", o.samples, "points per cell in each snapshot");
        s->add_option("--out-dir", o.out_dir, "directory for the snapshot files");
        s->add_option("--prefix", o.prefix, "snapshot file prefix");
        b.subs["demo"] = s;
    }
    return b;
}

bool given(const CLI::App* s, const std::string& name) {
    const auto* opt = s->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

void validate_solve(CliConfig& c, const RawArgs& raw, const CLI::App* s) {
    auto& o = c.solve;
    check_problem(o.problem);
    check_alpha(o.alpha);
    check_gamma(o.gamma);
    check_delta_key(o.delta);
    check_degree(o.degree);
    check_cells("N", o.cells);
    check_positive("T", o.final_time);
    const bool pulse = o.problem == "ex4.3";
    if (!pulse) {
        for (const char* key : {"a", "b", "rho"}) {
            if (given(s, std::string("--") + key)) {
                throw UsageError(key, "only applies to ex4.3; " + o.problem + " fixes its own value");
            }
        }
        o.a = 0.0;
        o.b = 1.0;
    } else if (!(o.a < o.b)) {
        throw UsageError("b", "need a < b");
    }
    if (o.rho && !(*o.rho >= 0.0)) throw UsageError("rho", "must be >= 0");
    if (given(s, "--tau")) {
        if (given(s, "--M")) throw UsageError("tau", "give either --M or --tau, not both");
        o.steps = steps_from("tau", o.final_time, raw.tau);
    }
    if (o.steps < 1) throw UsageError("M", "need at least one time step");
    o.mesh = kMeshKinds.at(raw.mesh);
    o.initial = kInitialModes.at(raw.initial);
    if (o.quad_order < 0 || o.quad_order > 32) throw UsageError("quad", "must lie in [0, 32]");
    if (o.samples < 2) throw UsageError("samples", "need at least 2 points per cell");
    if (o.errors_every < 0) throw UsageError("errors-every", "must be >= 0");
    if (o.errors_every > 0 && pulse) throw UsageError("errors-every", "ex4.3 has no exact solution");
    check_output_path("out", o.out);
    check_output_path("mesh-out", o.mesh_out);
    check_output_path("errors-out", o.errors_out);
}

void validate_space(CliConfig& c, const RawArgs& raw, const CLI::App* s) {
    auto& o = c.space;
    check_problem(o.problem);
    if (o.problem == "ex4.3") throw UsageError("problem", "ex4.3 has no exact solution to measure errors against");
    check_alpha(o.alpha);
    check_gamma(o.gamma);
    check_delta_key(o.delta);
    check_degree(o.degree);
    check_positive("T", o.final_time);
    if (!raw.cells.empty()) o.cells = int_list("N", raw.cells);
    for (int n : o.cells) check_cells("N", n);
    if (given(s, "--tau")) {
        if (given(s, "--M")) throw UsageError("tau", "give either --M or --tau, not both");
        o.steps = steps_from("tau", o.final_time, raw.tau);
    }
    if (o.steps < 1) throw UsageError("M", "need at least one time step");
    o.mesh_kind = kMeshKinds.at(raw.mesh);
    o.initial = kInitialModes.at(raw.initial);
    if (o.quad_order < 0 || o.quad_order > 32) throw UsageError("quad", "must lie in [0, 32]");
    if (o.linf_samples < 0) throw UsageError("linf-samples", "must be >= 0");
    check_output_path("out", c.out);
}

void validate_time(CliConfig& c, const RawArgs& raw) {
    auto& o = c.time;
    check_problem(o.problem);
    if (o.problem == "ex4.3") throw UsageError("problem", "ex4.3 has no exact solution to measure errors against");
    check_alpha(o.alpha);
    check_gamma(o.gamma);
    check_delta_key(o.delta);
    check_degree(o.degree);
    check_cells("N", o.cells);
    check_positive("T", o.final_time);
    if (!raw.taus.empty()) o.taus = double_list("tau", raw.taus);
    for (std::size_t i = 0; i < o.taus.size(); ++i) {
        steps_from("tau", o.final_time, o.taus[i]);
        if (i > 0 && !(o.taus[i] < o.taus[i - 1])) throw UsageError("tau", "time steps must decrease");
    }
    o.mesh_kind = kMeshKinds.at(raw.mesh);
    o.initial = kInitialModes.at(raw.initial);
    if (o.quad_order < 0 || o.quad_order > 32) throw UsageError("quad", "must lie in [0, 32]");
    if (o.linf_samples < 0) throw UsageError("linf-samples", "must be >= 0");
    check_output_path("out", c.out);
}

void validate_stability(CliConfig& c, const RawArgs& raw) {
    auto& o = c.stability;
    if (!raw.alphas.empty()) o.alphas = double_list("alpha", raw.alphas);
    if (!raw.gammas.empty()) o.gammas = double_list("gamma", raw.gammas);
    if (!raw.deltas.empty()) o.deltas = double_list("delta", raw.deltas);
    if (!raw.taus.empty()) o.taus = double_list("tau", raw.taus);
    if (!raw.degrees.empty()) o.degrees = int_list("k", raw.degrees);
    for (double a : o.alphas) check_alpha(a);
    for (double g : o.gammas) check_gamma(g);
    for (double d : o.deltas) check_delta_key(d);
    for (double t : o.taus) check_positive("tau", t);
    for (int k : o.degrees) check_degree(k);
    if (!(o.rho >= 0.0)) throw UsageError("rho", "must be >= 0");
    check_cells("N", o.cells);
    if (o.steps < 1) throw UsageError("steps", "need at least one time step");
    check_output_path("out", c.out);
}

void validate_demo(CliConfig& c, const RawArgs& raw) {
    auto& o = c.demo;
    check_alpha(o.alpha);
    check_gamma(o.gamma);
    check_delta_key(o.delta);
    check_degree(o.degree);
    if (!(o.rho >= 0.0)) throw UsageError("rho", "must be >= 0");
    check_positive("T", o.final_time);
    check_positive("h", o.h);
    if (!(o.a < o.b)) throw UsageError("b", "need a < b");
    const double cells = (o.b - o.a) / o.h;
    if (std::abs(cells - std::round(cells)) > 1e-9 * cells) {
        throw UsageError("h", "(b - a) / h must be an integer, got " + fmt17(cells));
    }
    o.cells = static_cast<int>(std::round(cells));
    check_cells("h", o.cells);
    o.steps = steps_from("tau", o.final_time, o.tau);
    if (!raw.times.empty()) o.times = double_list("times", raw.times);
    o.snapshot_steps.clear();
    for (double t : o.times) {
        if (t < 0.0 || t > o.final_time * (1.0 + 1e-12)) {
            throw UsageError("times", "snapshot time " + fmt17(t) + " is outside [0, T]");
        }
        const double n = t / o.tau;
        if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
            throw UsageError("times", "snapshot time " + fmt17(t) + " is not a multiple of tau");
        }
        o.snapshot_steps.push_back(static_cast<int>(std::round(n)));
    }
    if (o.samples < 2) throw UsageError("samples", "need at least 2 points per cell");
    if (o.prefix.empty() || o.prefix.find('/') != std::string::npos) {
        throw UsageError("prefix", "must be a plain file name prefix");
    }
    if (!std::filesystem::is_directory(o.out_dir)) {
        throw UsageError("out-dir", "directory '" + o.out_dir + "' does not exist");
    }
}

// --config path or --config=path after the subcommand; empty when absent.
std::string find_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("config", "missing file name");
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    return path;
}

std::string flat_help(const CLI::App& app) {
    return app.help("", CLI::AppFormatMode::Normal);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("config", "cannot read '" + path.string() + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config", path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw UsageError("config", path.string() + ":" + std::to_string(lineno) + ": empty key");
        out.emplace_back(key, value);
    }
    return out;
}

std::string usage() {
    CliConfig c;
    RawArgs raw;
    return flat_help(*build_app(c, raw).app);
}

CliConfig parse_args(const std::vector<std::string>& args) {
    CliConfig c;
    RawArgs raw;
    Built built = build_app(c, raw);
    CLI::App& app = *built.app;

    if (args.empty()) throw UsageError("", "missing subcommand");
    if (args[0] == "--help" || args[0] == "-h" || args[0] == "--help-all") throw HelpRequested{flat_help(app)};
    const auto sub_it = built.subs.find(args[0]);
    if (sub_it == built.subs.end()) throw UsageError("", "unknown subcommand '" + args[0] + "'");
    CLI::App* sub = sub_it->second;

    std::vector<std::string> tokens{args[0]};
    c.config_path = find_config(args);
    if (!c.config_path.empty()) {
        for (const auto& [key, value] : read_config_file(c.config_path)) {
            if (key == "config" || key == "help" || sub->get_option_no_throw("--" + key) == nullptr) {
                throw UsageError(key, "unknown key in config file '" + c.config_path + "' for " + args[0]);
            }
            tokens.push_back("--" + key + "=" + value);
        }
    }
    tokens.insert(tokens.end(), args.begin() + 1, args.end());

    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{sub->help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw UsageError("", e.what());
    }

    if (args[0] == "solve") {
        c.command = Command::solve;
        validate_solve(c, raw, sub);
    } else if (args[0] == "space-order") {
        c.command = Command::space_order;
        validate_space(c, raw, sub);
    } else if (args[0] == "time-order") {
        c.command = Command::time_order;
        validate_time(c, raw);
    } else if (args[0] == "stability") {
        c.command = Command::stability;
        validate_stability(c, raw);
    } else {
        c.command = Command::demo;
        validate_demo(c, raw);
    }
    return c;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
}

int emit_study(const CliConfig& c, const StudyResult& r, std::ostream& out, std::ostream& err) {
    std::ostringstream csv;
    emit_csv(r, csv, c.timing);
    if (c.out.empty()) {
        out << csv.str();
        if (c.table) print_table(r, err);
    } else {
        write_file(c.out, csv.str());
        print_table(r, out);
    }
    if (r.partial) {
        err << "error: " << r.failure << '\n';
        return 1;
    }
    if (r.degenerate) err << "warning: all errors are zero; orders are undefined\n";
    return 0;
}

int run_solve(const CliConfig& c, std::ostream& out, std::ostream& err) {
    const auto& o = c.solve;
    Problem problem = make_problem(o.problem, o.gamma, o.alpha, o.a, o.b);
    if (o.rho) problem.rho = *o.rho;
    for (const auto& w : problem.warnings) err << "warning: " << w << '\n';

    SchemeConfig s;
    s.alpha = o.alpha;
    s.gamma = o.gamma;
    s.rho = problem.rho;
    s.delta = o.delta;
    s.degree = o.degree;
    s.mesh = MeshSpec{o.mesh, problem.a, problem.b, o.cells, o.seed, 0.05};
    s.steps = o.steps;
    s.final_time = o.final_time;
    s.initial = o.initial;
    s.quad_order = o.quad_order;

    std::ostringstream history;
    if (o.errors_every > 0) history << "t,l2_error,linf_error\n";
    const auto observer = [&](const Solver& solver) {
        const int n = solver.step_index();
        if (o.errors_every <= 0 || (n % o.errors_every != 0 && n != o.steps)) return;
        const double t = solver.time();
        const auto e = error_norms(
            solver.u(), [&problem, t](double x) { return problem.exact(x, t); }, s.effective_quad_order());
        history << fmt17(t) << ',' << fmt17(e.l2) << ',' << fmt17(e.linf) << '\n';
    };
    const SolveResult result = solve_to_final(s, problem, observer);

    out << "problem=" << problem.label << " alpha=" << fmt17(o.alpha) << " gamma=" << fmt17(o.gamma)
        << " rho=" << fmt17(problem.rho) << " delta=" << fmt17(o.delta) << " k=" << o.degree << " N=" << o.cells
        << " M=" << o.steps << " T=" << fmt17(o.final_time) << '\n';
    if (problem.has_exact()) {
        const double T = o.final_time;
        const auto e = error_norms(
            result.u, [&problem, T](double x) { return problem.exact(x, T); }, s.effective_quad_order());
        char buf[128];
        std::snprintf(buf, sizeof buf, "l2_error=%.15E linf_error=%.15E\n", e.l2, e.linf);
        out << buf;
    }
    const auto& d = result.diagnostics;
    out << "norm_u0=" << fmt17(d.norms.front()) << " norm_uM=" << fmt17(d.norms.back())
        << " max_backward_error=" << fmt17(d.max_backward_error)
        << " max_relative_residual=" << fmt17(d.max_relative_residual) << '\n';
    if (c.timing) out << "wall_time_s=" << fmt17(d.wall_seconds) << '\n';

    if (!o.out.empty()) {
        std::ostringstream sol;
        write_dg_csv(result.u, o.samples, sol);
        write_file(o.out, sol.str());
    }
    if (!o.mesh_out.empty()) {
        std::ostringstream m;
        write_mesh_csv(result.u.mesh(), m);
        write_file(o.mesh_out, m.str());
    }
    if (o.errors_every > 0) {
        if (o.errors_out.empty()) {
            out << history.str();
        } else {
            write_file(o.errors_out, history.str());
        }
    }
    return 0;
}

int run_stability(const CliConfig& c, std::ostream& out, std::ostream& err) {
    const StabilityReport report = stability_study(c.stability);
    std::ostringstream csv;
    emit_stability_csv(report, csv);
    if (c.out.empty()) {
        out << csv.str();
    } else {
        write_file(c.out, csv.str());
    }
    std::size_t failed = 0;
    for (const auto& cs : report.cases) {
        if (!cs.passed) {
            ++failed;
            err << "fail: alpha=" << cs.alpha << " gamma=" << cs.gamma << " delta=" << cs.delta << " tau=" << cs.tau
                << " k=" << cs.degree << " ratio=" << fmt17(cs.max_ratio)
                << (cs.error.empty() ? "" : " (" + cs.error + ")") << '\n';
        }
    }
    (c.out.empty() ? err : out) << "cases=" << report.cases.size() << " failed=" << failed
                                << " worst_ratio=" << fmt17(report.worst_ratio) << '\n';
    return report.passed ? 0 : 1;
}

std::string snapshot_name(const DemoOptions& o, double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "_t%g.csv", t);
    return (std::filesystem::path(o.out_dir) / (o.prefix + buf)).string();
}

int run_demo(const CliConfig& c, std::ostream& out, std::ostream& err) {
    const auto& o = c.demo;
    Problem problem = gaussian_pulse_problem(o.gamma, o.alpha, o.a, o.b);
    problem.rho = o.rho;
    for (const auto& w : problem.warnings) err << "warning: " << w << '\n';

    SchemeConfig s;
    s.alpha = o.alpha;
    s.gamma = o.gamma;
    s.rho = o.rho;
    s.delta = o.delta;
    s.degree = o.degree;
    s.mesh = MeshSpec{MeshKind::uniform, o.a, o.b, o.cells, 1, 0.05};
    s.steps = o.steps;
    s.final_time = o.final_time;

    std::map<int, std::string> snapshots;
    const auto observer = [&](const Solver& solver) {
        const int n = solver.step_index();
        if (std::find(o.snapshot_steps.begin(), o.snapshot_steps.end(), n) == o.snapshot_steps.end()) return;
        const DGFunction u = solver.u();
        for (double v : u.coeffs()) {
            if (!std::isfinite(v)) throw NumericalError("non-finite coefficient at step " + std::to_string(n));
        }
        std::ostringstream csv;
        write_dg_csv(u, o.samples, csv);
        snapshots[n] = csv.str();
    };
    solve_to_final(s, problem, observer);
    for (std::size_t i = 0; i < o.times.size(); ++i) {
        const std::string path = snapshot_name(o, o.times[i]);
        write_file(path, snapshots.at(o.snapshot_steps[i]));
        char t[32];
        std::snprintf(t, sizeof t, "%g", o.times[i]);
        out << "t=" << t << " -> " << path << '\n';
    }
    return 0;
}

}  // namespace

int run(const CliConfig& c, std::ostream& out, std::ostream& err) {
    try {
        switch (c.command) {
            case Command::solve:
                return run_solve(c, out, err);
            case Command::space_order:
                return emit_study(c, spatial_study(c.space), out, err);
            case Command::time_order:
                return emit_study(c, temporal_study(c.time), out, err);
            case Command::stability:
                return run_stability(c, out, err);
            case Command::demo:
                return run_demo(c, out, err);
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig config;
    try {
        config = parse_args(args);
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << usage();
        return 2;
    }
    return run(config, out, err);
}

}  // namespace tldg::cli
