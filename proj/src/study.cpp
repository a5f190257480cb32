#include "tldg/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "tldg/errors.hpp"

namespace tldg {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* mesh_name(MeshKind k) { return k == MeshKind::perturbed ? "perturbed" : "uniform"; }
const char* init_name(InitialMode m) { return m == InitialMode::l2 ? "l2" : "gauss_radau"; }

struct RowOutcome {
    StudyRow row;
    std::string error;
};

// Runs `count` independent solves, possibly in parallel, and assembles them
// in index order. A failure truncates the result at the first failing row.
template <typename RowFn>
void run_rows(int count, RowFn&& row_fn, StudyResult& result) {
    std::vector<RowOutcome> outcomes(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(configured_threads())
    for (int i = 0; i < count; ++i) {
        try {
            outcomes[i].row = row_fn(i);
        } catch (const std::exception& e) {
            outcomes[i].error = e.what();
        }
    }
    for (int i = 0; i < count; ++i) {
        if (!outcomes[i].error.empty()) {
            result.partial = true;
            result.failure = "row " + std::to_string(i) + ": " + outcomes[i].error;
            break;
        }
        result.rows.push_back(outcomes[i].row);
    }
    compute_orders(result);
    result.metadata.emplace_back("degenerate", result.degenerate ? "true" : "false");
    result.metadata.emplace_back("partial", result.partial ? "true" : "false");
}

StudyRow solve_row(const SchemeConfig& cfg, const Problem& problem, double param, double ref_size, int linf_samples) {
    const auto start = std::chrono::steady_clock::now();
    SolveResult res = solve_to_final(cfg, problem);
    const double t_final = cfg.final_time;
    const auto& exact = problem.exact;
    const ErrorNorms err = error_norms(res.u, [&exact, t_final](double x) { return exact(x, t_final); },
                                       cfg.effective_quad_order(), linf_samples);
    StudyRow row;
    row.param = param;
    row.ref_size = ref_size;
    row.l2_error = err.l2;
    row.linf_error = err.linf;
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

Problem load_problem(const std::string& label, double gamma, double alpha) {
    Problem p = make_problem(label, gamma, alpha);
    if (!p.has_exact()) throw std::invalid_argument("convergence studies need a problem with an exact solution");
    return p;
}

}  // namespace

const std::string* StudyResult::meta(const std::string& key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) return &v;
    }
    return nullptr;
}

std::optional<double> observed_order(double e_prev, double e, double r_prev, double r) {
    if (!(e_prev > 0.0) || !(e > 0.0) || !(r_prev > 0.0) || !(r > 0.0) || r_prev == r) return std::nullopt;
    return std::log(e_prev / e) / std::log(r_prev / r);
}

void compute_orders(StudyResult& result) {
    bool any_positive = false;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        StudyRow& row = result.rows[i];
        any_positive = any_positive || row.l2_error > 0.0 || row.linf_error > 0.0;
        row.l2_order.reset();
        row.linf_order.reset();
        if (i == 0) continue;
        const StudyRow& prev = result.rows[i - 1];
        row.l2_order = observed_order(prev.l2_error, row.l2_error, prev.ref_size, row.ref_size);
        row.linf_order = observed_order(prev.linf_error, row.linf_error, prev.ref_size, row.ref_size);
    }
    result.degenerate = !result.rows.empty() && !any_positive;
}

int steps_for(double final_time, double tau) {
    if (!(tau > 0.0) || !(final_time > 0.0)) throw std::invalid_argument("tau and T must be positive");
    const double ratio = final_time / tau;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
        throw std::invalid_argument("T/tau = " + fmt17(ratio) + " is not an integer (tau = " + fmt17(tau) + ")");
    }
    return static_cast<int>(rounded);
}

StudyResult spatial_study(const SpatialStudyParams& params) {
    return spatial_study(load_problem(params.problem, params.gamma, params.alpha), params);
}

StudyResult spatial_study(const Problem& problem, const SpatialStudyParams& params) {
    if (!problem.has_exact()) throw std::invalid_argument("convergence studies need a problem with an exact solution");
    for (std::size_t i = 1; i < params.cells.size(); ++i) {
        if (params.cells[i] <= params.cells[i - 1]) throw std::invalid_argument("spatial_study: N list must increase");
    }
    SchemeConfig base;
    base.alpha = params.alpha;
    base.gamma = params.gamma;
    base.rho = problem.rho;
    base.delta = params.delta;
    base.degree = params.degree;
    base.steps = params.steps;
    base.final_time = params.final_time;
    base.initial = params.initial;
    base.quad_order = params.quad_order;
    base.mesh.kind = params.mesh_kind;
    base.mesh.a = problem.a;
    base.mesh.b = problem.b;
    base.mesh.seed = params.seed;
    // validate everything before any solve starts
    for (int n : params.cells) {
        SchemeConfig c = base;
        c.mesh.cells = n;
        c.validate();
    }

    StudyResult result;
    result.metadata = {{"study", "spatial"},
                       {"problem", problem.label},
                       {"alpha", fmt17(params.alpha)},
                       {"gamma", fmt17(params.gamma)},
                       {"rho", fmt17(problem.rho)},
                       {"delta", fmt17(params.delta)},
                       {"k", std::to_string(params.degree)},
                       {"M", std::to_string(params.steps)},
                       {"T", fmt17(params.final_time)},
                       {"mesh", mesh_name(params.mesh_kind)},
                       {"seed", std::to_string(params.seed)},
                       {"initial", init_name(params.initial)},
                       {"quad_order", std::to_string(base.effective_quad_order())}};
    run_rows(
        static_cast<int>(params.cells.size()),
        [&](int i) {
            SchemeConfig c = base;
            c.mesh.cells = params.cells[i];
            // serial kernels inside concurrently running rows
            c.exec = omp_in_parallel() ? Exec::serial : Exec::parallel;
            const double hmax = c.mesh.build().h_max();
            return solve_row(c, problem, params.cells[i], hmax, params.linf_samples);
        },
        result);
    return result;
}

StudyResult temporal_study(const TemporalStudyParams& params) {
    const Problem problem = load_problem(params.problem, params.gamma, params.alpha);
    for (std::size_t i = 1; i < params.taus.size(); ++i) {
        if (params.taus[i] >= params.taus[i - 1]) throw std::invalid_argument("temporal_study: tau list must decrease");
    }
    SchemeConfig base;
    base.alpha = params.alpha;
    base.gamma = params.gamma;
    base.rho = problem.rho;
    base.delta = params.delta;
    base.degree = params.degree;
    base.final_time = params.final_time;
    base.initial = params.initial;
    base.quad_order = params.quad_order;
    base.mesh.kind = params.mesh_kind;
    base.mesh.a = problem.a;
    base.mesh.b = problem.b;
    base.mesh.cells = params.cells;
    base.mesh.seed = params.seed;
    std::vector<int> steps;
    for (double tau : params.taus) {
        steps.push_back(steps_for(params.final_time, tau));
        SchemeConfig c = base;
        c.steps = steps.back();
        c.validate();
    }

    StudyResult result;
    result.metadata = {{"study", "temporal"},
                       {"problem", problem.label},
                       {"alpha", fmt17(params.alpha)},
                       {"gamma", fmt17(params.gamma)},
                       {"rho", fmt17(problem.rho)},
                       {"delta", fmt17(params.delta)},
                       {"k", std::to_string(params.degree)},
                       {"N", std::to_string(params.cells)},
                       {"T", fmt17(params.final_time)},
                       {"mesh", mesh_name(params.mesh_kind)},
                       {"seed", std::to_string(params.seed)},
                       {"initial", init_name(params.initial)},
                       {"quad_order", std::to_string(base.effective_quad_order())}};
    run_rows(
        static_cast<int>(params.taus.size()),
        [&](int i) {
            SchemeConfig c = base;
            c.steps = steps[i];
            c.exec = omp_in_parallel() ? Exec::serial : Exec::parallel;
            return solve_row(c, problem, params.taus[i], params.taus[i], params.linf_samples);
        },
        result);
    return result;
}

std::vector<double> random_coefficients(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(count);
    for (double& v : out) v = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    return out;
}

StabilityReport stability_study(const StabilityParams& params) {
    std::vector<StabilityCase> cases;
    for (double alpha : params.alphas) {
        for (double gamma : params.gammas) {
            for (double delta : params.deltas) {
                for (double tau : params.taus) {
                    for (int k : params.degrees) {
                        StabilityCase c;
                        c.alpha = alpha;
                        c.gamma = gamma;
                        c.delta = delta;
                        c.tau = tau;
                        c.degree = k;
                        c.steps = params.steps;
                        cases.push_back(c);
                    }
                }
            }
        }
    }
    // validate up front
    for (const StabilityCase& c : cases) {
        SchemeConfig cfg;
        cfg.alpha = c.alpha;
        cfg.gamma = c.gamma;
        cfg.rho = params.rho;
        cfg.delta = c.delta;
        cfg.degree = c.degree;
        cfg.steps = c.steps;
        cfg.final_time = c.steps * c.tau;
        cfg.mesh.cells = params.cells;
        cfg.validate();
    }

    const int count = static_cast<int>(cases.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(configured_threads())
    for (int i = 0; i < count; ++i) {
        StabilityCase& c = cases[i];
        try {
            SchemeConfig cfg;
            cfg.alpha = c.alpha;
            cfg.gamma = c.gamma;
            cfg.rho = params.rho;
            cfg.delta = c.delta;
            cfg.degree = c.degree;
            cfg.steps = c.steps;
            cfg.final_time = c.steps * c.tau;
            cfg.mesh.cells = params.cells;
            cfg.exec = Exec::serial;
            const std::size_t ndof = static_cast<std::size_t>(params.cells) * (c.degree + 1);
            std::vector<double> u0 = params.zero_initial ? std::vector<double>(ndof, 0.0)
                                                         : random_coefficients(ndof, params.seed);
            Solver solver(cfg, std::move(u0));
            for (int n = 0; n < cfg.steps; ++n) solver.step();
            const auto& norms = solver.norms();
            double worst = 0.0;
            if (norms.front() > 0.0) {
                for (double v : norms) worst = std::max(worst, v / norms.front());
            } else {
                for (double v : norms) worst = std::max(worst, v);  // stays 0 unless u^n leaves 0
            }
            c.max_ratio = worst;
            c.passed = worst <= 1.0 + 1e-12;
        } catch (const std::exception& e) {
            c.error = e.what();
            c.passed = false;
        }
    }
    StabilityReport report;
    report.cases = std::move(cases);
    for (const StabilityCase& c : report.cases) {
        report.worst_ratio = std::max(report.worst_ratio, c.max_ratio);
        report.passed = report.passed && c.passed;
    }
    return report;
}

void emit_csv(const StudyResult& result, std::ostream& os, bool include_timing) {
    for (const auto& [k, v] : result.metadata) os << "# " << k << '=' << v << '\n';
    if (result.partial) os << "# failure=" << result.failure << '\n';
    os << "param,l2_error,l2_order,linf_error,linf_order,wall_time_s\n";
    for (const StudyRow& r : result.rows) {
        os << fmt17(r.param) << ',' << fmt17(r.l2_error) << ',' << (r.l2_order ? fmt17(*r.l2_order) : "") << ','
           << fmt17(r.linf_error) << ',' << (r.linf_order ? fmt17(*r.linf_order) : "") << ','
           << fmt17(include_timing ? r.wall_time_s : 0.0) << '\n';
    }
}

void emit_csv(const StudyResult& result, const std::filesystem::path& path, bool include_timing) {
    std::ostringstream buf;
    emit_csv(result, buf, include_timing);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << buf.str();
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

StudyResult read_csv(std::istream& is) {
    StudyResult result;
    std::string line;
    bool header_seen = false;
    auto parse_opt = [](const std::string& s) -> std::optional<double> {
        if (s.empty()) return std::nullopt;
        return std::stod(s);
    };
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            const auto eq = body.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = body.substr(0, eq);
            const std::string value = body.substr(eq + 1);
            if (key == "failure") {
                result.failure = value;
                continue;
            }
            result.metadata.emplace_back(key, value);
            if (key == "degenerate") result.degenerate = (value == "true");
            if (key == "partial") result.partial = (value == "true");
            continue;
        }
        if (!header_seen) {
            if (line != "param,l2_error,l2_order,linf_error,linf_order,wall_time_s") {
                throw std::runtime_error("read_csv: unexpected header '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        if (fields.size() != 6) throw std::runtime_error("read_csv: expected 6 fields in '" + line + "'");
        StudyRow r;
        r.param = std::stod(fields[0]);
        r.l2_error = std::stod(fields[1]);
        r.l2_order = parse_opt(fields[2]);
        r.linf_error = std::stod(fields[3]);
        r.linf_order = parse_opt(fields[4]);
        r.wall_time_s = std::stod(fields[5]);
        result.rows.push_back(r);
    }
    if (!header_seen) throw std::runtime_error("read_csv: missing header");
    return result;
}

void print_table(const StudyResult& result, std::ostream& os) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%10s  %22s  %6s  %22s  %6s  %9s\n", "param", "L2-error", "order", "Linf-error",
                  "order", "time[s]");
    os << buf;
    auto order_str = [](const std::optional<double>& o) {
        char b[32];
        if (!o) return std::string("-");
        std::snprintf(b, sizeof b, "%.2f", *o);
        return std::string(b);
    };
    for (const StudyRow& r : result.rows) {
        std::snprintf(buf, sizeof buf, "%10g  %22.15E  %6s  %22.15E  %6s  %9.3f\n", r.param, r.l2_error,
                      order_str(r.l2_order).c_str(), r.linf_error, order_str(r.linf_order).c_str(), r.wall_time_s);
        os << buf;
    }
    if (result.degenerate) os << "note: all errors are zero; no order is computable\n";
    if (result.partial) os << "note: study aborted early: " << result.failure << '\n';
}

void emit_stability_csv(const StabilityReport& report, std::ostream& os) {
    os << "alpha,gamma,delta,tau,k,steps,max_ratio,pass\n";
    for (const StabilityCase& c : report.cases) {
        os << fmt17(c.alpha) << ',' << fmt17(c.gamma) << ',' << fmt17(c.delta) << ',' << fmt17(c.tau) << ','
           << c.degree << ',' << c.steps << ',' << fmt17(c.max_ratio) << ',' << (c.passed ? "true" : "false") << '\n';
    }
}

}  // namespace tldg
