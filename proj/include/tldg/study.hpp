#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tldg/problems.hpp"
#include "tldg/solver.hpp"

namespace tldg {

struct StudyRow {
    double param = 0.0;       ///< N (spatial) or tau (temporal)
    double ref_size = 0.0;    ///< h_max (spatial) or tau (temporal); not written to CSV
    double l2_error = 0.0;
    std::optional<double> l2_order;
    double linf_error = 0.0;
    std::optional<double> linf_order;
    double wall_time_s = 0.0;
};

struct StudyResult {
    std::vector<StudyRow> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
    /// All errors zero: no order can be computed.
    bool degenerate = false;
    /// A solve failed; `rows` holds the rows before the failing one.
    bool partial = false;
    std::string failure;

    const std::string* meta(const std::string& key) const;
};

/// Observed order log(e_prev/e) / log(r_prev/r); empty when either error is
/// not positive.
std::optional<double> observed_order(double e_prev, double e, double r_prev, double r);

/// Fills the order columns of `rows` from their errors and ref_size and
/// flags degenerate results.
void compute_orders(StudyResult& result);

struct SpatialStudyParams {
    std::string problem = "ex4.1";
    double alpha = 0.6;
    double gamma = 2.0;
    double delta = 0.3;
    int degree = 2;
    std::vector<int> cells = {5, 10, 20, 40};
    int steps = 1000;
    double final_time = 1.0;
    MeshKind mesh_kind = MeshKind::uniform;
    std::uint64_t seed = 1;
    InitialMode initial = InitialMode::gauss_radau;
    int quad_order = 0;
    int linf_samples = 8;
};

struct TemporalStudyParams {
    std::string problem = "ex4.1";
    double alpha = 0.5;
    double gamma = 2.0;
    double delta = 0.1;
    int degree = 2;
    int cells = 100;
    std::vector<double> taus = {0.04, 0.02, 0.01, 0.005};
    double final_time = 1.0;
    MeshKind mesh_kind = MeshKind::uniform;
    std::uint64_t seed = 1;
    InitialMode initial = InitialMode::gauss_radau;
    int quad_order = 0;
    int linf_samples = 8;
};

/// One solve per N at fixed M; errors at T. Orders use h_max ratios. Rows
/// run concurrently (see configured_threads) and are reported in input
/// order; results do not depend on the thread count.
StudyResult spatial_study(const SpatialStudyParams& params);
/// Same, on an explicit problem (its label replaces params.problem).
StudyResult spatial_study(const Problem& problem, const SpatialStudyParams& params);

/// One solve per tau at fixed N. Throws std::invalid_argument if T/tau is
/// not an integer for some tau.
StudyResult temporal_study(const TemporalStudyParams& params);

/// M = T/tau, requiring it to be an integer within 1e-9 relative.
int steps_for(double final_time, double tau);

struct StabilityParams {
    std::vector<double> alphas = {0.1, 0.5, 0.9};
    std::vector<double> gammas = {0.0, 2.0, 10.0};
    std::vector<double> deltas = {0.0, 0.1, 0.3, 0.9, 1.0};
    std::vector<double> taus = {0.001, 0.1, 10.0};
    std::vector<int> degrees = {0, 1, 2};
    double rho = 0.0;
    int cells = 16;
    int steps = 100;  ///< time steps per case; T = steps * tau
    std::uint64_t seed = 1;
    bool zero_initial = false;
};

struct StabilityCase {
    double alpha = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double tau = 0.0;
    int degree = 0;
    int steps = 0;
    double max_ratio = 0.0;  ///< max_n ||u^n|| / ||u^0|| (0 when u^0 = 0)
    bool passed = false;
    std::string error;
};

struct StabilityReport {
    std::vector<StabilityCase> cases;
    double worst_ratio = 0.0;
    bool passed = true;
};

/// f = 0 runs from seeded random coefficients on a uniform [0,1] mesh; a
/// case passes when max_n ||u^n|| / ||u^0|| <= 1 + 1e-12.
StabilityReport stability_study(const StabilityParams& params);

/// Seeded uniform [-1, 1) coefficients, same generator as perturbed_mesh.
std::vector<double> random_coefficients(std::size_t count, std::uint64_t seed);

/// `# key=value` metadata lines, then
/// param,l2_error,l2_order,linf_error,linf_order,wall_time_s
/// with 17 significant digits and empty order cells where undefined.
/// With include_timing = false the wall_time_s column is written as 0 so
/// that repeated runs produce byte-identical files.
void emit_csv(const StudyResult& result, std::ostream& os, bool include_timing = true);
void emit_csv(const StudyResult& result, const std::filesystem::path& path, bool include_timing = true);

/// Inverse of emit_csv (ref_size is not stored and stays 0).
StudyResult read_csv(std::istream& is);

/// Human-readable table, errors with 15 significant digits.
void print_table(const StudyResult& result, std::ostream& os);

/// alpha,gamma,delta,tau,k,steps,max_ratio,pass
void emit_stability_csv(const StabilityReport& report, std::ostream& os);

}  // namespace tldg
