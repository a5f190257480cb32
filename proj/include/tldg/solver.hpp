#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "tldg/dg_function.hpp"
#include "tldg/flux_operator.hpp"
#include "tldg/kernels.hpp"
#include "tldg/linear_system.hpp"
#include "tldg/mesh.hpp"
#include "tldg/problems.hpp"
#include "tldg/projection.hpp"
#include "tldg/quadrature.hpp"
#include "tldg/tempered_time.hpp"

namespace tldg {

enum class MeshKind { uniform, perturbed };
enum class InitialMode { gauss_radau, l2 };

struct MeshSpec {
    MeshKind kind = MeshKind::uniform;
    double a = 0.0;
    double b = 1.0;
    int cells = 10;
    std::uint64_t seed = 1;
    double shift_fraction = 0.05;

    Mesh1D build() const;
};

struct SchemeConfig {
    double alpha = 0.5;
    double gamma = 0.0;
    double rho = 0.0;
    double delta = 0.1;
    int degree = 1;
    MeshSpec mesh;
    int steps = 100;          ///< M
    double final_time = 1.0;  ///< T; tau = T / M
    InitialMode initial = InitialMode::gauss_radau;
    int quad_order = 0;       ///< <= 0 selects max(k+2, 6)
    /// Assert ||u^n|| <= ||u^0|| (1 + 1e-12) after every step. Only
    /// meaningful for f = 0.
    bool check_stability = false;
    Exec exec = Exec::parallel;
    Eigen::Index dense_limit = SpdSystem::kDefaultDenseLimit;

    double tau() const { return final_time / steps; }
    int effective_quad_order() const { return quad_order > 0 ? quad_order : default_quad_order(degree); }
    /// Throws std::invalid_argument on an out-of-range field.
    void validate() const;
};

/// Fully discrete LDG time stepper. Eliminating p = -M^{-1} A_delta u from
/// the coupled system leaves one SPD solve per step with
///   S = (rho + mu) M + A_delta^T M^{-1} A_delta,
/// factored once at setup and reused for every step.
class Solver {
public:
    /// Setup with u^0 = P_delta u0 (or the L2 projection, per config).
    Solver(const SchemeConfig& config, const std::function<double(double)>& u0);
    /// Setup with explicit initial coefficients.
    Solver(const SchemeConfig& config, std::vector<double> u0_coeffs);
    /// Setup on a caller-provided mesh (config.mesh is ignored).
    Solver(const SchemeConfig& config, std::shared_ptr<const Mesh1D> mesh, std::vector<double> u0_coeffs);

    /// Advance n -> n+1 with forcing f(x, t_{n+1}); an empty function means
    /// f = 0. Throws NumericalError if the backward error of the solve
    /// (see SolveReport) exceeds 1e-12 or, in stability mode, if the norm
    /// bound is violated.
    void step(const SpaceTimeFn& forcing = {});

    int step_index() const { return n_; }
    double time() const { return n_ * weights_.tau; }
    const SchemeConfig& config() const { return config_; }
    const std::shared_ptr<const Mesh1D>& mesh() const { return mesh_; }
    std::size_t dofs() const { return ndof_; }

    /// u^n for 0 <= n <= step_index().
    DGFunction u(int n) const;
    DGFunction u() const { return u(n_); }
    DGFunction p() const;
    std::span<const double> u_coeffs(int n) const;
    std::span<const double> p_coeffs() const { return p_; }

    const TemperedWeights& weights() const { return weights_; }
    const MassMatrix& mass() const { return mass_; }
    const FluxOperator& flux() const { return flux_; }          ///< A_delta
    const FluxOperator& flux_dual() const { return flux_dual_; }  ///< A_{1-delta}
    const SpdSystem& system() const { return *system_; }

    /// ||u^0||, ..., ||u^n||
    const std::vector<double>& norms() const { return norms_; }
    double max_backward_error() const { return max_backward_error_; }
    double max_relative_residual() const { return max_relative_residual_; }
    double setup_seconds() const { return setup_seconds_; }
    double step_seconds() const { return step_seconds_; }

private:
    void initialize(std::vector<double> u0_coeffs);
    void update_p();

    SchemeConfig config_;
    std::shared_ptr<const Mesh1D> mesh_;
    std::size_t ndof_ = 0;
    TemperedWeights weights_;
    LegendreBasis basis_;
    MassMatrix mass_;
    FluxOperator flux_;
    FluxOperator flux_dual_;
    std::unique_ptr<SpdSystem> system_;

    int n_ = 0;
    std::vector<double> history_;  ///< u^0..u^n, row-major, ndof per row
    std::vector<double> p_;
    std::vector<double> norms_;
    std::vector<double> scratch_hist_;
    std::vector<double> scratch_load_;
    std::vector<double> scratch_rhs_;
    double max_backward_error_ = 0.0;
    double max_relative_residual_ = 0.0;
    double setup_seconds_ = 0.0;
    double step_seconds_ = 0.0;
};

struct SolveDiagnostics {
    std::vector<double> norms;  ///< ||u^n||, n = 0..M
    double setup_seconds = 0.0;
    double step_seconds = 0.0;
    double wall_seconds = 0.0;
    double max_backward_error = 0.0;
    double max_relative_residual = 0.0;
    double min_pivot = 0.0;
    bool dense_factorization = false;
};

struct SolveResult {
    DGFunction u;
    DGFunction p;
    SolveDiagnostics diagnostics;
};

/// setup + M steps. The problem's domain, rho, gamma and alpha must match the
/// configuration. `observer`, if given, sees the solver after setup and
/// after every step.
SolveResult solve_to_final(const SchemeConfig& config, const Problem& problem,
                           const std::function<void(const Solver&)>& observer = {});

}  // namespace tldg
