#include "tldg/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "tldg/errors.hpp"

namespace tldg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

const SchemeConfig& validated(const SchemeConfig& c) {
    c.validate();
    return c;
}

constexpr double kSolveTolerance = 1e-12;
constexpr double kStabilitySlack = 1e-12;
constexpr double kAntisymmetryTolerance = 1e-13;

}  // namespace

Mesh1D MeshSpec::build() const {
    if (kind == MeshKind::perturbed) return perturbed_mesh(a, b, cells, seed, shift_fraction);
    return uniform_mesh(a, b, cells);
}

void SchemeConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be >= 0");
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be >= 0");
    check_delta(delta);
    if (degree < 0) throw std::invalid_argument("degree k must be >= 0");
    if (steps < 1) throw std::invalid_argument("number of time steps M must be >= 1");
    if (!(final_time > 0.0) || !std::isfinite(final_time)) throw std::invalid_argument("final time T must be > 0");
    if (mesh.cells < 2) throw std::invalid_argument("mesh needs N >= 2 cells");
    if (!(mesh.a < mesh.b)) throw std::invalid_argument("mesh needs a < b");
    if (quad_order > 32) throw std::invalid_argument("quadrature order must be <= 32");
}

Solver::Solver(const SchemeConfig& config, const std::function<double(double)>& u0)
    : Solver(config, std::make_shared<const Mesh1D>(validated(config).mesh.build()), std::vector<double>{}) {
    // delegated constructor left the state empty; project the initial data now
    const int q = config_.effective_quad_order();
    DGFunction init = config_.initial == InitialMode::gauss_radau
                          ? gauss_radau_project(u0, mesh_, config_.degree, config_.delta, q)
                          : l2_project(u0, mesh_, config_.degree, q);
    initialize({init.coeffs().begin(), init.coeffs().end()});
}

Solver::Solver(const SchemeConfig& config, std::vector<double> u0_coeffs)
    : Solver(config, std::make_shared<const Mesh1D>(validated(config).mesh.build()), std::move(u0_coeffs)) {}

Solver::Solver(const SchemeConfig& config, std::shared_ptr<const Mesh1D> mesh, std::vector<double> u0_coeffs)
    : config_(validated(config)),
      mesh_(std::move(mesh)),
      ndof_(static_cast<std::size_t>(mesh_->num_cells()) * (config.degree + 1)),
      weights_(build_weights(config.alpha, config.gamma, config.tau(), config.steps)),
      basis_(config.degree, gauss_legendre(config.effective_quad_order())),
      mass_(*mesh_, config.degree),
      flux_(mesh_, config.degree, config.delta),
      flux_dual_(mesh_, config.degree, 1.0 - config.delta) {
    const auto start = Clock::now();
    const Eigen::SparseMatrix<double> a = flux_.to_sparse();
    const Eigen::SparseMatrix<double> a_dual = flux_dual_.to_sparse();

    // A_delta^T = -A_{1-delta}
    const Eigen::SparseMatrix<double> pairing = Eigen::SparseMatrix<double>(a.transpose()) + a_dual;
    double worst = 0.0;
    for (Eigen::Index c = 0; c < pairing.outerSize(); ++c) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(pairing, c); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    if (worst > kAntisymmetryTolerance) {
        throw ConfigError("flux operators violate A_delta^T = -A_{1-delta} (max deviation " + sci(worst) + ")");
    }

    Eigen::VectorXd inv_mass(static_cast<Eigen::Index>(ndof_));
    for (std::size_t i = 0; i < ndof_; ++i) inv_mass[static_cast<Eigen::Index>(i)] = 1.0 / mass_.diagonal()[i];
    Eigen::SparseMatrix<double> s = Eigen::SparseMatrix<double>(a.transpose()) * inv_mass.asDiagonal() * a;
    const double shift = config_.rho + weights_.mu;
    for (std::size_t i = 0; i < ndof_; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        s.coeffRef(ii, ii) += shift * mass_.diagonal()[i];
    }
    s.makeCompressed();
    system_ = std::make_unique<SpdSystem>(s, config_.dense_limit);

    scratch_hist_.assign(ndof_, 0.0);
    scratch_load_.assign(ndof_, 0.0);
    scratch_rhs_.assign(ndof_, 0.0);
    p_.assign(ndof_, 0.0);
    setup_seconds_ = seconds_since(start);
    if (!u0_coeffs.empty()) initialize(std::move(u0_coeffs));
}

void Solver::initialize(std::vector<double> u0_coeffs) {
    if (u0_coeffs.size() != ndof_) {
        throw std::invalid_argument("Solver: expected " + std::to_string(ndof_) + " initial coefficients, got " +
                                    std::to_string(u0_coeffs.size()));
    }
    history_.clear();
    history_.reserve(ndof_ * (static_cast<std::size_t>(config_.steps) + 1));
    history_.insert(history_.end(), u0_coeffs.begin(), u0_coeffs.end());
    n_ = 0;
    norms_.assign(1, DGFunction(mesh_, config_.degree, std::move(u0_coeffs)).l2_norm());
    update_p();
}

void Solver::update_p() {
    const std::span<const double> un = u_coeffs(n_);
    flux_.apply(un, scratch_rhs_);
    mass_.apply_inverse(scratch_rhs_, p_);
    for (double& v : p_) v = -v;
}

std::span<const double> Solver::u_coeffs(int n) const {
    if (n < 0 || n > n_) throw std::out_of_range("Solver: level " + std::to_string(n) + " not available");
    return std::span<const double>(history_).subspan(static_cast<std::size_t>(n) * ndof_, ndof_);
}

DGFunction Solver::u(int n) const {
    const auto c = u_coeffs(n);
    return DGFunction(mesh_, config_.degree, std::vector<double>(c.begin(), c.end()));
}

DGFunction Solver::p() const { return DGFunction(mesh_, config_.degree, p_); }

void Solver::step(const SpaceTimeFn& forcing) {
    if (history_.empty()) throw std::logic_error("Solver::step: solver not initialized");
    if (n_ + 1 > config_.steps) {
        throw std::out_of_range("Solver::step: already at the final level M = " + std::to_string(config_.steps));
    }
    const auto start = Clock::now();
    const int next = n_ + 1;
    const double t_next = next * weights_.tau;

    // rhs = mu M (sum_l c_l u^l) + F^{n+1}
    const std::vector<double> coeffs = history_coefficients(weights_, next);
    kernels::weighted_row_sum(config_.exec, coeffs, history_, ndof_, scratch_hist_);
    mass_.apply(scratch_hist_, scratch_rhs_);
    for (double& v : scratch_rhs_) v *= weights_.mu;
    if (forcing) {
        const std::function<double(double)> f_at = [&forcing, t_next](double x) { return forcing(x, t_next); };
        kernels::assemble_load(config_.exec, *mesh_, basis_, f_at, scratch_load_);
        for (std::size_t i = 0; i < ndof_; ++i) scratch_rhs_[i] += scratch_load_[i];
    }

    const std::size_t offset = history_.size();
    history_.resize(offset + ndof_);
    const std::span<double> un(history_.data() + offset, ndof_);
    const SolveReport report = system_->solve(scratch_rhs_, un, kSolveTolerance);
    if (!(report.backward_error <= kSolveTolerance)) {
        history_.resize(offset);
        throw NumericalError("step " + std::to_string(next) + ": solve backward error " + sci(report.backward_error) +
                             " exceeds " + sci(kSolveTolerance) + " (relative residual " +
                             sci(report.relative_residual) + ", min pivot " + sci(system_->min_pivot()) + ")");
    }
    max_backward_error_ = std::max(max_backward_error_, report.backward_error);
    max_relative_residual_ = std::max(max_relative_residual_, report.relative_residual);
    n_ = next;
    update_p();

    double norm2 = 0.0;
    for (std::size_t i = 0; i < ndof_; ++i) norm2 += un[i] * un[i] * mass_.diagonal()[i];
    norms_.push_back(std::sqrt(norm2));
    if (config_.check_stability && norms_.back() > norms_.front() * (1.0 + kStabilitySlack)) {
        throw NumericalError("stability bound violated at step " + std::to_string(n_) + ": ||u^n|| = " +
                             sci(norms_.back()) + " > ||u^0|| = " + sci(norms_.front()));
    }
    step_seconds_ += seconds_since(start);
}

SolveResult solve_to_final(const SchemeConfig& config, const Problem& problem,
                           const std::function<void(const Solver&)>& observer) {
    config.validate();
    if (config.mesh.a != problem.a || config.mesh.b != problem.b) {
        throw std::invalid_argument("solve_to_final: mesh domain differs from the problem domain");
    }
    if (config.rho != problem.rho || config.gamma != problem.gamma || config.alpha != problem.alpha) {
        throw std::invalid_argument("solve_to_final: rho/gamma/alpha differ between config and problem '" +
                                    problem.label + "'");
    }
    const auto start = Clock::now();
    Solver solver(config, problem.initial);
    if (observer) observer(solver);
    for (int n = 0; n < config.steps; ++n) {
        solver.step(problem.forcing);
        if (observer) observer(solver);
    }
    SolveDiagnostics diag;
    diag.norms = solver.norms();
    diag.setup_seconds = solver.setup_seconds();
    diag.step_seconds = solver.step_seconds();
    diag.wall_seconds = seconds_since(start);
    diag.max_backward_error = solver.max_backward_error();
    diag.max_relative_residual = solver.max_relative_residual();
    diag.min_pivot = solver.system().min_pivot();
    diag.dense_factorization = solver.system().dense();
    return SolveResult{solver.u(), solver.p(), std::move(diag)};
}

}  // namespace tldg
