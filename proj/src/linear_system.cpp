#include "tldg/linear_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tldg/errors.hpp"

namespace tldg {

SpdSystem::SpdSystem(const Eigen::SparseMatrix<double>& matrix, Eigen::Index dense_limit) : matrix_(matrix) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
        throw ConfigError("SpdSystem: matrix must be square and non-empty");
    }
    matrix_.makeCompressed();
    const Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(matrix_.transpose()) - matrix_;
    asymmetry_ = 0.0;
    for (Eigen::Index c = 0; c < diff.outerSize(); ++c) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(diff, c); it; ++it) {
            asymmetry_ = std::max(asymmetry_, std::abs(it.value()));
        }
    }

    Eigen::VectorXd pivots;
    dense_ = matrix_.rows() <= dense_limit;
    if (dense_) {
        dense_ldlt_.compute(Eigen::MatrixXd(matrix_));
        if (dense_ldlt_.info() != Eigen::Success) throw ConfigError("SpdSystem: dense LDL^T factorization failed");
        pivots = dense_ldlt_.vectorD();
    } else {
        sparse_ldlt_.compute(matrix_);
        if (sparse_ldlt_.info() != Eigen::Success) throw ConfigError("SpdSystem: sparse LDL^T factorization failed");
        pivots = sparse_ldlt_.vectorD();
    }
    // symmetric, so the 1-norm and the infinity norm agree; both bound the 2-norm
    norm_ = 0.0;
    for (Eigen::Index c = 0; c < matrix_.outerSize(); ++c) {
        double col = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, c); it; ++it) col += std::abs(it.value());
        norm_ = std::max(norm_, col);
    }
    min_pivot_ = pivots.minCoeff();
    max_pivot_ = pivots.maxCoeff();
    if (!(min_pivot_ > 0.0) || !std::isfinite(max_pivot_)) {
        throw ConfigError("SpdSystem: matrix is not positive definite (min pivot " + std::to_string(min_pivot_) + ")");
    }
}

void SpdSystem::raw_solve(const Eigen::VectorXd& b, Eigen::VectorXd& x) const {
    if (dense_) {
        x = dense_ldlt_.solve(b);
    } else {
        x = sparse_ldlt_.solve(b);
    }
}

double SpdSystem::backward_error(const Eigen::VectorXd& b, const Eigen::VectorXd& x, double* relative) const {
    const double r = (b - matrix_ * x).norm();
    const double bnorm = b.norm();
    if (relative) *relative = bnorm > 0.0 ? r / bnorm : r;
    const double scale = norm_ * x.norm() + bnorm;
    return scale > 0.0 ? r / scale : r;
}

SolveReport SpdSystem::solve(std::span<const double> b, std::span<double> x, double tolerance) const {
    const Eigen::Index n = size();
    if (static_cast<Eigen::Index>(b.size()) != n || static_cast<Eigen::Index>(x.size()) != n) {
        throw std::invalid_argument("SpdSystem::solve: size mismatch");
    }
    const Eigen::Map<const Eigen::VectorXd> bv(b.data(), n);
    SolveReport report;
    Eigen::VectorXd sol;
    raw_solve(bv, sol);
    report.backward_error = backward_error(bv, sol, &report.relative_residual);
    if (report.backward_error > tolerance) {
        Eigen::VectorXd corr;
        raw_solve(bv - matrix_ * sol, corr);
        sol += corr;
        report.refined = true;
        report.backward_error = backward_error(bv, sol, &report.relative_residual);
    }
    Eigen::Map<Eigen::VectorXd>(x.data(), n) = sol;
    return report;
}

}  // namespace tldg
