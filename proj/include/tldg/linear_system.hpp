#pragma once

#include <span>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace tldg {

/// Accuracy of one solve. The backward error
///   ||b - S x|| / (||S|| ||x|| + ||b||)
/// is what the tolerance applies to: the plain relative residual
/// ||b - S x|| / ||b|| of a double-precision x cannot drop below roughly
/// eps * ||S|| ||x|| / ||b||, which exceeds 1e-12 for nearly constant
/// solutions of poorly shifted systems (large tau, alpha near 1).
struct SolveReport {
    double backward_error = 0.0;
    double relative_residual = 0.0;
    bool refined = false;
};

/// Factor-once symmetric positive definite solver. Systems with at most
/// `dense_limit` unknowns use a dense LDL^T; larger ones a sparse LDL^T
/// with fill-reducing ordering (the periodic corner blocks of the banded
/// matrix are handled by the ordering). Either way the pivots D are kept so
/// positive definiteness can be reported.
class SpdSystem {
public:
    static constexpr Eigen::Index kDefaultDenseLimit = 64;

    /// Throws ConfigError when the matrix is not symmetric positive definite.
    explicit SpdSystem(const Eigen::SparseMatrix<double>& matrix, Eigen::Index dense_limit = kDefaultDenseLimit);

    Eigen::Index size() const { return matrix_.rows(); }
    bool dense() const { return dense_; }
    const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
    double min_pivot() const { return min_pivot_; }
    double max_pivot() const { return max_pivot_; }
    /// max |S_ij - S_ji|
    double asymmetry() const { return asymmetry_; }

    /// ||S||_1 (= ||S||_inf), an upper bound for the 2-norm.
    double norm() const { return norm_; }
    /// Solves S x = b, with one step of iterative refinement if the
    /// backward error exceeds `tolerance`.
    SolveReport solve(std::span<const double> b, std::span<double> x, double tolerance = 1e-12) const;

private:
    void raw_solve(const Eigen::VectorXd& b, Eigen::VectorXd& x) const;
    double backward_error(const Eigen::VectorXd& b, const Eigen::VectorXd& x, double* relative) const;

    Eigen::SparseMatrix<double> matrix_;
    bool dense_ = false;
    Eigen::LDLT<Eigen::MatrixXd> dense_ldlt_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> sparse_ldlt_;
    double min_pivot_ = 0.0;
    double max_pivot_ = 0.0;
    double asymmetry_ = 0.0;
    double norm_ = 0.0;
};

}  // namespace tldg
