#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "tldg/mesh.hpp"

namespace tldg {

/// Diagonal DG mass matrix, entries h_j / (2m+1).
class MassMatrix {
public:
    MassMatrix(const Mesh1D& mesh, int degree);

    int degree() const { return degree_; }
    std::size_t size() const { return diag_.size(); }
    const std::vector<double>& diagonal() const { return diag_; }
    double entry(int j, int m) const { return diag_[j * (degree_ + 1) + m]; }

    void apply(std::span<const double> x, std::span<double> y) const;
    void apply_inverse(std::span<const double> x, std::span<double> y) const;

private:
    int degree_;
    std::vector<double> diag_;
};

MassMatrix mass_matrix(const Mesh1D& mesh, int degree);

/// Matrix A_delta of the bilinear form
///   G_delta(u; w) = sum_j int_{I_j} u w_x dx
///                   - sum_j [ (u^(delta) w^-)_{j+1/2} - (u^(delta) w^+)_{j-1/2} ],
///   u^(delta) = delta u^+ + (1 - delta) u^-,
/// so that w^T A_delta u = G_delta(u; w). Rows index the test function,
/// columns the trial function. Cell j couples only to j-1 and j+1 (mod N);
/// each coupling is a dense (k+1)x(k+1) block stored row-major.
class FluxOperator {
public:
    FluxOperator(std::shared_ptr<const Mesh1D> mesh, int degree, double delta);

    double delta() const { return delta_; }
    int degree() const { return degree_; }
    int modes() const { return degree_ + 1; }
    int num_cells() const { return mesh_->num_cells(); }
    std::size_t size() const { return static_cast<std::size_t>(num_cells()) * modes(); }
    const Mesh1D& mesh() const { return *mesh_; }

    /// Block of test cell j against trial cell j (diag), j-1 (lower), j+1 (upper).
    std::span<const double> diag_block(int j) const { return block(diag_, j); }
    std::span<const double> lower_block(int j) const { return block(lower_, j); }
    std::span<const double> upper_block(int j) const { return block(upper_, j); }

    /// y = A u
    void apply(std::span<const double> u, std::span<double> y) const;
    /// y = A^T u
    void apply_transpose(std::span<const double> u, std::span<double> y) const;
    /// w^T A u = G_delta(u; w)
    double bilinear(std::span<const double> u, std::span<const double> w) const;

    Eigen::SparseMatrix<double> to_sparse() const;
    Eigen::MatrixXd to_dense() const;

private:
    std::span<const double> block(const std::vector<double>& v, int j) const {
        const std::size_t bs = static_cast<std::size_t>(modes()) * modes();
        return std::span<const double>(v).subspan(j * bs, bs);
    }

    std::shared_ptr<const Mesh1D> mesh_;
    int degree_;
    double delta_;
    std::vector<double> diag_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// Assembles A_delta. delta = 1/2 is rejected: the generalized alternating
/// flux requires delta != 1/2.
FluxOperator assemble_flux_operator(std::shared_ptr<const Mesh1D> mesh, int degree, double delta);

/// Throws std::invalid_argument when delta is 1/2 or not finite.
void check_delta(double delta);

}  // namespace tldg
