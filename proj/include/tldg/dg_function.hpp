#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "tldg/mesh.hpp"

namespace tldg {

/// Which one-sided trace to take when a point sits on a cell interface.
/// `left` is the value from the cell to the left (v^-), `right` the value
/// from the cell to the right (v^+). `interior` takes the cell that
/// Mesh1D::locate reports.
enum class Side { left, right, interior };

/// Piecewise polynomial of degree k on a periodic mesh, stored as Legendre
/// coefficients: coeffs[j*(k+1) + m] multiplies P_m on cell j.
class DGFunction {
public:
    DGFunction(std::shared_ptr<const Mesh1D> mesh, int degree);
    DGFunction(std::shared_ptr<const Mesh1D> mesh, int degree, std::vector<double> coeffs);

    const Mesh1D& mesh() const { return *mesh_; }
    const std::shared_ptr<const Mesh1D>& mesh_ptr() const { return mesh_; }
    int degree() const { return degree_; }
    int modes() const { return degree_ + 1; }
    int num_cells() const { return mesh_->num_cells(); }
    std::size_t size() const { return coeffs_.size(); }

    std::span<const double> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }
    std::span<const double> cell(int j) const { return std::span<const double>(coeffs_).subspan(j * modes(), modes()); }
    std::span<double> cell(int j) { return std::span<double>(coeffs_).subspan(j * modes(), modes()); }
    double& operator()(int j, int m) { return coeffs_[j * modes() + m]; }
    double operator()(int j, int m) const { return coeffs_[j * modes() + m]; }

    /// Value of the cell-j polynomial at reference coordinate xi.
    double eval_cell(int j, double xi) const;
    /// u^- at the right end of cell j and u^+ at its left end.
    double trace_right_end(int j) const;
    double trace_left_end(int j) const;

    /// Squared L2 norm through the diagonal mass identity
    /// sum_j sum_m c_{jm}^2 h_j / (2m+1).
    double l2_norm_squared() const;
    double l2_norm() const;

private:
    std::shared_ptr<const Mesh1D> mesh_;
    int degree_;
    std::vector<double> coeffs_;
};

/// Point value with periodic trace selection. Throws std::invalid_argument
/// when x is outside [a, b].
double evaluate(const DGFunction& u, double x, Side side = Side::interior);

/// Jump [v] = v^+ - v^- at interface index i (0..N, periodic).
double jump(const DGFunction& u, int interface_index);

/// CSV "x,u" with `samples_per_cell` equispaced points per cell including
/// both endpoints (one-sided values), 17 significant digits.
void write_dg_csv(const DGFunction& u, int samples_per_cell, std::ostream& os);

}  // namespace tldg
