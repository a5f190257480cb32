#include "tldg/flux_operator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tldg/quadrature.hpp"

namespace tldg {

MassMatrix::MassMatrix(const Mesh1D& mesh, int degree) : degree_(degree) {
    if (degree < 0) throw std::invalid_argument("mass_matrix: degree must be >= 0");
    const int modes = degree + 1;
    diag_.resize(static_cast<std::size_t>(mesh.num_cells()) * modes);
    for (int j = 0; j < mesh.num_cells(); ++j) {
        for (int m = 0; m < modes; ++m) diag_[j * modes + m] = mesh.h(j) / (2.0 * m + 1.0);
    }
}

void MassMatrix::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != diag_.size() || y.size() != diag_.size()) throw std::invalid_argument("MassMatrix::apply: size mismatch");
    for (std::size_t i = 0; i < diag_.size(); ++i) y[i] = diag_[i] * x[i];
}

void MassMatrix::apply_inverse(std::span<const double> x, std::span<double> y) const {
    if (x.size() != diag_.size() || y.size() != diag_.size()) throw std::invalid_argument("MassMatrix::apply_inverse: size mismatch");
    for (std::size_t i = 0; i < diag_.size(); ++i) y[i] = x[i] / diag_[i];
}

MassMatrix mass_matrix(const Mesh1D& mesh, int degree) { return MassMatrix(mesh, degree); }

void check_delta(double delta) {
    if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
    if (delta == 0.5) {
        throw std::invalid_argument(
            "delta = 1/2 is not allowed: generalized alternating fluxes require delta != 1/2");
    }
}

FluxOperator::FluxOperator(std::shared_ptr<const Mesh1D> mesh, int degree, double delta)
    : mesh_(std::move(mesh)), degree_(degree), delta_(delta) {
    if (!mesh_) throw std::invalid_argument("FluxOperator: null mesh");
    if (degree < 0) throw std::invalid_argument("FluxOperator: degree must be >= 0");
    check_delta(delta);

    const int k1 = modes();
    const int n = num_cells();
    const std::size_t bs = static_cast<std::size_t>(k1) * k1;
    diag_.assign(n * bs, 0.0);
    lower_.assign(n * bs, 0.0);
    upper_.assign(n * bs, 0.0);

    // Reference volume block D[m][n] = int_{-1}^{1} P_n P_m' dxi. The Jacobians
    // of u and w_x cancel, so D is the same on every cell. k+1 Gauss points
    // integrate the degree 2k-1 integrand exactly.
    const LegendreBasis basis(degree, gauss_legendre(k1));
    std::vector<double> vol(bs, 0.0);
    for (int q = 0; q < basis.rule().size(); ++q) {
        const double w = basis.rule().weights[q];
        for (int m = 0; m < k1; ++m) {
            for (int t = 0; t < k1; ++t) vol[m * k1 + t] += w * basis.value(q, t) * basis.derivative(q, m);
        }
    }
    for (int j = 0; j < n; ++j) {
        for (std::size_t e = 0; e < bs; ++e) diag_[j * bs + e] = vol[e];
    }

    // Interface x_{i+1/2} between L = i and R = i+1 (mod N) contributes
    // u^(delta) (w^+ - w^-) with u^(delta) = delta u_R(-1) + (1-delta) u_L(+1).
    const double d = delta;
    for (int i = 0; i < n; ++i) {
        const int left = i;
        const int right = (i + 1) % n;
        for (int m = 0; m < k1; ++m) {
            const double wl = LegendreBasis::right_trace(m);  // w^- from cell L
            const double wr = LegendreBasis::left_trace(m);   // w^+ from cell R
            for (int t = 0; t < k1; ++t) {
                const double ul = LegendreBasis::right_trace(t);
                const double ur = LegendreBasis::left_trace(t);
                diag_[left * bs + m * k1 + t] -= (1.0 - d) * ul * wl;
                upper_[left * bs + m * k1 + t] -= d * ur * wl;
                lower_[right * bs + m * k1 + t] += (1.0 - d) * ul * wr;
                diag_[right * bs + m * k1 + t] += d * ur * wr;
            }
        }
    }
}

FluxOperator assemble_flux_operator(std::shared_ptr<const Mesh1D> mesh, int degree, double delta) {
    return FluxOperator(std::move(mesh), degree, delta);
}

void FluxOperator::apply(std::span<const double> u, std::span<double> y) const {
    if (u.size() != size() || y.size() != size()) throw std::invalid_argument("FluxOperator::apply: size mismatch");
    const int k1 = modes();
    const int n = num_cells();
    for (int j = 0; j < n; ++j) {
        const int jl = (j + n - 1) % n;
        const int jr = (j + 1) % n;
        const auto D = diag_block(j);
        const auto L = lower_block(j);
        const auto U = upper_block(j);
        for (int m = 0; m < k1; ++m) {
            double acc = 0.0;
            for (int t = 0; t < k1; ++t) {
                acc += D[m * k1 + t] * u[j * k1 + t] + L[m * k1 + t] * u[jl * k1 + t] +
                       U[m * k1 + t] * u[jr * k1 + t];
            }
            y[j * k1 + m] = acc;
        }
    }
}

void FluxOperator::apply_transpose(std::span<const double> u, std::span<double> y) const {
    if (u.size() != size() || y.size() != size()) throw std::invalid_argument("FluxOperator::apply_transpose: size mismatch");
    const int k1 = modes();
    const int n = num_cells();
    for (auto& v : y) v = 0.0;
    for (int j = 0; j < n; ++j) {
        const int jl = (j + n - 1) % n;
        const int jr = (j + 1) % n;
        const auto D = diag_block(j);
        const auto L = lower_block(j);
        const auto U = upper_block(j);
        for (int m = 0; m < k1; ++m) {
            const double um = u[j * k1 + m];
            for (int t = 0; t < k1; ++t) {
                y[j * k1 + t] += D[m * k1 + t] * um;
                y[jl * k1 + t] += L[m * k1 + t] * um;
                y[jr * k1 + t] += U[m * k1 + t] * um;
            }
        }
    }
}

double FluxOperator::bilinear(std::span<const double> u, std::span<const double> w) const {
    std::vector<double> au(size());
    apply(u, au);
    double acc = 0.0;
    for (std::size_t i = 0; i < au.size(); ++i) acc += w[i] * au[i];
    return acc;
}

Eigen::SparseMatrix<double> FluxOperator::to_sparse() const {
    const int k1 = modes();
    const int n = num_cells();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(3 * static_cast<std::size_t>(n) * k1 * k1);
    for (int j = 0; j < n; ++j) {
        const int jl = (j + n - 1) % n;
        const int jr = (j + 1) % n;
        for (int m = 0; m < k1; ++m) {
            for (int t = 0; t < k1; ++t) {
                const int row = j * k1 + m;
                trip.emplace_back(row, j * k1 + t, diag_block(j)[m * k1 + t]);
                trip.emplace_back(row, jl * k1 + t, lower_block(j)[m * k1 + t]);
                trip.emplace_back(row, jr * k1 + t, upper_block(j)[m * k1 + t]);
            }
        }
    }
    const auto sz = static_cast<Eigen::Index>(size());
    Eigen::SparseMatrix<double> a(sz, sz);
    a.setFromTriplets(trip.begin(), trip.end());  // duplicates (N = 2) are summed
    a.prune(0.0);
    return a;
}

Eigen::MatrixXd FluxOperator::to_dense() const { return Eigen::MatrixXd(to_sparse()); }

}  // namespace tldg
