#include "tldg/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "tldg/errors.hpp"
#include "tldg/flux_operator.hpp"
#include "tldg/kernels.hpp"
#include "tldg/quadrature.hpp"

namespace tldg {

DGFunction l2_project(const ScalarFn& f, std::shared_ptr<const Mesh1D> mesh, int degree, int quad_order) {
    const int q = quad_order > 0 ? quad_order : default_quad_order(degree);
    const LegendreBasis basis(degree, gauss_legendre(q));
    DGFunction u(std::move(mesh), degree);
    kernels::assemble_load_serial(u.mesh(), basis, f, u.coeffs());
    const MassMatrix mass(u.mesh(), degree);
    mass.apply_inverse(u.coeffs(), u.coeffs());
    return u;
}

DGFunction gauss_radau_project(const ScalarFn& f, std::span<const double> f_trace,
                               std::shared_ptr<const Mesh1D> mesh, int degree, double delta,
                               int quad_order) {
    check_delta(delta);
    if (!mesh) throw std::invalid_argument("gauss_radau_project: null mesh");
    const int n = mesh->num_cells();
    if (f_trace.size() != static_cast<std::size_t>(n + 1)) {
        throw std::invalid_argument("gauss_radau_project: expected N+1 interface values");
    }
    // Modes below k coincide with the L2 projection.
    DGFunction u = l2_project(f, mesh, degree, quad_order);
    const int k = degree;
    const double sign_k = LegendreBasis::left_trace(k);

    // (1-delta) x_L + delta (-1)^k x_R = f(x_{i+1/2}) - known lower-mode traces
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        const int left = i;
        const int right = (i + 1) % n;
        double known_minus = 0.0;
        double known_plus = 0.0;
        for (int m = 0; m < k; ++m) {
            known_minus += u(left, m);
            known_plus += LegendreBasis::left_trace(m) * u(right, m);
        }
        rhs[i] = f_trace[(i + 1) % n] - (1.0 - delta) * known_minus - delta * known_plus;
        trip.emplace_back(i, left, 1.0 - delta);
        trip.emplace_back(i, right, delta * sign_k);
    }
    Eigen::SparseMatrix<double> sys(n, n);
    sys.setFromTriplets(trip.begin(), trip.end());
    sys.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(sys);
    if (lu.info() != Eigen::Success) {
        throw NumericalError("gauss_radau_project: interface system is singular (delta = " +
                             std::to_string(delta) + ", N = " + std::to_string(n) + "): " + lu.lastErrorMessage());
    }
    const Eigen::VectorXd top = lu.solve(rhs);
    const double resid = (sys * top - rhs).norm();
    if (!(resid <= 1e-10 * std::max(1.0, rhs.norm()))) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", resid);
        throw NumericalError(std::string("gauss_radau_project: interface solve residual ") + buf);
    }
    for (int j = 0; j < n; ++j) u(j, k) = top[j];
    return u;
}

DGFunction gauss_radau_project(const ScalarFn& f, std::shared_ptr<const Mesh1D> mesh, int degree,
                               double delta, int quad_order) {
    if (!mesh) throw std::invalid_argument("gauss_radau_project: null mesh");
    std::vector<double> trace;
    trace.reserve(mesh->interfaces().size());
    for (double x : mesh->interfaces()) trace.push_back(f(x));
    return gauss_radau_project(f, trace, std::move(mesh), degree, delta, quad_order);
}

ErrorNorms error_norms(const DGFunction& uh, const ScalarFn& exact, int quad_order, int samples_per_cell) {
    const int q = quad_order > 0 ? quad_order : default_quad_order(uh.degree());
    const QuadRule rule = gauss_legendre(q);
    const Mesh1D& mesh = uh.mesh();
    ErrorNorms out;
    double sum = 0.0;
    double worst = 0.0;
    for (int j = 0; j < mesh.num_cells(); ++j) {
        const double half_h = 0.5 * mesh.h(j);
        double cell_sum = 0.0;
        for (int i = 0; i < rule.size(); ++i) {
            const double xi = rule.nodes[i];
            const double e = uh.eval_cell(j, xi) - exact(mesh.from_reference(j, xi));
            cell_sum += rule.weights[i] * e * e;
            worst = std::max(worst, std::abs(e));
        }
        sum += half_h * cell_sum;
        // equispaced interior points plus both one-sided endpoint traces
        for (int s = 0; s <= samples_per_cell + 1; ++s) {
            const double xi = -1.0 + 2.0 * s / (samples_per_cell + 1);
            const double e = uh.eval_cell(j, xi) - exact(mesh.from_reference(j, xi));
            worst = std::max(worst, std::abs(e));
        }
    }
    out.l2 = std::sqrt(sum);
    out.linf = worst;
    return out;
}

}  // namespace tldg
