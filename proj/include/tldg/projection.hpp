#pragma once

#include <functional>
#include <memory>
#include <span>

#include "tldg/dg_function.hpp"

namespace tldg {

using ScalarFn = std::function<double(double)>;

/// Cellwise L2 projection: c_{jm} = (2m+1)/h_j * int_{I_j} f P_m dx, by a
/// quad_order-point Gauss rule (quad_order <= 0 selects the default).
DGFunction l2_project(const ScalarFn& f, std::shared_ptr<const Mesh1D> mesh, int degree, int quad_order = 0);

/// Generalized Gauss-Radau projection P_delta f. On every cell the moments
/// against P^{k-1} match those of f, and at every interface x_{i+1/2}
///   delta (P f)^+ + (1 - delta) (P f)^- = f_trace[i],
/// where f_trace holds N+1 interface values (the first and last describe the
/// same periodic point; the first is used). The moment conditions fix modes
/// 0..k-1 locally; the top modes solve one cyclic sparse system.
DGFunction gauss_radau_project(const ScalarFn& f, std::span<const double> f_trace,
                               std::shared_ptr<const Mesh1D> mesh, int degree, double delta,
                               int quad_order = 0);

/// Convenience overload taking interface values from f itself.
DGFunction gauss_radau_project(const ScalarFn& f, std::shared_ptr<const Mesh1D> mesh, int degree,
                               double delta, int quad_order = 0);

struct ErrorNorms {
    double l2 = 0.0;
    double linf = 0.0;
};

/// L2 error by quadrature per cell; L-infinity error over the quadrature
/// nodes, `samples_per_cell` equispaced interior points and both one-sided
/// traces of every cell.
ErrorNorms error_norms(const DGFunction& uh, const ScalarFn& exact, int quad_order = 0,
                       int samples_per_cell = 8);

}  // namespace tldg
