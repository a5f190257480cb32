#include "tldg/dg_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "tldg/quadrature.hpp"

namespace tldg {

DGFunction::DGFunction(std::shared_ptr<const Mesh1D> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
    if (!mesh_) throw std::invalid_argument("DGFunction: null mesh");
    if (degree_ < 0) throw std::invalid_argument("DGFunction: degree must be >= 0");
    coeffs_.assign(static_cast<std::size_t>(mesh_->num_cells()) * modes(), 0.0);
}

DGFunction::DGFunction(std::shared_ptr<const Mesh1D> mesh, int degree, std::vector<double> coeffs)
    : DGFunction(std::move(mesh), degree) {
    if (coeffs.size() != coeffs_.size()) {
        throw std::invalid_argument("DGFunction: expected " + std::to_string(coeffs_.size()) +
                                    " coefficients, got " + std::to_string(coeffs.size()));
    }
    coeffs_ = std::move(coeffs);
}

double DGFunction::eval_cell(int j, double xi) const {
    // three-term recurrence, summed on the fly
    const auto c = cell(j);
    double p0 = 1.0;
    double acc = c[0];
    if (degree_ == 0) return acc;
    double p1 = xi;
    acc += c[1] * p1;
    for (int m = 1; m < degree_; ++m) {
        const double p2 = ((2.0 * m + 1.0) * xi * p1 - m * p0) / (m + 1.0);
        acc += c[m + 1] * p2;
        p0 = p1;
        p1 = p2;
    }
    return acc;
}

double DGFunction::trace_right_end(int j) const {
    double acc = 0.0;
    for (double v : cell(j)) acc += v;
    return acc;
}

double DGFunction::trace_left_end(int j) const {
    const auto c = cell(j);
    double acc = 0.0;
    for (int m = 0; m < modes(); ++m) acc += LegendreBasis::left_trace(m) * c[m];
    return acc;
}

double DGFunction::l2_norm_squared() const {
    double acc = 0.0;
    for (int j = 0; j < num_cells(); ++j) {
        const auto c = cell(j);
        const double h = mesh_->h(j);
        for (int m = 0; m < modes(); ++m) acc += c[m] * c[m] * h / (2.0 * m + 1.0);
    }
    return acc;
}

double DGFunction::l2_norm() const { return std::sqrt(l2_norm_squared()); }

double evaluate(const DGFunction& u, double x, Side side) {
    const Mesh1D& mesh = u.mesh();
    if (!(x >= mesh.a() && x <= mesh.b())) {
        throw std::invalid_argument("evaluate: x = " + std::to_string(x) + " outside the domain");
    }
    const int n = mesh.num_cells();
    const int iface = mesh.interface_index(x);
    if (iface >= 0 && side != Side::interior) {
        // interfaces 0 and N are the same periodic point
        if (side == Side::left) {
            const int j = (iface == 0) ? n - 1 : iface - 1;
            return u.trace_right_end(j);
        }
        const int j = (iface == n) ? 0 : iface;
        return u.trace_left_end(j);
    }
    const int j = mesh.locate(x);
    const double xi = std::clamp(mesh.to_reference(j, x), -1.0, 1.0);
    return u.eval_cell(j, xi);
}

double jump(const DGFunction& u, int interface_index) {
    const int n = u.num_cells();
    if (interface_index < 0 || interface_index > n) throw std::invalid_argument("jump: bad interface index");
    const int i = interface_index % n;
    const int left_cell = (i == 0) ? n - 1 : i - 1;
    return u.trace_left_end(i) - u.trace_right_end(left_cell);
}

void write_dg_csv(const DGFunction& u, int samples_per_cell, std::ostream& os) {
    if (samples_per_cell < 2) throw std::invalid_argument("write_dg_csv: need >= 2 samples per cell");
    const Mesh1D& mesh = u.mesh();
    char buf[96];
    os << "x,u\n";
    for (int j = 0; j < mesh.num_cells(); ++j) {
        for (int s = 0; s < samples_per_cell; ++s) {
            const double xi = -1.0 + 2.0 * s / (samples_per_cell - 1);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", mesh.from_reference(j, xi), u.eval_cell(j, xi));
            os << buf;
        }
    }
}

}  // namespace tldg
