#include "tldg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace tldg {

Mesh1D::Mesh1D(std::vector<double> interfaces) : interfaces_(std::move(interfaces)) {
    if (interfaces_.size() < 3) {
        throw std::invalid_argument("Mesh1D: need at least 2 cells");
    }
    for (std::size_t i = 0; i < interfaces_.size(); ++i) {
        if (!std::isfinite(interfaces_[i])) throw std::invalid_argument("Mesh1D: non-finite interface");
    }
    cell_lengths_.resize(interfaces_.size() - 1);
    for (std::size_t j = 0; j + 1 < interfaces_.size(); ++j) {
        const double hj = interfaces_[j + 1] - interfaces_[j];
        if (!(hj > 0.0)) {
            throw std::invalid_argument("Mesh1D: interfaces must be strictly increasing (cell " +
                                        std::to_string(j) + ")");
        }
        cell_lengths_[j] = hj;
    }
    h_max_ = *std::max_element(cell_lengths_.begin(), cell_lengths_.end());
    h_min_ = *std::min_element(cell_lengths_.begin(), cell_lengths_.end());
}

int Mesh1D::locate(double x) const {
    if (!(x >= a() && x <= b())) {
        throw std::invalid_argument("Mesh1D::locate: x outside [a, b]");
    }
    auto it = std::upper_bound(interfaces_.begin(), interfaces_.end(), x);
    int j = static_cast<int>(it - interfaces_.begin()) - 1;
    return std::clamp(j, 0, num_cells() - 1);
}

int Mesh1D::interface_index(double x) const {
    auto it = std::lower_bound(interfaces_.begin(), interfaces_.end(), x);
    if (it != interfaces_.end() && *it == x) return static_cast<int>(it - interfaces_.begin());
    return -1;
}

Mesh1D uniform_mesh(double a, double b, int num_cells) {
    if (num_cells < 2) throw std::invalid_argument("uniform_mesh: N must be >= 2");
    if (!(a < b)) throw std::invalid_argument("uniform_mesh: need a < b");
    std::vector<double> x(num_cells + 1);
    const double h = (b - a) / num_cells;
    for (int i = 0; i <= num_cells; ++i) x[i] = a + i * h;
    x.back() = b;
    return Mesh1D(std::move(x));
}

Mesh1D perturbed_mesh(double a, double b, int num_cells, std::uint64_t seed, double shift_fraction) {
    if (!(shift_fraction >= 0.0 && shift_fraction < 0.5)) {
        throw std::invalid_argument("perturbed_mesh: shift fraction must lie in [0, 0.5)");
    }
    Mesh1D base = uniform_mesh(a, b, num_cells);
    if (shift_fraction == 0.0) return base;
    std::vector<double> x = base.interfaces();
    const double h = (b - a) / num_cells;
    std::mt19937_64 rng(seed);
    for (int i = 1; i < num_cells; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x[i] += (2.0 * u - 1.0) * shift_fraction * h;
    }
    return Mesh1D(std::move(x));
}

void write_mesh_csv(const Mesh1D& mesh, std::ostream& os) {
    char buf[64];
    for (double x : mesh.interfaces()) {
        std::snprintf(buf, sizeof buf, "%.17g\n", x);
        os << buf;
    }
}

}  // namespace tldg
