#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace tldg {

/// Periodic partition a = x_{1/2} < ... < x_{N+1/2} = b. Cell j (0-based)
/// is [interfaces[j], interfaces[j+1]]; the endpoints a and b are the same
/// point of the periodic domain.
class Mesh1D {
public:
    /// Validates ordering and at least two cells.
    explicit Mesh1D(std::vector<double> interfaces);

    int num_cells() const { return static_cast<int>(cell_lengths_.size()); }
    double a() const { return interfaces_.front(); }
    double b() const { return interfaces_.back(); }
    double length() const { return b() - a(); }

    const std::vector<double>& interfaces() const { return interfaces_; }
    const std::vector<double>& cell_lengths() const { return cell_lengths_; }
    double h(int j) const { return cell_lengths_[j]; }
    double h_max() const { return h_max_; }
    double h_min() const { return h_min_; }
    /// min_j h_j / max_j h_j
    double quasi_uniformity() const { return h_min_ / h_max_; }
    bool periodic() const { return true; }

    double left(int j) const { return interfaces_[j]; }
    double right(int j) const { return interfaces_[j + 1]; }
    double center(int j) const { return 0.5 * (interfaces_[j] + interfaces_[j + 1]); }

    /// Reference coordinate of x in cell j.
    double to_reference(int j, double x) const { return 2.0 * (x - center(j)) / h(j); }
    double from_reference(int j, double xi) const { return center(j) + 0.5 * h(j) * xi; }

    /// Cell containing x (x in [a, b]). Interior interfaces belong to the
    /// cell on their right; b belongs to the last cell.
    int locate(double x) const;

    /// Index i with interfaces[i] == x, or -1.
    int interface_index(double x) const;

    friend bool operator==(const Mesh1D&, const Mesh1D&) = default;

private:
    std::vector<double> interfaces_;
    std::vector<double> cell_lengths_;
    double h_max_ = 0.0;
    double h_min_ = 0.0;
};

Mesh1D uniform_mesh(double a, double b, int num_cells);

/// Uniform mesh whose interior nodes are shifted by independent uniform
/// draws in [-shift_fraction*h, +shift_fraction*h], h = (b-a)/N. The default
/// 0.05 gives a 10% total window. Draws come from std::mt19937_64 seeded
/// with `seed`, converted to [0,1) by taking the top 53 bits.
Mesh1D perturbed_mesh(double a, double b, int num_cells, std::uint64_t seed,
                      double shift_fraction = 0.05);

/// One interface coordinate per line, 17 significant digits.
void write_mesh_csv(const Mesh1D& mesh, std::ostream& os);

}  // namespace tldg
