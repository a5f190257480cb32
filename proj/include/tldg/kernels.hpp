#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace tldg {

class Mesh1D;
class LegendreBasis;

/// Which variant of a data-parallel kernel to run. Both variants perform the
/// same floating-point operations in the same order per output entry, so
/// their results are bit-identical.
enum class Exec { serial, parallel };

/// Thread count for OpenMP regions: TEMPERED_LDG_THREADS when set (0 means
/// sequential, reported as 1), otherwise the OpenMP default.
int configured_threads();

namespace kernels {

/// out[d] = sum_l coeffs[l] * rows[l * stride + d] for d < out.size().
/// Summation runs over l in ascending order for every d.
void weighted_row_sum_serial(std::span<const double> coeffs, std::span<const double> rows,
                             std::size_t stride, std::span<double> out);
void weighted_row_sum_parallel(std::span<const double> coeffs, std::span<const double> rows,
                               std::size_t stride, std::span<double> out);

/// Load vector out[j*(k+1)+m] = integral over cell j of f(x) P_m(xi(x)) dx
/// using the quadrature tabulated in `basis`.
void assemble_load_serial(const Mesh1D& mesh, const LegendreBasis& basis,
                          const std::function<double(double)>& f, std::span<double> out);
void assemble_load_parallel(const Mesh1D& mesh, const LegendreBasis& basis,
                            const std::function<double(double)>& f, std::span<double> out);

inline void weighted_row_sum(Exec exec, std::span<const double> coeffs, std::span<const double> rows,
                             std::size_t stride, std::span<double> out) {
    if (exec == Exec::parallel) {
        weighted_row_sum_parallel(coeffs, rows, stride, out);
    } else {
        weighted_row_sum_serial(coeffs, rows, stride, out);
    }
}

inline void assemble_load(Exec exec, const Mesh1D& mesh, const LegendreBasis& basis,
                          const std::function<double(double)>& f, std::span<double> out) {
    if (exec == Exec::parallel) {
        assemble_load_parallel(mesh, basis, f, out);
    } else {
        assemble_load_serial(mesh, basis, f, out);
    }
}

}  // namespace kernels
}  // namespace tldg
