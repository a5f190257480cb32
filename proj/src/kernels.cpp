#include "tldg/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "tldg/mesh.hpp"
#include "tldg/quadrature.hpp"

namespace tldg {

int configured_threads() {
    if (const char* env = std::getenv("TEMPERED_LDG_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0) return v == 0 ? 1 : static_cast<int>(v);
    }
    return omp_get_max_threads();
}

namespace kernels {

namespace {

// Columns handled per task; each task sweeps all rows over its column block
// so the row-major history is streamed rather than strided.
constexpr std::size_t kColumnBlock = 512;

void check_row_sum_args(std::span<const double> coeffs, std::span<const double> rows,
                        std::size_t stride, std::span<double> out) {
    if (out.size() > stride) throw std::invalid_argument("weighted_row_sum: out longer than stride");
    if (!coeffs.empty() && rows.size() < (coeffs.size() - 1) * stride + out.size()) {
        throw std::invalid_argument("weighted_row_sum: row storage too small");
    }
}

void row_sum_block(std::span<const double> coeffs, const double* rows, std::size_t stride,
                   double* out, std::size_t begin, std::size_t end) {
    for (std::size_t d = begin; d < end; ++d) out[d] = 0.0;
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
        const double c = coeffs[l];
        const double* row = rows + l * stride;
        for (std::size_t d = begin; d < end; ++d) out[d] += c * row[d];
    }
}

void load_cell(const Mesh1D& mesh, const LegendreBasis& basis, const std::function<double(double)>& f,
               int j, double* out) {
    const int modes = basis.modes();
    const QuadRule& rule = basis.rule();
    const double half_h = 0.5 * mesh.h(j);
    for (int m = 0; m < modes; ++m) out[m] = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
        const double fw = f(mesh.from_reference(j, rule.nodes[q])) * rule.weights[q] * half_h;
        for (int m = 0; m < modes; ++m) out[m] += fw * basis.value(q, m);
    }
}

}  // namespace

void weighted_row_sum_serial(std::span<const double> coeffs, std::span<const double> rows,
                             std::size_t stride, std::span<double> out) {
    check_row_sum_args(coeffs, rows, stride, out);
    row_sum_block(coeffs, rows.data(), stride, out.data(), 0, out.size());
}

void weighted_row_sum_parallel(std::span<const double> coeffs, std::span<const double> rows,
                               std::size_t stride, std::span<double> out) {
    check_row_sum_args(coeffs, rows, stride, out);
    const std::size_t n = out.size();
    const auto blocks = static_cast<long>((n + kColumnBlock - 1) / kColumnBlock);
    const double* rp = rows.data();
    double* op = out.data();
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (long blk = 0; blk < blocks; ++blk) {
        const std::size_t begin = static_cast<std::size_t>(blk) * kColumnBlock;
        const std::size_t end = std::min(n, begin + kColumnBlock);
        row_sum_block(coeffs, rp, stride, op, begin, end);
    }
}

void assemble_load_serial(const Mesh1D& mesh, const LegendreBasis& basis,
                          const std::function<double(double)>& f, std::span<double> out) {
    const int modes = basis.modes();
    if (out.size() != static_cast<std::size_t>(mesh.num_cells() * modes)) {
        throw std::invalid_argument("assemble_load: output size mismatch");
    }
    for (int j = 0; j < mesh.num_cells(); ++j) load_cell(mesh, basis, f, j, out.data() + j * modes);
}

void assemble_load_parallel(const Mesh1D& mesh, const LegendreBasis& basis,
                            const std::function<double(double)>& f, std::span<double> out) {
    const int modes = basis.modes();
    if (out.size() != static_cast<std::size_t>(mesh.num_cells() * modes)) {
        throw std::invalid_argument("assemble_load: output size mismatch");
    }
    const int cells = mesh.num_cells();
    double* op = out.data();
#pragma omp parallel for schedule(static) num_threads(configured_threads())
    for (int j = 0; j < cells; ++j) load_cell(mesh, basis, f, j, op + j * modes);
}

}  // namespace kernels
}  // namespace tldg
