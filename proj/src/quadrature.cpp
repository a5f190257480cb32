#include "tldg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tldg {

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;

// P_q(x) and P_q'(x) for the root search.
void legendre_pair(int q, double x, double& p, double& dp) {
    double p0 = 1.0;
    double p1 = x;
    if (q == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int j = 1; j < q; ++j) {
        const double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = q * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadRule gauss_legendre(int q) {
    if (q < 1 || q > 32) {
        throw std::invalid_argument("gauss_legendre: q must lie in [1, 32], got " + std::to_string(q));
    }
    QuadRule rule;
    rule.order = q;
    rule.nodes.assign(q, 0.0);
    rule.weights.assign(q, 0.0);

    const int half = (q + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double p = 0.0;
        double dp = 1.0;
        for (int it = 0; it < kNewtonMaxIter; ++it) {
            legendre_pair(q, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) <= kNewtonTol) break;
        }
        legendre_pair(q, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // roots come out in decreasing order; store ascending and mirrored
        rule.nodes[i] = -x;
        rule.nodes[q - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[q - 1 - i] = w;
    }
    if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
    return rule;
}

void legendre_eval(int k, double xi, std::span<double> values, std::span<double> derivatives) {
    if (k < 0) throw std::invalid_argument("legendre_eval: degree must be >= 0");
    if (!(xi >= -1.0 && xi <= 1.0)) {
        throw std::invalid_argument("legendre_eval: xi must lie in [-1, 1], got " + std::to_string(xi));
    }
    if (values.size() < static_cast<std::size_t>(k + 1) ||
        derivatives.size() < static_cast<std::size_t>(k + 1)) {
        throw std::invalid_argument("legendre_eval: output spans too short");
    }
    values[0] = 1.0;
    derivatives[0] = 0.0;
    if (k == 0) return;
    values[1] = xi;
    derivatives[1] = 1.0;
    for (int m = 1; m < k; ++m) {
        values[m + 1] = ((2.0 * m + 1.0) * xi * values[m] - m * values[m - 1]) / (m + 1.0);
        // P'_{m+1} = P'_{m-1} + (2m+1) P_m, valid at the endpoints too
        derivatives[m + 1] = derivatives[m - 1] + (2.0 * m + 1.0) * values[m];
    }
}

LegendreValues legendre_eval(int k, double xi) {
    if (k < 0) throw std::invalid_argument("legendre_eval: degree must be >= 0");
    LegendreValues out;
    out.values.assign(k + 1, 0.0);
    out.derivatives.assign(k + 1, 0.0);
    legendre_eval(k, xi, out.values, out.derivatives);
    return out;
}

LegendreBasis::LegendreBasis(int degree, const QuadRule& rule) : degree_(degree), rule_(rule) {
    if (degree < 0) throw std::invalid_argument("LegendreBasis: degree must be >= 0");
    const int nq = rule_.size();
    values_.assign(static_cast<std::size_t>(nq) * modes(), 0.0);
    derivs_.assign(static_cast<std::size_t>(nq) * modes(), 0.0);
    for (int q = 0; q < nq; ++q) {
        legendre_eval(degree_, rule_.nodes[q],
                      std::span<double>(values_).subspan(q * modes(), modes()),
                      std::span<double>(derivs_).subspan(q * modes(), modes()));
    }
}

}  // namespace tldg
