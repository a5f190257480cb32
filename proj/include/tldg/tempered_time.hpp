#pragma once

#include <span>
#include <vector>

namespace tldg {

/// Gamma function by the Lanczos approximation (g = 7, 9 coefficients),
/// with reflection for x < 1/2. Relative accuracy is about 1e-15 on (0, 10].
double lanczos_gamma(double x);

/// L1 weights for the tempered Caputo derivative on a uniform grid t_n = n*tau.
struct TemperedWeights {
    double alpha = 0.0;
    double gamma = 0.0;
    double tau = 0.0;
    int steps = 0;              ///< M
    std::vector<double> b;      ///< b_i = (i+1)^{1-alpha} - i^{1-alpha}, i = 0..M-1
    std::vector<double> damp;   ///< exp(-i*gamma*tau), i = 0..M
    double mu = 0.0;            ///< tau^{-alpha} / Gamma(2-alpha)
};

TemperedWeights build_weights(double alpha, double gamma, double tau, int steps);

/// Coefficients c_0..c_{n-1} such that the history term at level n is
/// sum_l c_l u^l, i.e.
///   c_l = (b_{n-l-1} - b_{n-l}) e^{-(n-l) gamma tau}  for 1 <= l <= n-1,
///   c_0 = b_{n-1} e^{-n gamma tau}.
std::vector<double> history_coefficients(const TemperedWeights& w, int n);

/// h^n = sum_{i=1}^{n-1} (b_{i-1}-b_i) e^{-i gamma tau} u^{n-i} + b_{n-1} e^{-n gamma tau} u^0.
/// `history` holds u^0..u^{n-1}, all of the same length.
std::vector<double> history_combination(const TemperedWeights& w, int n,
                                        std::span<const std::vector<double>> history);

/// Discrete tempered derivative of a scalar time series g(t_0)..g(t_n):
///   mu * (g_n + sum_{i=1}^{n-1} (b_i - b_{i-1}) e^{-i gamma tau} g_{n-i} - b_{n-1} e^{-n gamma tau} g_0)
double tempered_derivative_scalar(const TemperedWeights& w, std::span<const double> samples);

}  // namespace tldg
