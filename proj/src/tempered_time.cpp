#include "tldg/tempered_time.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tldg {

namespace {

// Lanczos coefficients for g = 7, n = 9 (the widely published set from
// Godfrey / Numerical Recipes lineage).
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

}  // namespace

double lanczos_gamma(double x) {
    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
    }
    x -= 1.0;
    double a = kLanczosCoeffs[0];
    const double t = x + kLanczosG + 0.5;
    for (int i = 1; i < 9; ++i) a += kLanczosCoeffs[i] / (x + i);
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

TemperedWeights build_weights(double alpha, double gamma, double tau, int steps) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("build_weights: alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    if (!(gamma >= 0.0)) throw std::invalid_argument("build_weights: gamma must be >= 0");
    if (!(tau > 0.0)) throw std::invalid_argument("build_weights: tau must be > 0");
    if (steps < 1) throw std::invalid_argument("build_weights: M must be >= 1");

    TemperedWeights w;
    w.alpha = alpha;
    w.gamma = gamma;
    w.tau = tau;
    w.steps = steps;
    w.b.resize(steps);
    const double e = 1.0 - alpha;
    for (int i = 0; i < steps; ++i) {
        w.b[i] = std::pow(i + 1.0, e) - std::pow(static_cast<double>(i), e);
    }
    w.damp.resize(steps + 1);
    for (int i = 0; i <= steps; ++i) w.damp[i] = std::exp(-i * gamma * tau);
    w.mu = std::pow(tau, -alpha) / lanczos_gamma(2.0 - alpha);
    return w;
}

std::vector<double> history_coefficients(const TemperedWeights& w, int n) {
    if (n < 1 || n > w.steps) {
        throw std::invalid_argument("history_coefficients: level " + std::to_string(n) +
                                    " outside [1, " + std::to_string(w.steps) + "]");
    }
    std::vector<double> c(n);
    c[0] = w.b[n - 1] * w.damp[n];
    for (int l = 1; l < n; ++l) {
        const int i = n - l;
        c[l] = (w.b[i - 1] - w.b[i]) * w.damp[i];
    }
    return c;
}

std::vector<double> history_combination(const TemperedWeights& w, int n,
                                        std::span<const std::vector<double>> history) {
    if (history.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("history_combination: expected " + std::to_string(n) +
                                    " history vectors, got " + std::to_string(history.size()));
    }
    const std::vector<double> c = history_coefficients(w, n);
    const std::size_t len = history[0].size();
    std::vector<double> out(len, 0.0);
    for (int l = 0; l < n; ++l) {
        if (history[l].size() != len) {
            throw std::invalid_argument("history_combination: history vectors differ in length");
        }
        for (std::size_t d = 0; d < len; ++d) out[d] += c[l] * history[l][d];
    }
    return out;
}

double tempered_derivative_scalar(const TemperedWeights& w, std::span<const double> samples) {
    if (samples.size() < 2) {
        throw std::invalid_argument("tempered_derivative_scalar: need samples g(t_0)..g(t_n), n >= 1");
    }
    const int n = static_cast<int>(samples.size()) - 1;
    if (n > w.steps) {
        throw std::invalid_argument("tempered_derivative_scalar: more samples than weights");
    }
    double acc = samples[n];
    for (int i = 1; i < n; ++i) acc += (w.b[i] - w.b[i - 1]) * w.damp[i] * samples[n - i];
    acc -= w.b[n - 1] * w.damp[n] * samples[0];
    return w.mu * acc;
}

}  // namespace tldg
