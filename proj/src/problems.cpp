#include "tldg/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tldg/tempered_time.hpp"

namespace tldg {

namespace {
constexpr double kPi = std::numbers::pi;
}

Problem sine_manufactured_problem(double gamma, double alpha) {
    Problem p;
    p.label = "ex4.1";
    p.a = 0.0;
    p.b = 1.0;
    p.rho = 0.0;
    p.gamma = gamma;
    p.alpha = alpha;
    const double g3 = lanczos_gamma(3.0 - alpha);
    p.exact = [gamma](double x, double t) { return std::exp(-gamma * t) * t * t * std::sin(2.0 * kPi * x); };
    p.forcing = [gamma, alpha, g3](double x, double t) {
        const double damp = std::exp(-gamma * t);
        const double s = std::sin(2.0 * kPi * x);
        return 2.0 * damp * std::pow(t, 2.0 - alpha) / g3 * s + 4.0 * kPi * kPi * t * t * damp * s;
    };
    p.initial = [](double) { return 0.0; };
    return p;
}

Problem polynomial_reaction_problem(double gamma, double alpha) {
    Problem p;
    p.label = "ex4.2";
    p.a = 0.0;
    p.b = 1.0;
    p.rho = 1.0;
    p.gamma = gamma;
    p.alpha = alpha;
    const double rho = p.rho;
    const double g3 = lanczos_gamma(3.0 - alpha);
    p.exact = [gamma](double x, double t) {
        const double s = x * (1.0 - x);
        return std::exp(-gamma * t) * t * t * s * s;
    };
    p.forcing = [gamma, alpha, rho, g3](double x, double t) {
        const double s = x * (1.0 - x);
        const double shape = s * s;
        const double shape_xx = 2.0 - 12.0 * x + 12.0 * x * x;
        return std::exp(-gamma * t) *
               ((2.0 * std::pow(t, 2.0 - alpha) / g3 + rho * t * t) * shape - t * t * shape_xx);
    };
    p.initial = [](double) { return 0.0; };
    return p;
}

Problem gaussian_pulse_problem(double gamma, double alpha, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("gaussian_pulse_problem: need a < b");
    Problem p;
    p.label = "ex4.3";
    p.a = a;
    p.b = b;
    p.rho = 0.0;
    p.gamma = gamma;
    p.alpha = alpha;
    p.initial = [](double x) { return std::exp(-5.0 * (x - 3.0) * (x - 3.0)); };
    if (p.initial(a) > 1e-8 || p.initial(b) > 1e-8) {
        p.warnings.push_back("initial pulse is not negligible at the domain ends; the periodic wrap will distort it");
    }
    return p;
}

Problem make_problem(const std::string& label, double gamma, double alpha, double a, double b) {
    if (label == "ex4.1") return sine_manufactured_problem(gamma, alpha);
    if (label == "ex4.2") return polynomial_reaction_problem(gamma, alpha);
    if (label == "ex4.3") return gaussian_pulse_problem(gamma, alpha, a, b);
    throw std::invalid_argument("unknown problem '" + label + "' (expected ex4.1, ex4.2 or ex4.3)");
}

}  // namespace tldg
