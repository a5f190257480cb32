#pragma once

#include <functional>
#include <string>
#include <vector>

namespace tldg {

using SpaceTimeFn = std::function<double(double x, double t)>;

/// Periodic test problem for
///   D_t^{alpha,gamma} u + rho u - u_xx = f  on (a, b) x (0, T].
/// `exact` and `forcing` may be empty (no closed-form solution / f = 0).
struct Problem {
    std::string label;
    double a = 0.0;
    double b = 1.0;
    double rho = 0.0;
    double gamma = 0.0;
    double alpha = 0.5;
    SpaceTimeFn exact;
    SpaceTimeFn forcing;
    std::function<double(double)> initial;
    std::vector<std::string> warnings;

    bool has_exact() const { return static_cast<bool>(exact); }
};

/// u = e^{-gamma t} t^2 sin(2 pi x) on [0, 1], rho = 0 (label "ex4.1").
Problem sine_manufactured_problem(double gamma, double alpha);

/// u = e^{-gamma t} t^2 x^2 (1-x)^2 on [0, 1], rho = 1 (label "ex4.2").
Problem polynomial_reaction_problem(double gamma, double alpha);

/// Homogeneous problem with u_0 = exp(-5 (x-3)^2), f = 0, rho = 0, no exact
/// solution (label "ex4.3"). Adds a warning when u_0 exceeds 1e-8 at either
/// end of [a, b], since the periodic wrap would then distort the pulse.
Problem gaussian_pulse_problem(double gamma, double alpha, double a = 0.0, double b = 6.0);

/// Lookup by CLI label: "ex4.1", "ex4.2", "ex4.3". The domain only applies to
/// "ex4.3". Throws std::invalid_argument on an unknown label.
Problem make_problem(const std::string& label, double gamma, double alpha, double a = 0.0, double b = 6.0);

}  // namespace tldg
