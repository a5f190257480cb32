#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "tldg/problems.hpp"
#include "tldg/tempered_time.hpp"

using namespace tldg;

namespace {

constexpr double kPi = std::numbers::pi;

// fourth-order central difference for u_xx
double uxx(const SpaceTimeFn& u, double x, double t, double h = 1e-3) {
    return (-u(x + 2 * h, t) + 16 * u(x + h, t) - 30 * u(x, t) + 16 * u(x - h, t) - u(x - 2 * h, t)) / (12 * h * h);
}

// PDE residual at (x, t) with the time derivative replaced by the L1 sum on n steps
double residual(const Problem& p, double x, double t, int n) {
    const double tau = t / n;
    const auto w = build_weights(p.alpha, p.gamma, tau, n);
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = p.exact(x, i * tau);
    const double dt = tempered_derivative_scalar(w, g);
    return dt + p.rho * p.exact(x, t) - uxx(p.exact, x, t) - p.forcing(x, t);
}

void check_consistency(const Problem& p, std::uint64_t seed) {
    oracle::Rng rng(seed);
    const double target = std::pow(2.0, 2.0 - p.alpha);
    for (int trial = 0; trial < 20; ++trial) {
        const double x = rng.uniform(p.a + 0.01, p.b - 0.01);
        const double t = rng.uniform(0.2, 1.0);
        const double r1 = residual(p, x, t, 40);
        const double r2 = residual(p, x, t, 80);
        CAPTURE(x);
        CAPTURE(t);
        CHECK(std::abs(r2) < 1e-2);
        if (std::abs(r2) > 1e-7) {
            CHECK(std::abs(r1 / r2) > 0.8 * target);
            CHECK(std::abs(r1 / r2) < 1.2 * target);
        }
    }
}

}  // namespace

TEST_CASE("example 4.1 values") {
    const auto p = sine_manufactured_problem(2.0, 0.5);
    CHECK(p.label == "ex4.1");
    CHECK(p.a == 0.0);
    CHECK(p.b == 1.0);
    CHECK(p.rho == 0.0);
    for (double x : {0.0, 0.13, 0.5, 0.77}) {
        CHECK(p.exact(x, 0.0) == 0.0);
        CHECK(p.initial(x) == 0.0);
    }
    const double f = std::exp(-2.0) * (2.0 / (0.75 * std::sqrt(kPi)) + 4.0 * kPi * kPi);
    CHECK(std::abs(p.forcing(0.25, 1.0) - f) < 1e-12);
    CHECK(std::abs(p.forcing(0.25, 1.0) - 5.5464) < 1e-4);
    CHECK(std::abs(p.exact(0.25, 1.0) - 0.1353353) < 1e-7);
}

TEST_CASE("example 4.2 values") {
    const auto p = polynomial_reaction_problem(2.0, 0.5);
    CHECK(p.label == "ex4.2");
    CHECK(p.rho == 1.0);
    CHECK(std::abs(p.exact(0.5, 1.0) - std::exp(-2.0) * 0.0625) < 1e-15);
    CHECK(std::abs(p.exact(0.5, 1.0) - 8.4585e-3) < 1e-7);
    for (double x : {0.0, 0.4, 1.0}) CHECK(p.initial(x) == 0.0);

    // d^2/dx^2 [x^2 (1-x)^2] = 2 - 12x + 12x^2, at 0 this is 2
    auto spatial = [](double x, double) { return x * x * (1 - x) * (1 - x); };
    CHECK(std::abs((spatial(1e-5, 0) - 2 * spatial(0, 0) + spatial(-1e-5, 0)) / 1e-10 - 2.0) < 1e-4);
    // the forcing carries that factor: at t = 1, x = 0 only the -t^2 (2 - 12x + 12x^2) part survives
    CHECK(std::abs(p.forcing(0.0, 1.0) + std::exp(-2.0) * 2.0) < 1e-14);
}

TEST_CASE("example 4.3 values and warnings") {
    const auto p = gaussian_pulse_problem(2.0, 0.5);
    CHECK(p.label == "ex4.3");
    CHECK_FALSE(p.has_exact());
    CHECK(p.initial(3.0) == 1.0);
    CHECK(std::abs(p.initial(1.0) - std::exp(-20.0)) < 1e-22);
    CHECK(std::abs(p.initial(5.0) - 2.06e-9) < 1e-11);
    CHECK(p.initial(0.0) < 1e-19);
    CHECK(p.initial(6.0) < 1e-19);
    CHECK(p.warnings.empty());
    CHECK(p.forcing == nullptr);

    const auto tight = gaussian_pulse_problem(2.0, 0.5, 1.5, 4.5);
    CHECK_FALSE(tight.warnings.empty());
}

TEST_CASE("lookup by label") {
    CHECK(make_problem("ex4.1", 2.0, 0.5).label == "ex4.1");
    CHECK(make_problem("ex4.2", 2.0, 0.5).rho == 1.0);
    const auto g = make_problem("ex4.3", 1.0, 0.3, -1.0, 7.0);
    CHECK(g.a == -1.0);
    CHECK(g.b == 7.0);
    CHECK_THROWS_AS(make_problem("ex9", 2.0, 0.5), std::invalid_argument);
}

TEST_CASE("exact solutions match the initial data") {
    oracle::Rng rng(3);
    for (const auto& p : {sine_manufactured_problem(1.0, 0.2), polynomial_reaction_problem(3.0, 0.8)}) {
        for (int i = 0; i < 20; ++i) {
            const double x = rng.uniform(0.0, 1.0);
            CHECK(std::abs(p.exact(x, 0.0) - p.initial(x)) < 1e-13);
        }
    }
}

TEST_CASE("manufactured forcing is consistent with the PDE") {
    for (double alpha : {0.3, 0.5, 0.8}) {
        for (double gamma : {0.0, 2.0}) {
            CAPTURE(alpha);
            CAPTURE(gamma);
            check_consistency(sine_manufactured_problem(gamma, alpha), 10);
            check_consistency(polynomial_reaction_problem(gamma, alpha), 20);
        }
    }
}

TEST_CASE("residual at the spec point shrinks at order 2 - alpha") {
    const auto p = polynomial_reaction_problem(2.0, 0.5);
    const double r1 = residual(p, 0.3, 0.7, 50);
    const double r2 = residual(p, 0.3, 0.7, 100);
    const double r3 = residual(p, 0.3, 0.7, 200);
    CHECK(std::abs(std::log2(r1 / r2) - 1.5) < 0.15);
    CHECK(std::abs(std::log2(r2 / r3) - 1.5) < 0.15);
}
