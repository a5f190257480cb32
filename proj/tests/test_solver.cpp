#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "oracles.hpp"
#include "tldg/errors.hpp"
#include "tldg/solver.hpp"
#include "tldg/study.hpp"

using namespace tldg;

namespace {

SchemeConfig ex41_config(double alpha, double delta, int k, int cells, int steps) {
    SchemeConfig c;
    c.alpha = alpha;
    c.gamma = 2.0;
    c.rho = 0.0;
    c.delta = delta;
    c.degree = k;
    c.mesh.cells = cells;
    c.steps = steps;
    c.final_time = 1.0;
    return c;
}

double l2_at_final(const SchemeConfig& c, const Problem& p) {
    const auto r = solve_to_final(c, p);
    const double t = c.final_time;
    return error_norms(r.u, [&](double x) { return p.exact(x, t); }).l2;
}

double max_diff(std::span<const double> a, const Eigen::VectorXd& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[static_cast<Eigen::Index>(i)]));
    return m;
}

}  // namespace

TEST_CASE("config validation") {
    SchemeConfig c;
    CHECK_NOTHROW(c.validate());
    auto bad = [&](auto mutate) {
        SchemeConfig b;
        mutate(b);
        CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    };
    bad([](SchemeConfig& b) { b.delta = 0.5; });
    bad([](SchemeConfig& b) { b.alpha = 1.0; });
    bad([](SchemeConfig& b) { b.alpha = 0.0; });
    bad([](SchemeConfig& b) { b.gamma = -0.1; });
    bad([](SchemeConfig& b) { b.rho = -1.0; });
    bad([](SchemeConfig& b) { b.steps = 0; });
    bad([](SchemeConfig& b) { b.final_time = 0.0; });
    bad([](SchemeConfig& b) { b.degree = -1; });
    bad([](SchemeConfig& b) { b.mesh.cells = 1; });
}

TEST_CASE("system matrix on three cells matches hand assembly") {
    for (double rho : {0.0, 2.5}) {
        SchemeConfig c;
        c.alpha = 0.4;
        c.gamma = 1.0;
        c.rho = rho;
        c.delta = 0.0;
        c.degree = 0;
        c.mesh.cells = 3;
        c.steps = 10;
        const Solver s(c, std::vector<double>(3, 0.0));
        const double mu = std::pow(0.1, -0.4) / std::tgamma(1.6);
        Eigen::Matrix3d hand;
        hand << 2, -1, -1,
               -1, 2, -1,
               -1, -1, 2;
        hand *= 3.0;
        hand += (rho + mu) / 3.0 * Eigen::Matrix3d::Identity();
        const Eigen::MatrixXd lib(s.system().matrix());
        CHECK((lib - hand).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("system matrix is SPD even with rho = 0") {
    oracle::Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        SchemeConfig c;
        c.alpha = rng.uniform(0.05, 0.95);
        c.gamma = rng.uniform(0.0, 10.0);
        c.delta = rng.uniform(0.0, 1.0);
        if (std::abs(c.delta - 0.5) < 0.01) c.delta = 0.1;
        c.degree = rng.integer(0, 3);
        c.mesh.cells = rng.integer(3, 40);
        c.mesh.kind = MeshKind::perturbed;
        c.mesh.seed = rng.next();
        c.steps = 5;
        c.final_time = std::pow(10.0, rng.uniform(-2.0, 2.0));
        const Solver s(c, std::vector<double>(c.mesh.cells * (c.degree + 1), 0.0));
        CHECK(s.system().min_pivot() > 0.0);
        CHECK(s.system().asymmetry() <= 1e-12);
    }
}

TEST_CASE("halving tau scales mu by 2^alpha") {
    for (double alpha : {0.1, 0.5, 0.9}) {
        const auto w1 = build_weights(alpha, 1.0, 0.01, 100);
        const auto w2 = build_weights(alpha, 1.0, 0.005, 200);
        CHECK(std::abs(w2.mu / w1.mu - std::pow(2.0, alpha)) < 1e-14);
    }
}

TEST_CASE("zero initial data and zero forcing stay zero") {
    auto c = ex41_config(0.5, 0.3, 2, 8, 20);
    Solver s(c, std::vector<double>(24, 0.0));
    for (int n = 0; n < 20; ++n) s.step();
    for (int n = 0; n <= 20; ++n) {
        for (double v : s.u_coeffs(n)) CHECK(v == 0.0);
    }
    for (double v : s.p_coeffs()) CHECK(v == 0.0);
}

TEST_CASE("first step never increases the norm") {
    oracle::Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        SchemeConfig c;
        c.alpha = rng.uniform(0.05, 0.95);
        c.gamma = rng.uniform(0.0, 10.0);
        c.delta = rng.integer(0, 1) ? 0.2 : 1.0;
        c.degree = rng.integer(0, 2);
        c.mesh.cells = 12;
        c.steps = 1;
        c.final_time = std::pow(10.0, rng.uniform(-3.0, 1.0));
        Solver s(c, rng.vec(12 * (c.degree + 1)));
        s.step();
        CHECK(s.norms()[1] <= s.norms()[0] * (1.0 + 1e-12));
    }
}

TEST_CASE("stability mode asserts the norm bound over many steps") {
    auto c = ex41_config(0.9, 1.0, 2, 16, 200);
    c.final_time = 2000.0;
    c.gamma = 10.0;
    c.check_stability = true;
    Solver s(c, random_coefficients(48, 5));
    for (int n = 0; n < 200; ++n) CHECK_NOTHROW(s.step());
    for (double v : s.norms()) CHECK(v <= s.norms()[0] * (1.0 + 1e-12));
}

TEST_CASE("p is -M^{-1} A u after every step") {
    auto c = ex41_config(0.3, 0.1, 1, 6, 4);
    const auto p41 = sine_manufactured_problem(2.0, 0.3);
    Solver s(c, random_coefficients(12, 9));
    for (int n = 0; n < 4; ++n) {
        s.step(p41.forcing);
        std::vector<double> au(12), expect(12);
        s.flux().apply(s.u_coeffs(s.step_index()), au);
        s.mass().apply_inverse(au, expect);
        for (int i = 0; i < 12; ++i) CHECK(std::abs(s.p_coeffs()[i] + expect[i]) < 1e-13);
    }
}

TEST_CASE("oracle equivalence with the coupled monolithic solve") {
    const auto problem = sine_manufactured_problem(2.0, 0.4);
    oracle::Rng rng(2718);
    for (int cells : {3, 5, 8}) {
        for (int k : {0, 1, 2}) {
            for (int steps : {1, 5, 20}) {
                for (bool random_start : {false, true}) {
                    auto c = ex41_config(0.4, 0.3, k, cells, steps);
                    const std::size_t n = static_cast<std::size_t>(cells) * (k + 1);
                    Solver s = random_start ? Solver(c, rng.vec(n)) : Solver(c, problem.initial);
                    const std::vector<double> u0(s.u_coeffs(0).begin(), s.u_coeffs(0).end());
                    const auto ref = oracle::coupled_solve(*s.mesh(), k, c.delta, c.alpha, c.gamma, c.rho, c.final_time,
                                                           steps, Eigen::Map<const Eigen::VectorXd>(u0.data(), n),
                                                           problem.forcing, c.effective_quad_order());
                    CAPTURE(cells);
                    CAPTURE(k);
                    CAPTURE(steps);
                    CAPTURE(random_start);
                    CHECK(max_diff(s.p_coeffs(), ref.p[0]) < 1e-10);
                    double worst_u = 0.0, worst_p = 0.0;
                    for (int level = 1; level <= steps; ++level) {
                        s.step(problem.forcing);
                        worst_u = std::max(worst_u, max_diff(s.u_coeffs(level), ref.u[level]));
                        worst_p = std::max(worst_p, max_diff(s.p_coeffs(), ref.p[level]));
                    }
                    CHECK(worst_u < 1e-10);
                    CHECK(worst_p < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("dense and sparse factorizations agree") {
    const auto problem = polynomial_reaction_problem(2.0, 0.5);
    auto c = ex41_config(0.5, 0.6, 2, 30, 40);
    c.rho = 1.0;
    auto sparse = c;
    sparse.dense_limit = 0;
    auto dense = c;
    dense.dense_limit = 100000;
    const auto a = solve_to_final(sparse, problem);
    const auto b = solve_to_final(dense, problem);
    CHECK_FALSE(a.diagnostics.dense_factorization);
    CHECK(b.diagnostics.dense_factorization);
    for (std::size_t i = 0; i < a.u.size(); ++i) CHECK(std::abs(a.u.coeffs()[i] - b.u.coeffs()[i]) < 1e-12);
}

TEST_CASE("serial and parallel execution give identical coefficients") {
    const auto problem = sine_manufactured_problem(2.0, 0.6);
    auto c = ex41_config(0.6, 0.3, 2, 20, 50);
    auto serial = c;
    serial.exec = Exec::serial;
    const auto a = solve_to_final(c, problem);
    const auto b = solve_to_final(serial, problem);
    for (std::size_t i = 0; i < a.u.size(); ++i) CHECK(a.u.coeffs()[i] == b.u.coeffs()[i]);
}

TEST_CASE("M = 1 equals one step call") {
    const auto problem = sine_manufactured_problem(2.0, 0.5);
    auto c = ex41_config(0.5, 0.3, 1, 10, 1);
    const auto r = solve_to_final(c, problem);
    Solver s(c, problem.initial);
    s.step(problem.forcing);
    for (std::size_t i = 0; i < r.u.size(); ++i) CHECK(r.u.coeffs()[i] == s.u_coeffs(1)[i]);
    CHECK(r.diagnostics.norms.size() == 2);
}

TEST_CASE("solve_to_final rejects a mismatched problem") {
    const auto problem = sine_manufactured_problem(2.0, 0.5);
    auto c = ex41_config(0.3, 0.3, 1, 10, 10);  // alpha differs
    CHECK_THROWS_AS(solve_to_final(c, problem), std::invalid_argument);
}

TEST_CASE("example 4.1 error magnitudes") {
    // k=0, N=5, delta=0.3, alpha=0.1: paper 3.600997655347402e-2
    {
        const auto p = sine_manufactured_problem(2.0, 0.1);
        const double e = l2_at_final(ex41_config(0.1, 0.3, 0, 5, 1000), p);
        CHECK(e > 3.60e-2 / 2.0);
        CHECK(e < 3.60e-2 * 2.0);
    }
    // k=1, N=40, delta=0.1, alpha=0.1: paper 1.436832777579926e-4, order 2.00
    {
        const auto p = sine_manufactured_problem(2.0, 0.1);
        const double e20 = l2_at_final(ex41_config(0.1, 0.1, 1, 20, 1000), p);
        const double e40 = l2_at_final(ex41_config(0.1, 0.1, 1, 40, 1000), p);
        CHECK(e40 > 1.44e-4 / 2.0);
        CHECK(e40 < 1.44e-4 * 2.0);
        CHECK(std::abs(std::log2(e20 / e40) - 2.0) < 0.15);
    }
}

TEST_CASE("example 4.2 spot value") {
    const auto p = polynomial_reaction_problem(2.0, 0.3);
    auto c = ex41_config(0.3, 0.2, 2, 10, 1000);
    c.rho = 1.0;
    const double e = l2_at_final(c, p);
    CHECK(e > 4.2426e-6 / 2.0);
    CHECK(e < 4.2426e-6 * 2.0);
}

TEST_CASE("example 4.3 stays bounded by the initial norm") {
    const auto p = gaussian_pulse_problem(2.0, 0.5);
    SchemeConfig c;
    c.alpha = 0.5;
    c.gamma = 2.0;
    c.delta = 0.2;
    c.degree = 2;
    c.mesh.a = 0.0;
    c.mesh.b = 6.0;
    c.mesh.cells = 60;
    c.steps = 200;
    c.final_time = 1.0;
    c.check_stability = true;
    const auto r = solve_to_final(c, p);
    const double n0 = r.diagnostics.norms.front();
    CHECK(n0 > 0.0);
    for (double v : r.diagnostics.norms) CHECK(v <= n0 * (1.0 + 1e-12));
    CHECK(r.diagnostics.max_backward_error <= 1e-12);
}
