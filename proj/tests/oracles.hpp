#pragma once

// Reference implementations used only by tests. They avoid the library's
// code paths on purpose: Legendre values come from std::legendre, Gamma from
// std::tgamma, operators are assembled from the bilinear-form definition
// pair by pair, and the time-stepping solves the full coupled (u, p) system
// with a dense LU instead of the eliminated SPD system.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tldg/mesh.hpp"

namespace oracle {

/// P_m(xi) and P_m'(xi) without the library's recurrence.
double legendre(int m, double xi);
double legendre_derivative(int m, double xi);

/// Full (not assumed diagonal) mass matrix by quadrature.
Eigen::MatrixXd mass(const tldg::Mesh1D& mesh, int k);

/// A_delta with w^T A u = G_delta(u; w), assembled from the definition for
/// every (trial, test) basis pair.
Eigen::MatrixXd flux_matrix(const tldg::Mesh1D& mesh, int k, double delta);

/// Classical L1 approximation of the Caputo derivative at t_n (gamma = 0):
///   tau^{-alpha}/Gamma(2-alpha) sum_{j=0}^{n-1} b_j (g_{n-j} - g_{n-j-1}).
double l1_caputo(double alpha, double tau, const std::vector<double>& g);

/// Tempered L1 derived from D^{alpha,gamma} g = e^{-gamma t} D^alpha (e^{gamma t} g):
/// the classical L1 sum applied to e^{gamma t_i} g_i, then damped.
double l1_tempered(double alpha, double gamma, double tau, const std::vector<double>& g);

/// Exact tempered Caputo derivative of e^{-gamma t} t^2.
double tempered_derivative_t2(double alpha, double gamma, double t);

struct Trajectory {
    std::vector<Eigen::VectorXd> u;  ///< u^0..u^M
    std::vector<Eigen::VectorXd> p;
};

/// Monolithic stepper: at every level solve
///   [ (rho+mu) M   A_{1-delta} ] [u]   [ mu M h^n + F^n ]
///   [ A_delta      M           ] [p] = [ 0              ]
/// with a dense LU. F^n uses a q-point Gauss rule per cell.
Trajectory coupled_solve(const tldg::Mesh1D& mesh, int k, double delta, double alpha, double gamma, double rho,
                         double final_time, int steps, const Eigen::VectorXd& u0,
                         const std::function<double(double, double)>& forcing, int quad_points);

/// Seeded helpers for hand-rolled property tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    std::vector<double> vec(std::size_t n, double lo = -1.0, double hi = 1.0) {
        std::vector<double> v(n);
        for (double& x : v) x = uniform(lo, hi);
        return v;
    }
    std::uint64_t next() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace oracle
