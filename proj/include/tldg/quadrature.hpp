#pragma once

#include <span>
#include <vector>

namespace tldg {

/// Gauss-Legendre rule on the reference interval [-1, 1].
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// q-point Gauss-Legendre rule, 1 <= q <= 32. Nodes come from Newton
/// iteration on the roots of P_q started from Chebyshev guesses.
QuadRule gauss_legendre(int q);

/// Volume quadrature order used for assembly, projection and error norms.
inline int default_quad_order(int degree) { return degree + 2 > 6 ? degree + 2 : 6; }

struct LegendreValues {
    std::vector<double> values;
    std::vector<double> derivatives;
};

/// P_0..P_k and P_0'..P_k' at xi in [-1, 1] by the three-term recurrence.
LegendreValues legendre_eval(int k, double xi);

/// Non-allocating form; both spans must hold k+1 entries.
void legendre_eval(int k, double xi, std::span<double> values, std::span<double> derivatives);

/// Legendre modes 0..k tabulated at the nodes of a quadrature rule and at
/// the two cell endpoints. Cells map affinely onto [-1, 1] so the same
/// table serves every cell of a mesh.
class LegendreBasis {
public:
    LegendreBasis(int degree, const QuadRule& rule);

    int degree() const { return degree_; }
    int modes() const { return degree_ + 1; }
    const QuadRule& rule() const { return rule_; }

    /// P_m at quadrature node q.
    double value(int q, int m) const { return values_[q * modes() + m]; }
    /// P_m' (reference derivative) at quadrature node q.
    double derivative(int q, int m) const { return derivs_[q * modes() + m]; }

    /// P_m(-1) = (-1)^m and P_m(+1) = 1.
    static double left_trace(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }
    static double right_trace(int) { return 1.0; }

    /// Reference mass entry: integral of P_m^2 over [-1, 1].
    static double reference_mass(int m) { return 2.0 / (2.0 * m + 1.0); }

private:
    int degree_;
    QuadRule rule_;
    std::vector<double> values_;
    std::vector<double> derivs_;
};

}  // namespace tldg
