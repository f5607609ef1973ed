#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace eftt::cheb {

/// Chebyshev grid of the second kind: nodes cos(pi*k/n), k = 0..n.
/// Endpoints are set exactly to +-1 and the midpoint (even n) exactly to 0,
/// so symmetric node pairs match bitwise.
struct ChebGrid {
    int degree = 0;                // polynomial degree n, grid has n+1 nodes
    std::vector<double> nodes;     // strictly decreasing, nodes[0] = 1, nodes[n] = -1
};

/// Coefficients of a Chebyshev expansion; entry i multiplies T_i.
struct ChebCoeffs {
    std::vector<double> coeffs;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Nodes cos(pi*k/n). Requires n >= 1.
ChebGrid cheb_points(int n);

/// Evaluate sum_i c_i T_i(x) by the Clenshaw backward recurrence. Requires x in [-1,1].
double cheb_eval(const ChebCoeffs& c, double x);

/// Vector of values (T_0(x), ..., T_n(x)).
Eigen::VectorXd cheb_basis_values(int n, double x);

/// Transform from node values to Chebyshev coefficients:
/// F(i,j) = (2/n) * w_i * w_j * T_i(x_j) with w = 1/2 at the border indices
/// 0 and n, and 1 otherwise. For a polynomial p of degree <= n, F applied to
/// (p(x_0), ..., p(x_n)) yields its Chebyshev coefficients.
Eigen::MatrixXd dct_matrix(int n);

/// Weights w with sum_i w_i c_i = integral over [-1,1] of sum_i c_i T_i(x):
/// w_i = 2/(1-i^2) for even i, 0 for odd i.
std::vector<double> cheb_integral_weights(int n);

/// Coefficient-decay chopping heuristic. Builds the monotone envelope of
/// |c_i| / max|c| and returns the first degree at which the envelope has
/// dropped to tol or below; nullopt when the sequence never plateaus.
/// An all-zero sequence resolves at degree 0. Requires tol > 0 and a
/// nonempty coefficient vector.
std::optional<int> chop(const ChebCoeffs& c, double tol);

}  // namespace eftt::cheb
