#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace eftt::legendre {

/// P_k(x) by the forward three-term recurrence
/// (k+2) P_{k+2} = (2k+3) x P_{k+1} - (k+1) P_k.
double legendre_eval(int k, double x);

/// Vector of values (P_0(x), ..., P_m(x)).
Eigen::VectorXd legendre_basis_values(int m, double x);

/// Clenshaw-Curtis quadrature weights at the m+1 nodes cos(pi*i/m):
/// w_i = (c_i/m) (1 - sum_{j=1}^{floor(m/2)} b_j/(4j^2-1) cos(2 j i pi / m)),
/// c_i = 1 at the endpoints and 2 otherwise, b_j = 1 for j = m/2 and 2
/// otherwise. Weights are nonnegative and sum to 2. Requires m >= 2.
std::vector<double> cc_weights(int m);

/// Discrete L2 projection onto Legendre polynomials of degree <= m using
/// Clenshaw-Curtis quadrature in n+1 nodes: E(i,j) = ((2i+1)/2) w_j P_i(x_j)
/// with x_j = cos(pi*j/n). Shape (m+1) x (n+1); maps node values to
/// approximate Legendre coefficients. Requires n >= m.
Eigen::MatrixXd projection_matrix(int m, int n);

struct FiberAdaptResult {
    int degree = 0;
    std::vector<double> coeffs;   // degree+1 Legendre coefficients
    bool capped = false;          // degree cap reached before the decay test passed
};

/// Increase the target degree m (via m <- 2m+1) until the last four Legendre
/// coefficients, computed by projection with n = 2m quadrature nodes, are all
/// below tol in magnitude, or until m_max is reached (flagged).
FiberAdaptResult adapt_fiber_degree(const std::function<double(double)>& g, double tol,
                                    int m_start, int m_max = 105);

/// Integral of sum_i c_i P_i(x) over [-1,1] is 2*c_0: weights [2, 0, ..., 0].
std::vector<double> legendre_integral_weights(int m);

}  // namespace eftt::legendre
