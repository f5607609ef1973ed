#include "eftt/legendre.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "eftt/cheb.hpp"

namespace eftt::legendre {

double legendre_eval(int k, double x) {
    if (k < 0) throw std::invalid_argument("legendre_eval: negative degree");
    double p0 = 1.0;
    if (k == 0) return p0;
    double p1 = x;
    for (int j = 0; j + 2 <= k; ++j) {
        double p2 = ((2.0 * j + 3.0) * x * p1 - (j + 1.0) * p0) / (j + 2.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

Eigen::VectorXd legendre_basis_values(int m, double x) {
    Eigen::VectorXd p(m + 1);
    p(0) = 1.0;
    if (m >= 1) p(1) = x;
    for (int j = 0; j + 2 <= m; ++j) {
        p(j + 2) = ((2.0 * j + 3.0) * x * p(j + 1) - (j + 1.0) * p(j)) / (j + 2.0);
    }
    return p;
}

std::vector<double> cc_weights(int m) {
    if (m < 2) throw std::invalid_argument("cc_weights: need m >= 2");
    std::vector<double> w(m + 1);
    const int half = m / 2;
    for (int i = 0; i <= m; ++i) {
        double ci = (i == 0 || i == m) ? 1.0 : 2.0;
        double sum = 0.0;
        for (int j = 1; j <= half; ++j) {
            double bj = (2 * j == m) ? 1.0 : 2.0;
            sum += bj / (4.0 * j * j - 1.0) * std::cos(2.0 * j * i * std::numbers::pi / m);
        }
        w[i] = ci / m * (1.0 - sum);
    }
    return w;
}

Eigen::MatrixXd projection_matrix(int m, int n) {
    if (n < m) throw std::invalid_argument("projection_matrix: need n >= m");
    const auto grid = cheb::cheb_points(n);
    const auto w = cc_weights(n);
    Eigen::MatrixXd e(m + 1, n + 1);
    for (int j = 0; j <= n; ++j) {
        Eigen::VectorXd p = legendre_basis_values(m, grid.nodes[j]);
        for (int i = 0; i <= m; ++i) {
            e(i, j) = (2.0 * i + 1.0) / 2.0 * w[j] * p(i);
        }
    }
    return e;
}

FiberAdaptResult adapt_fiber_degree(const std::function<double(double)>& g, double tol,
                                    int m_start, int m_max) {
    if (tol <= 0.0) throw std::invalid_argument("adapt_fiber_degree: tol must be positive");
    int m = std::min(std::max(m_start, 2), m_max);
    while (true) {
        int n = 2 * m;
        const auto grid = cheb::cheb_points(n);
        Eigen::VectorXd vals(n + 1);
        for (int j = 0; j <= n; ++j) vals(j) = g(grid.nodes[j]);
        Eigen::VectorXd coeffs = projection_matrix(m, n) * vals;
        bool decayed = m >= 3;
        for (int i = m - 3; decayed && i <= m; ++i) {
            if (std::abs(coeffs(i)) >= tol) decayed = false;
        }
        if (decayed || m >= m_max) {
            FiberAdaptResult r;
            r.degree = m;
            r.coeffs.assign(coeffs.data(), coeffs.data() + m + 1);
            r.capped = !decayed;
            return r;
        }
        m = std::min(2 * m + 1, m_max);
    }
}

std::vector<double> legendre_integral_weights(int m) {
    if (m < 0) throw std::invalid_argument("legendre_integral_weights: negative degree");
    std::vector<double> w(m + 1, 0.0);
    w[0] = 2.0;
    return w;
}

}  // namespace eftt::legendre
