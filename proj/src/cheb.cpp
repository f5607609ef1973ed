#include "eftt/cheb.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eftt::cheb {

ChebGrid cheb_points(int n) {
    if (n < 1) throw std::invalid_argument("cheb_points: degree must be >= 1");
    ChebGrid g;
    g.degree = n;
    g.nodes.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        g.nodes[k] = std::cos(std::numbers::pi * k / n);
    }
    g.nodes[0] = 1.0;
    g.nodes[n] = -1.0;
    if (n % 2 == 0) g.nodes[n / 2] = 0.0;
    // force symmetric pairs to match bitwise
    for (int k = 0; k < (n + 1) / 2; ++k) g.nodes[n - k] = -g.nodes[k];
    return g;
}

double cheb_eval(const ChebCoeffs& c, double x) {
    if (c.coeffs.empty()) throw std::invalid_argument("cheb_eval: empty coefficients");
    if (x < -1.0 || x > 1.0) throw std::invalid_argument("cheb_eval: x outside [-1,1]");
    const auto& a = c.coeffs;
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(a.size()) - 1; k >= 1; --k) {
        double b0 = a[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return a[0] + x * b1 - b2;
}

Eigen::VectorXd cheb_basis_values(int n, double x) {
    Eigen::VectorXd t(n + 1);
    t(0) = 1.0;
    if (n >= 1) t(1) = x;
    for (int k = 2; k <= n; ++k) t(k) = 2.0 * x * t(k - 1) - t(k - 2);
    return t;
}

Eigen::MatrixXd dct_matrix(int n) {
    if (n < 1) throw std::invalid_argument("dct_matrix: degree must be >= 1");
    const ChebGrid g = cheb_points(n);
    Eigen::MatrixXd f(n + 1, n + 1);
    for (int j = 0; j <= n; ++j) {
        Eigen::VectorXd t = cheb_basis_values(n, g.nodes[j]);
        double wj = (j == 0 || j == n) ? 0.5 : 1.0;
        for (int i = 0; i <= n; ++i) {
            double wi = (i == 0 || i == n) ? 0.5 : 1.0;
            f(i, j) = (2.0 / n) * wi * wj * t(i);
        }
    }
    return f;
}

std::vector<double> cheb_integral_weights(int n) {
    if (n < 1) throw std::invalid_argument("cheb_integral_weights: degree must be >= 1");
    std::vector<double> w(n + 1, 0.0);
    for (int i = 0; i <= n; i += 2) {
        w[i] = 2.0 / (1.0 - static_cast<double>(i) * i);
    }
    return w;
}

std::optional<int> chop(const ChebCoeffs& c, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("chop: tol must be positive");
    if (c.coeffs.empty()) throw std::invalid_argument("chop: empty coefficients");
    const auto& a = c.coeffs;
    double cmax = 0.0;
    for (double v : a) cmax = std::max(cmax, std::abs(v));
    if (cmax == 0.0) return 0;
    // monotone (non-increasing) envelope of the scaled magnitudes
    std::vector<double> env(a.size());
    double running = 0.0;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) {
        running = std::max(running, std::abs(a[i]) / cmax);
        env[i] = running;
    }
    for (std::size_t i = 0; i < env.size(); ++i) {
        if (env[i] <= tol) return static_cast<int>(i);
    }
    return std::nullopt;
}

}  // namespace eftt::cheb
