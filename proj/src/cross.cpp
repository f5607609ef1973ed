#include "eftt/cross.hpp"

#include <Eigen/LU>
#include <cmath>

namespace eftt::cross {

namespace {

int argmax_abs(const Eigen::VectorXd& v) {
    int best = 0;
    double best_abs = std::abs(v(0));
    for (int i = 1; i < v.size(); ++i) {
        double a = std::abs(v(i));
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    return best;
}

}  // namespace

std::vector<int> deim(const Eigen::MatrixXd& q) {
    const int n = static_cast<int>(q.rows());
    const int m = static_cast<int>(q.cols());
    if (m == 0 || m > n) throw std::invalid_argument("deim: need 1 <= cols <= rows");

    std::vector<int> sel;
    sel.reserve(m);
    sel.push_back(argmax_abs(q.col(0)));
    for (int k = 1; k < m; ++k) {
        Eigen::MatrixXd qi(k, k);
        Eigen::VectorXd rhs(k);
        for (int p = 0; p < k; ++p) {
            for (int c = 0; c < k; ++c) qi(p, c) = q(sel[p], c);
            rhs(p) = q(sel[p], k);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(qi);
        if (!lu.isInvertible())
            throw std::runtime_error("deim: interpolation block is singular (rank-deficient input)");
        Eigen::VectorXd c = lu.solve(rhs);
        Eigen::VectorXd r = q.col(k) - q.leftCols(k) * c;
        sel.push_back(argmax_abs(r));
    }
    return sel;
}

}  // namespace eftt::cross
