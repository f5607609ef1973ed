#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <type_traits>
#include <unordered_set>
#include <vector>

#include "eftt/tensor.hpp"

namespace eftt::cross {

/// Row/column skeleton of a cross approximation M(:,J) M(I,J)^{-1} M(I,:).
/// Column identifiers are a template parameter so that matricizations whose
/// column space does not fit in 63 bits remain addressable.
template <class Col>
struct CrossSkeleton {
    std::vector<Index> rows;
    std::vector<Col> cols;
    Eigen::MatrixXd pivot_block;                 // M(I,J)
    Eigen::FullPivLU<Eigen::MatrixXd> pivot_lu;  // factorization of pivot_block

    int rank() const { return static_cast<int>(rows.size()); }
    void refactor() { pivot_lu.compute(pivot_block); }
};

struct AcaOptions {
    double tol = 1e-10;
    int samples = 50;
    int max_new = -1;                 // cap on pivots added beyond the initial skeleton; <0 = none
    double pivot_rel_floor = 1e-14;   // reject pivots below this fraction of the largest accepted pivot
    int max_rounds_without_progress = 8;
    bool rook = false;  // refine the sampled pivot to a row/column residual maximum;
                        // requires integer column indices (enumerable columns)
};

namespace detail {

inline bool col_less(Index a, Index b) { return a < b; }
inline bool col_less(const MultiIndex& a, const MultiIndex& b) { return a < b; }

template <class Oracle, class Col>
double residual_at(const Oracle& m, const CrossSkeleton<Col>& sk, Index i, const Col& j,
                   double* raw = nullptr) {
    double mij = m.entry(i, j);
    if (raw) *raw = mij;
    const int k = sk.rank();
    if (k == 0) return mij;
    Eigen::RowVectorXd row(k);
    Eigen::VectorXd col(k);
    for (int p = 0; p < k; ++p) {
        row(p) = m.entry(i, sk.cols[p]);
        col(p) = m.entry(sk.rows[p], j);
    }
    return mij - row * sk.pivot_lu.solve(col);
}

}  // namespace detail

/// Cross approximation with randomized pivoting. Each round samples up to
/// `samples` index pairs outside the pivot rows/columns (without replacement
/// within the round), stops when the largest sampled residual is at or below
/// tol * max(1, largest |entry| seen), and otherwise promotes the argmax pair
/// to a pivot (ties to the smallest (row, column)). With an initial skeleton
/// the output keeps its indices as a prefix. Pivots whose residual magnitude
/// falls below pivot_rel_floor times the largest accepted pivot are rejected
/// and resampled; persistent rejection raises an error.
template <class Oracle>
CrossSkeleton<typename Oracle::col_type> aca_random(
    const Oracle& m, const AcaOptions& opt, std::mt19937_64& rng,
    const CrossSkeleton<typename Oracle::col_type>* init = nullptr) {
    using Col = typename Oracle::col_type;
    if (opt.tol <= 0.0) throw std::invalid_argument("aca_random: tol must be positive");
    if (opt.samples < 1) throw std::invalid_argument("aca_random: need at least one sample");

    CrossSkeleton<Col> sk;
    if (init) {
        sk = *init;
        if (sk.rank() > 0 && sk.pivot_lu.rank() < sk.rank()) sk.refactor();
    }
    std::unordered_set<Index> used_rows(sk.rows.begin(), sk.rows.end());
    std::set<Col> used_cols(sk.cols.begin(), sk.cols.end());

    const Index n_rows = m.rows();
    double scale = 0.0;
    double max_pivot = 0.0;
    int added = 0;
    int stale_rounds = 0;

    std::uniform_int_distribution<Index> row_dist(0, n_rows - 1);

    while (true) {
        if (static_cast<Index>(used_rows.size()) >= n_rows) return sk;  // residual vanishes on pivot rows

        // sample distinct pairs avoiding pivot rows/columns
        std::vector<std::pair<Index, Col>> pairs;
        std::set<std::pair<Index, Col>> seen;
        int attempts = 0;
        const int attempt_cap = opt.samples * 64;
        while (static_cast<int>(pairs.size()) < opt.samples && attempts < attempt_cap) {
            ++attempts;
            Index i = row_dist(rng);
            Col j = m.random_col(rng);
            if (used_rows.count(i) || used_cols.count(j)) continue;
            auto key = std::make_pair(i, j);
            if (!seen.insert(key).second) continue;
            pairs.push_back(std::move(key));
        }
        if (pairs.empty()) return sk;  // index space exhausted outside the pivots

        double best_abs = -1.0;
        std::size_t best = 0;
        double max_abs_res = 0.0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            double raw = 0.0;
            double r = detail::residual_at(m, sk, pairs[p].first, pairs[p].second, &raw);
            scale = std::max(scale, std::abs(raw));
            double a = std::abs(r);
            max_abs_res = std::max(max_abs_res, a);
            if (a > best_abs ||
                (a == best_abs && (pairs[p].first < pairs[best].first ||
                                   (pairs[p].first == pairs[best].first &&
                                    detail::col_less(pairs[p].second, pairs[best].second))))) {
                best_abs = a;
                best = p;
            }
        }

        const double tol_eff = opt.tol * std::max(1.0, scale);
        if (max_abs_res <= tol_eff) return sk;

        // Rook refinement: purely random pivots degrade the conditioning of
        // the pivot block as the rank grows; alternating climbs to the
        // residual maximum of the pivot's column and row restore the quality
        // of partial pivoting at enumerable-index cost.
        if constexpr (std::is_same_v<Col, Index>) {
            if (opt.rook) {
                Index bi = pairs[best].first;
                Col bj = pairs[best].second;
                const Index n_cols = m.cols();
                for (int round = 0; round < 4; ++round) {
                    Index next_i = bi;
                    double col_best = -1.0;
                    for (Index i = 0; i < n_rows; ++i) {
                        if (used_rows.count(i)) continue;
                        double a = std::abs(detail::residual_at(m, sk, i, bj));
                        if (a > col_best) col_best = a, next_i = i;
                    }
                    Col next_j = bj;
                    double row_best = -1.0;
                    for (Index j = 0; j < n_cols; ++j) {
                        if (used_cols.count(j)) continue;
                        double a = std::abs(detail::residual_at(m, sk, next_i, j));
                        if (a > row_best) row_best = a, next_j = j;
                    }
                    bool settled = next_i == bi && next_j == bj;
                    bi = next_i;
                    bj = next_j;
                    best_abs = row_best;
                    if (settled) break;
                }
                pairs[best] = {bi, bj};
            }
        }

        if (max_pivot > 0.0 && best_abs < opt.pivot_rel_floor * max_pivot) {
            if (++stale_rounds >= opt.max_rounds_without_progress)
                throw std::runtime_error("aca_random: could not find a numerically acceptable pivot");
            continue;
        }
        stale_rounds = 0;

        const auto& [pi, pj] = pairs[best];
        const int k = sk.rank();
        Eigen::MatrixXd block(k + 1, k + 1);
        block.topLeftCorner(k, k) = sk.pivot_block;
        for (int p = 0; p < k; ++p) {
            block(p, k) = m.entry(sk.rows[p], pj);
            block(k, p) = m.entry(pi, sk.cols[p]);
        }
        block(k, k) = m.entry(pi, pj);
        sk.rows.push_back(pi);
        sk.cols.push_back(pj);
        sk.pivot_block = std::move(block);
        sk.refactor();
        used_rows.insert(pi);
        used_cols.insert(pj);
        max_pivot = std::max(max_pivot, best_abs);
        ++added;
        if (opt.max_new >= 0 && added >= opt.max_new) return sk;
    }
}

/// Value of the cross approximation M(i,J) M(I,J)^{-1} M(I,j); zero for an
/// empty skeleton.
template <class Oracle>
double skeleton_entry(const Oracle& m, const CrossSkeleton<typename Oracle::col_type>& sk,
                      Index i, const typename Oracle::col_type& j) {
    const int k = sk.rank();
    if (k == 0) return 0.0;
    Eigen::RowVectorXd row(k);
    Eigen::VectorXd col(k);
    for (int p = 0; p < k; ++p) {
        row(p) = m.entry(i, sk.cols[p]);
        col(p) = m.entry(sk.rows[p], j);
    }
    return row * sk.pivot_lu.solve(col);
}

/// Dense matrix as an entry oracle (flat integer columns).
class DenseOracle {
  public:
    using col_type = Index;
    explicit DenseOracle(const Eigen::MatrixXd& m) : m_(&m) {}
    Index rows() const { return m_->rows(); }
    Index cols() const { return m_->cols(); }
    double entry(Index i, Index j) const { return (*m_)(i, j); }
    Index random_col(std::mt19937_64& rng) const {
        return std::uniform_int_distribution<Index>(0, m_->cols() - 1)(rng);
    }

  private:
    const Eigen::MatrixXd* m_;
};

/// Matricization of a FuncTensor as an ACA oracle (multi-index columns).
class MatricizationOracle {
  public:
    using col_type = MultiIndex;
    explicit MatricizationOracle(const Matricization& m) : m_(&m) {}
    Index rows() const { return m_->rows(); }
    double entry(Index i, const col_type& j) const { return m_->entry(i, j); }
    col_type random_col(std::mt19937_64& rng) const { return m_->random_col(rng); }

  private:
    const Matricization* m_;
};

/// Greedy interpolation-index selection from a matrix with orthonormal
/// columns: first index is the argmax of |Q(:,0)|; subsequent indices are the
/// argmax of the residual of each column against the interpolation on the
/// indices chosen so far. Ties break to the smallest index. Returned in
/// selection order.
std::vector<int> deim(const Eigen::MatrixXd& q);

}  // namespace eftt::cross
