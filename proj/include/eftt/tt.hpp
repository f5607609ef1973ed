#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "eftt/tensor.hpp"

namespace eftt::tt {

/// Tensor-train cores; cores[l][i] is the R_{l-1} x R_l slice for middle
/// index i of mode l. Boundary ranks are 1.
struct TTCores {
    std::vector<std::vector<Eigen::MatrixXd>> cores;

    int order() const { return static_cast<int>(cores.size()); }
    std::vector<int> sizes() const;
    std::vector<Index> ranks() const;  // R_0, ..., R_d
    Index max_rank() const;
    Index dofs() const;  // sum_l R_{l-1} * size_l * R_l
};

/// Evaluate the TT representation at a multi-index by a left-to-right chain
/// of matrix products.
double tt_entry(const TTCores& c, const MultiIndex& idx);

/// Left/right nested index families of a tensor cross approximation.
/// left[l-1] holds the l-tuples of the set below mode l+1 and right[l-1] the
/// (d-l)-tuples above mode l, each of size R_l, for l = 1..d-1. Boundary sets
/// are implicit (rank 1).
struct NestedIndexSets {
    std::vector<std::vector<MultiIndex>> left;
    std::vector<std::vector<MultiIndex>> right;

    int order() const { return static_cast<int>(left.size()) + 1; }
    /// Checks prefix/suffix nestedness and in-set distinctness.
    bool nested() const;
};

/// Assemble TT cores from cross index sets: core l is built from the fibers
/// t(left_{l-1}, i, right_l) with the inverse of the pivot block
/// t(left_l, right_l) folded into its right rank index. Throws when a pivot
/// block is singular, naming the offending mode; a singular block whose
/// fibers all vanish yields zero cores instead.
TTCores tt_cores_from_cross(const FuncTensor& t, const NestedIndexSets& sets);

struct TTCrossOptions {
    double tol = 1e-10;
    int samples = 50;       // sample-pair count inside each supercore cross step
    int check_samples = 100;
    Index max_rank = 64;
    int max_sweeps = 50;
};

struct TTCrossResult {
    TTCores cores;
    NestedIndexSets sets;
    bool converged = false;   // sampled error reached tol
    bool rank_capped = false;
    bool sweeps_capped = false;
};

/// Rank-adaptive cross interpolation: starting from single random nested
/// index sets, left-to-right sweeps enlarge each set by at most one element
/// via a cross step on the two-mode supercore reshaped into a matrix
/// (rows: (left member, i_l), left member fastest; columns:
/// (i_{l+1}, right member), i_{l+1} fastest). Sweeps stop once the
/// reconstruction matches the tensor at check_samples fresh random entries to
/// relative tolerance, or at the rank/sweep caps (flagged).
TTCrossResult tt_cross(const FuncTensor& t, const TTCrossOptions& opt, std::uint64_t seed);

}  // namespace eftt::tt
