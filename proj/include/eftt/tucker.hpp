#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "eftt/tensor.hpp"

namespace eftt::tucker {

/// Per-mode factor data of the interpolatory Tucker approximation.
struct ModeFactor {
    int degree = 0;                // grid degree n (mode size n+1)
    Eigen::MatrixXd fiber_basis;   // selected fibers, (n+1) x r
    Eigen::MatrixXd orthonormal;   // Q from the economic QR of fiber_basis
    std::vector<int> deim_set;     // interpolation indices, in selection order
    Eigen::MatrixXd oblique;       // Q (Q(deim_set,:))^{-1}; identity on the DEIM rows
    bool degenerate = false;       // all sampled fibers vanished; constant fallback basis
    bool unresolved = false;       // degree cap hit before the coefficient decay test passed

    int rank() const { return static_cast<int>(fiber_basis.cols()); }
};

struct TuckerSketch {
    std::vector<ModeFactor> modes;

    bool zero_function() const;
    bool any_unresolved() const;
    std::vector<std::vector<int>> deim_sets() const;
    int max_rank() const;
};

/// Fiber bases and oblique factors at the fixed degrees given by the dims of
/// t: per mode, cross approximation of the mode matricization selects fiber
/// columns, which are materialized, orthonormalized and reduced to an
/// interpolatory projection via DEIM. The core tensor stays implicit.
TuckerSketch tucker_sketch(const FuncTensor& t, double tol, int samples, std::uint64_t seed);

/// Lazy view of the implicit core tensor t(I_1, ..., I_d); evaluations are
/// billed to t's counter.
FuncTensor core_oracle(const TuckerSketch& sk, const FuncTensor& t);

/// Basis-specific degree bookkeeping for the adaptive sketch. `grid_degree`
/// maps the bookkeeping degree to the evaluation-grid degree; `resolved`
/// decides from the materialized fiber columns whether the degree suffices.
struct BasisPolicy {
    std::function<int(int)> grid_degree;
    std::function<bool(const Eigen::MatrixXd& fibers, int degree)> resolved;
};

/// Chebyshev policy: grid degree n with the coefficient-decay chop applied to
/// every column of dct_matrix(n) * fibers.
BasisPolicy chebyshev_policy(double tol);

struct AdaptiveOptions {
    double tol = 1e-10;
    int samples = 0;      // 0 = min(geomean(grid sizes)/2, 50), re-derived after refinement
    int degree_init = 16;
    int degree_max = 1200;
    bool adaptive = true;  // false: keep degree_init fixed
};

struct AdaptiveResult {
    TuckerSketch sketch;
    std::vector<int> degrees;  // final bookkeeping degrees per mode
    FuncTensor tensor;         // evaluation tensor at the final degrees
};

/// Adaptive-degree Tucker sketch. Starting from degree_init in every mode,
/// each mode's fiber basis is recomputed with the degree grown as
/// 2*degree + 1 until the basis policy reports the columns resolved or
/// degree_max is hit (flagged). Completed modes are not revisited; grids
/// share no interior nodes across refinements, so no evaluations are reused.
/// make_tensor builds the evaluation tensor for given grid degrees and must
/// bill every tensor it creates to one shared counter.
AdaptiveResult adaptive_sketch(
    const std::function<FuncTensor(const std::vector<int>&)>& make_tensor, int d,
    const AdaptiveOptions& opt, const BasisPolicy& policy, std::uint64_t seed);

}  // namespace eftt::tucker
