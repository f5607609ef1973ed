#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eftt/tensor.hpp"
#include "eftt/tt.hpp"

namespace eftt::model {

/// Multivariate oracle on the cube [-1,1]^d.
using PointFn = std::function<double(const std::vector<double>&)>;

enum class BasisKind : std::uint8_t { Chebyshev = 0, LegendreCC = 1 };

/// Compressed surrogate: TT cores over the Tucker core tensor plus per-mode
/// coefficient factors turning basis values into the r_l-dimensional factor
/// coordinates. coeff_factors[l] has shape (m_l+1) x r_l and holds the basis
/// transform applied to the oblique Tucker factor, precomputed at build time.
struct EFTTModel {
    BasisKind basis = BasisKind::Chebyshev;
    std::vector<int> degrees_n;  // evaluation-grid degree per mode
    std::vector<int> degrees_m;  // coefficient degree per mode (= n for Chebyshev)
    tt::TTCores tt;              // cores over the core tensor, middle size r_l
    std::vector<Eigen::MatrixXd> coeff_factors;
    std::vector<std::vector<int>> deim_sets;  // grid indices of the interpolation nodes
                                              // (transient; not serialized)
    std::uint64_t eval_count = 0;
    std::vector<std::string> warnings;

    int order() const { return static_cast<int>(coeff_factors.size()); }
    std::vector<Index> tucker_ranks() const;  // r_l
    Index max_R() const;                      // max TT rank
    Index max_r() const;                      // max Tucker rank
};

/// Direct TT surrogate of the evaluation tensor; cores are stored in
/// coefficient space (middle index = basis degree), i.e. the basis transform
/// is already folded into the middle index of every core.
struct FTTModel {
    BasisKind basis = BasisKind::Chebyshev;
    std::vector<int> degrees_n;
    std::vector<int> degrees_m;
    tt::TTCores tt;  // middle size m_l + 1
    std::uint64_t eval_count = 0;
    std::vector<std::string> warnings;

    int order() const { return static_cast<int>(degrees_n.size()); }
    Index max_R() const;
};

struct ApproxOptions {
    double tol = 1e-10;
    int samples = 0;           // pairs per cross round; 0 = min(geomean(mode sizes)/2, 50)
    bool adaptive = true;
    int fixed_degree = 100;    // bookkeeping degree when adaptive == false
    int degree_init = 16;
    int degree_max = 1200;     // Chebyshev grid-degree cap; Legendre target-degree cap is 105
    BasisKind basis = BasisKind::Chebyshev;
    Index max_rank = 64;
    int max_sweeps = 50;
    int check_samples = 100;
    std::size_t cache_cap = FuncTensor::kUnbounded;
};

/// Tucker sketch with basis-adapted degrees, TT cross on the implicit core,
/// and precomputed coefficient factors. Rank/degree/sweep caps surface as
/// model warnings. eval_count is the number of oracle calls made during
/// construction.
EFTTModel eftt_approximate(const PointFn& f, int d, const ApproxOptions& opt,
                           std::uint64_t seed);

/// TT cross applied straight to the evaluation tensor at a fixed grid degree,
/// then transformed to coefficient space.
FTTModel direct_tt_approximate(const PointFn& f, int d, int degree, const ApproxOptions& opt,
                               std::uint64_t seed);

/// Point evaluation: per mode contract coeff_factors[l]^T with the basis
/// values at x_l, then chain through the TT cores. Rejects points outside the
/// cube.
double eftt_eval(const EFTTModel& m, const std::vector<double>& x);
double ftt_eval(const FTTModel& m, const std::vector<double>& x);

/// Integral of the surrogate over [-1,1]^d via per-mode basis integral
/// weights.
double eftt_integrate(const EFTTModel& m);
double ftt_integrate(const FTTModel& m);

struct DofBreakdown {
    Index core_dofs = 0;    // sum_l R_{l-1} r_l R_l
    Index factor_dofs = 0;  // sum_l (m_l+1) r_l
    Index total() const { return core_dofs + factor_dofs; }
};

DofBreakdown eftt_dofs(const EFTTModel& m);
Index ftt_dofs(const FTTModel& m);  // sum_l R_{l-1} (m_l+1) R_l

struct McError {
    double value = 0.0;
    bool absolute = false;  // the oracle vanished on every sample; absolute fallback
};

/// Monte-Carlo relative L2 error sqrt(sum (f - g)^2 / sum f^2) over uniform
/// samples in the cube. Samples are drawn from the seed only; neither
/// function's evaluation counters are touched.
McError mc_l2_error(const PointFn& surrogate, const PointFn& f, int d, int n_samples,
                    std::uint64_t seed);

struct Lemma1Check {
    double lhs = 0.0;          // sup |f - f_hat| over the sample grid
    double interp_err = 0.0;   // sup |f - f_tilde| over the sample grid
    double tensor_err = 0.0;   // max |T - T_hat|
    double factor = 0.0;       // prod_l (2/pi log(n_l) + 1)
    double rhs() const { return interp_err + factor * tensor_err; }
};

/// Interpolation-error bound check on dense data (d <= 3, n <= 16): builds
/// the evaluation tensor T, a low-rank T_hat via TT cross at the given
/// tolerance, interpolates both, and compares sup |f - f_hat| against
/// sup |f - f_tilde| + prod_l (2/pi log(n_l) + 1) * max |T - T_hat| on a
/// dense sample grid with `grid_per_mode` points per mode.
Lemma1Check lemma1_bound_check(const PointFn& f, int d, int n, double tol,
                               int grid_per_mode, std::uint64_t seed);

/// Binary round trip: 4-byte magic "EFTT", version u16, basis u8, d u32,
/// per-mode (n u32, m u32, r u32), TT ranks R_0..R_d u32, then coeff_factors
/// (column-major) and core slices (per mode, per middle index, column-major)
/// as little-endian doubles. Throws std::runtime_error on malformed input.
std::vector<std::uint8_t> serialize(const EFTTModel& m);
EFTTModel deserialize(const std::vector<std::uint8_t>& bytes);

/// Human-readable JSON export: shapes in clear text, payloads base64.
std::string to_json(const EFTTModel& m);

}  // namespace eftt::model
