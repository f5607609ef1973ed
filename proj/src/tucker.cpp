#include "eftt/tucker.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

#include "eftt/cheb.hpp"
#include "eftt/cross.hpp"

namespace eftt::tucker {

namespace {

int default_samples(const std::vector<int>& grid_sizes) {
    double log_sum = 0.0;
    for (int n : grid_sizes) log_sum += std::log(static_cast<double>(n));
    double geomean = std::exp(log_sum / static_cast<double>(grid_sizes.size()));
    int s = static_cast<int>(std::floor(geomean / 2.0));
    return std::min(std::max(s, 1), 50);
}

std::vector<int> grid_sizes_of(const FuncTensor& t) {
    std::vector<int> sizes = t.dims();
    return sizes;
}

/// Materializes the selected fiber columns, or a constant fallback when the
/// cross approximation found nothing above tolerance.
Eigen::MatrixXd materialize_fibers(const FuncTensor& t, int mode,
                                   const cross::CrossSkeleton<MultiIndex>& sk,
                                   bool* degenerate) {
    const int n1 = t.dims()[mode];
    Matricization mz(t, mode);
    if (sk.rank() == 0) {
        *degenerate = true;
        return Eigen::MatrixXd::Ones(n1, 1);
    }
    *degenerate = false;
    Eigen::MatrixXd u(n1, sk.rank());
    for (int c = 0; c < sk.rank(); ++c) {
        for (int i = 0; i < n1; ++i) u(i, c) = mz.entry(i, sk.cols[c]);
    }
    return u;
}

ModeFactor finish_mode(int degree, Eigen::MatrixXd fibers, bool degenerate, bool unresolved) {
    ModeFactor f;
    f.degree = degree;
    f.fiber_basis = std::move(fibers);
    f.degenerate = degenerate;
    f.unresolved = unresolved;

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(f.fiber_basis);
    const int r = static_cast<int>(f.fiber_basis.cols());
    f.orthonormal = qr.householderQ() * Eigen::MatrixXd::Identity(f.fiber_basis.rows(), r);
    f.deim_set = cross::deim(f.orthonormal);

    Eigen::MatrixXd qi(r, r);
    for (int p = 0; p < r; ++p) qi.row(p) = f.orthonormal.row(f.deim_set[p]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(qi);
    if (!lu.isInvertible())
        throw std::runtime_error("tucker: interpolation block is singular");
    f.oblique = f.orthonormal * lu.inverse();
    return f;
}

}  // namespace

bool TuckerSketch::zero_function() const {
    for (const auto& m : modes) {
        if (!m.degenerate) return false;
    }
    return true;
}

bool TuckerSketch::any_unresolved() const {
    for (const auto& m : modes) {
        if (m.unresolved) return true;
    }
    return false;
}

std::vector<std::vector<int>> TuckerSketch::deim_sets() const {
    std::vector<std::vector<int>> sets;
    sets.reserve(modes.size());
    for (const auto& m : modes) sets.push_back(m.deim_set);
    return sets;
}

int TuckerSketch::max_rank() const {
    int r = 0;
    for (const auto& m : modes) r = std::max(r, m.rank());
    return r;
}

TuckerSketch tucker_sketch(const FuncTensor& t, double tol, int samples, std::uint64_t seed) {
    if (tol <= 0.0) throw std::invalid_argument("tucker_sketch: tol must be positive");
    std::mt19937_64 rng(seed);
    const int s = samples > 0 ? samples : default_samples(grid_sizes_of(t));

    TuckerSketch sk;
    sk.modes.reserve(t.order());
    for (int mode = 0; mode < t.order(); ++mode) {
        Matricization mz(t, mode);
        cross::MatricizationOracle oracle(mz);
        cross::AcaOptions opt;
        opt.tol = tol;
        opt.samples = s;
        auto skel = cross::aca_random(oracle, opt, rng);
        bool degenerate = false;
        Eigen::MatrixXd fibers = materialize_fibers(t, mode, skel, &degenerate);
        sk.modes.push_back(finish_mode(t.dims()[mode] - 1, std::move(fibers), degenerate, false));
    }
    return sk;
}

FuncTensor core_oracle(const TuckerSketch& sk, const FuncTensor& t) {
    if (static_cast<int>(sk.modes.size()) != t.order())
        throw std::invalid_argument("core_oracle: sketch/tensor order mismatch");
    return t.subtensor(sk.deim_sets());
}

BasisPolicy chebyshev_policy(double tol) {
    BasisPolicy p;
    p.grid_degree = [](int n) { return n; };
    p.resolved = [tol](const Eigen::MatrixXd& fibers, int degree) {
        Eigen::MatrixXd coeffs = cheb::dct_matrix(degree) * fibers;
        for (int c = 0; c < coeffs.cols(); ++c) {
            cheb::ChebCoeffs col;
            col.coeffs.assign(coeffs.col(c).data(), coeffs.col(c).data() + coeffs.rows());
            // require the negligible tail to cover the last four coefficients:
            // undersampled oscillations alias the final coefficient to zero,
            // so a cut at the very end is not evidence of resolution
            auto cut = cheb::chop(col, tol);
            if (!cut || *cut > degree - 3) return false;
        }
        return true;
    };
    return p;
}

AdaptiveResult adaptive_sketch(
    const std::function<FuncTensor(const std::vector<int>&)>& make_tensor, int d,
    const AdaptiveOptions& opt, const BasisPolicy& policy, std::uint64_t seed) {
    if (opt.tol <= 0.0) throw std::invalid_argument("adaptive_sketch: tol must be positive");
    if (opt.degree_init < 4) throw std::invalid_argument("adaptive_sketch: degree_init must be >= 4");
    std::mt19937_64 rng(seed);

    std::vector<int> degrees(d, opt.degree_init);
    auto grid_degrees = [&]() {
        std::vector<int> g(d);
        for (int k = 0; k < d; ++k) g[k] = policy.grid_degree(degrees[k]);
        return g;
    };

    FuncTensor t = make_tensor(grid_degrees());
    TuckerSketch sk;
    sk.modes.reserve(d);

    for (int mode = 0; mode < d; ++mode) {
        while (true) {
            const int s =
                opt.samples > 0 ? opt.samples : default_samples(grid_sizes_of(t));
            Matricization mz(t, mode);
            cross::MatricizationOracle oracle(mz);
            cross::AcaOptions aca_opt;
            aca_opt.tol = opt.tol;
            aca_opt.samples = s;
            auto skel = cross::aca_random(oracle, aca_opt, rng);
            bool degenerate = false;
            Eigen::MatrixXd fibers = materialize_fibers(t, mode, skel, &degenerate);

            bool resolved = degenerate || !opt.adaptive || policy.resolved(fibers, degrees[mode]);
            if (resolved || degrees[mode] >= opt.degree_max) {
                sk.modes.push_back(
                    finish_mode(t.dims()[mode] - 1, std::move(fibers), degenerate, !resolved));
                break;
            }
            degrees[mode] = std::min(2 * degrees[mode] + 1, opt.degree_max);
            t = make_tensor(grid_degrees());
        }
    }
    return AdaptiveResult{std::move(sk), std::move(degrees), std::move(t)};
}

}  // namespace eftt::tucker
