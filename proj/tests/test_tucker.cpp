#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eftt/cheb.hpp"
#include "eftt/tensor.hpp"
#include "eftt/tucker.hpp"

using namespace eftt;
using std::numbers::pi;

namespace {

// dense Tucker reconstruction C x_1 U1 x_2 U2 ... for comparisons
DenseTensor reconstruct(const tucker::TuckerSketch& sk, const FuncTensor& t) {
    auto sets = sk.deim_sets();
    std::vector<int> core_dims;
    for (const auto& s : sets) core_dims.push_back(static_cast<int>(s.size()));
    DenseTensor core(core_dims);
    FuncTensor lazy_core = tucker::core_oracle(sk, t);
    MultiIndex idx(core_dims.size(), 0);
    bool more = true;
    while (more) {
        core.at(idx) = lazy_core.entry(idx);
        more = false;
        for (std::size_t l = 0; l < idx.size(); ++l) {
            if (++idx[l] < core_dims[l]) {
                more = true;
                break;
            }
            idx[l] = 0;
        }
    }
    DenseTensor out = core;
    for (std::size_t l = 0; l < sk.modes.size(); ++l)
        out = mode_mult(out, sk.modes[l].oblique, static_cast<int>(l));
    return out;
}

FuncTensor grid_tensor(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<int>& degrees) {
    std::vector<int> dims;
    auto nodes = std::make_shared<std::vector<std::vector<double>>>();
    for (int n : degrees) {
        nodes->push_back(cheb::cheb_points(n).nodes);
        dims.push_back(n + 1);
    }
    return FuncTensor(dims, [f, nodes](const MultiIndex& idx) {
        std::vector<double> x(idx.size());
        for (std::size_t l = 0; l < idx.size(); ++l) x[l] = (*nodes)[l][idx[l]];
        return f(x);
    });
}

}  // namespace

TEST_CASE("separable product has multilinear rank one") {
    auto f = [](const std::vector<double>& x) {
        return std::exp(x[0]) * std::cos(x[1]) * (2.0 + x[2]);
    };
    FuncTensor t = grid_tensor(f, {16, 16, 16});
    auto sk = tucker::tucker_sketch(t, 1e-10, 20, 42);
    for (const auto& mode : sk.modes) CHECK(mode.rank() == 1);

    DenseTensor rec = reconstruct(sk, t);
    double worst = 0.0;
    MultiIndex idx(3, 0);
    for (idx[0] = 0; idx[0] < 17; ++idx[0])
        for (idx[1] = 0; idx[1] < 17; ++idx[1])
            for (idx[2] = 0; idx[2] < 17; ++idx[2])
                worst = std::max(worst, std::abs(rec.at(idx) - t.entry(idx)));
    CHECK(worst < 1e-10);
}

TEST_CASE("f(x, y) = x + y has per-mode rank two") {
    auto f = [](const std::vector<double>& x) { return x[0] + x[1]; };
    FuncTensor t = grid_tensor(f, {12, 12});
    auto sk = tucker::tucker_sketch(t, 1e-10, 20, 7);
    CHECK(sk.modes[0].rank() == 2);
    CHECK(sk.modes[1].rank() == 2);
}

TEST_CASE("oblique projection identity and idempotence") {
    auto f = [](const std::vector<double>& x) {
        return 1.0 / (1.0 + x[0] * x[0] + 0.5 * x[1]);
    };
    FuncTensor t = grid_tensor(f, {16, 16});
    auto sk = tucker::tucker_sketch(t, 1e-10, 20, 3);
    for (const auto& mode : sk.modes) {
        const int r = mode.rank();
        Eigen::MatrixXd on_deim(r, r);
        for (int k = 0; k < r; ++k) on_deim.row(k) = mode.oblique.row(mode.deim_set[k]);
        CHECK((on_deim - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-10);

        // P = Q (Q(I,:))^{-1} Phi^T is idempotent
        Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(mode.orthonormal.rows(), r);
        for (int k = 0; k < r; ++k) phi(mode.deim_set[k], k) = 1.0;
        Eigen::MatrixXd p = mode.oblique * phi.transpose();
        CHECK((p * p - p).norm() <= 1e-9 * p.norm());

        Eigen::MatrixXd gram =
            mode.orthonormal.transpose() * mode.orthonormal - Eigen::MatrixXd::Identity(r, r);
        CHECK(gram.cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("core oracle views") {
    auto f = [](const std::vector<double>& x) { return std::cos(x[0]) * (1.0 + x[1]); };
    FuncTensor t = grid_tensor(f, {10, 10});
    auto sk = tucker::tucker_sketch(t, 1e-10, 20, 5);
    FuncTensor core = tucker::core_oracle(sk, t);
    auto sets = sk.deim_sets();
    REQUIRE(core.order() == 2);
    for (int a = 0; a < core.dims()[0]; ++a)
        for (int b = 0; b < core.dims()[1]; ++b)
            CHECK(core.entry({a, b}) == t.entry({sets[0][a], sets[1][b]}));
}

TEST_CASE("exact multilinear rank recovery across seeds") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed + 100);
        std::normal_distribution<double> gauss;
        // random Tucker tensor of exact multilinear rank (2,2,2) on a 17^3 grid
        const int n = 17, k = 2;
        std::vector<Eigen::MatrixXd> u(3, Eigen::MatrixXd(n, k));
        Eigen::VectorXd core_data(k * k * k);
        for (auto& m : u)
            for (Index i = 0; i < m.size(); ++i) m.data()[i] = gauss(rng);
        for (Index i = 0; i < core_data.size(); ++i) core_data(i) = gauss(rng);

        auto entry = [&](const MultiIndex& idx) {
            double s = 0.0;
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    for (int c = 0; c < k; ++c)
                        s += core_data(a + k * (b + k * c)) * u[0](idx[0], a) *
                             u[1](idx[1], b) * u[2](idx[2], c);
            return s;
        };
        FuncTensor t({n, n, n}, entry);
        auto sk = tucker::tucker_sketch(t, 1e-10, 30, seed);
        DenseTensor rec = reconstruct(sk, t);
        double worst = 0.0;
        MultiIndex idx(3, 0);
        for (idx[0] = 0; idx[0] < n; ++idx[0])
            for (idx[1] = 0; idx[1] < n; ++idx[1])
                for (idx[2] = 0; idx[2] < n; ++idx[2])
                    worst = std::max(worst, std::abs(rec.at(idx) - entry(idx)));
        if (worst <= 1e-8) ++hits;
    }
    CHECK(hits >= 10);
}

TEST_CASE("evaluation budget of tucker_sketch") {
    auto f = [](const std::vector<double>& x) {
        return std::sin(x[0] + x[1]) + x[2] * x[2];
    };
    FuncTensor t = grid_tensor(f, {20, 20, 20});
    const int s = 21;
    auto sk = tucker::tucker_sketch(t, 1e-10, s, 11);
    double budget = 0.0;
    for (const auto& mode : sk.modes) {
        double r = mode.rank();
        budget += r * r * r + s * r * r + (mode.degree + 1) * r;
    }
    CHECK(static_cast<double>(t.eval_count()) <= 10.0 * budget);
}

TEST_CASE("zero function yields a degenerate constant sketch") {
    FuncTensor t({9, 9}, [](const MultiIndex&) { return 0.0; });
    auto sk = tucker::tucker_sketch(t, 1e-10, 10, 1);
    CHECK(sk.zero_function());
    for (const auto& mode : sk.modes) {
        CHECK(mode.degenerate);
        CHECK(mode.rank() == 1);
    }
}

TEST_CASE("adaptive refinement is per-mode") {
    // smooth low-degree modes stay at 16; cos(40 pi x) forces refinement in mode 1
    auto smooth = [](const std::vector<double>& x) {
        return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    };
    auto make_smooth = [&](const std::vector<int>& degrees) {
        return grid_tensor(smooth, degrees);
    };
    tucker::AdaptiveOptions opt;
    auto res = tucker::adaptive_sketch(make_smooth, 3, opt,
                                       tucker::chebyshev_policy(1e-10), 17);
    CHECK(res.degrees == std::vector<int>{16, 16, 16});

    auto wavy = [](const std::vector<double>& x) {
        return std::cos(40.0 * pi * x[1]) + x[0] + x[2];
    };
    auto make_wavy = [&](const std::vector<int>& degrees) {
        return grid_tensor(wavy, degrees);
    };
    auto res2 = tucker::adaptive_sketch(make_wavy, 3, opt,
                                        tucker::chebyshev_policy(1e-10), 17);
    CHECK(res2.degrees[0] == 16);
    CHECK(res2.degrees[1] > 100);  // cos(40 pi x) needs degree ~ 140
    CHECK(res2.degrees[2] == 16);
    CHECK_FALSE(res2.sketch.any_unresolved());

    // refinement path 16 -> 33 -> 67 -> 135 -> 271; the distant tail of
    // cos(40 pi x) only drops below 1e-10 around degree 150
    CHECK(res2.degrees[1] == 271);
}

TEST_CASE("degree cap is flagged") {
    auto kink = [](const std::vector<double>& x) { return std::abs(x[0] - 0.3) + x[1]; };
    auto make = [&](const std::vector<int>& degrees) { return grid_tensor(kink, degrees); };
    tucker::AdaptiveOptions opt;
    opt.degree_max = 67;
    auto res = tucker::adaptive_sketch(make, 2, opt, tucker::chebyshev_policy(1e-10), 23);
    CHECK(res.sketch.any_unresolved());
    CHECK(res.degrees[0] == 67);
}
