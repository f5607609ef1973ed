#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "eftt/cheb.hpp"
#include "eftt/model.hpp"
#include "eftt/tt.hpp"

using namespace eftt;
using model::ApproxOptions;
using model::BasisKind;
using model::EFTTModel;

namespace {

EFTTModel hand_model_d2() {
    // d = 2, n = 10, r = (2, 3), TT ranks (1, 2, 1)
    EFTTModel m;
    m.degrees_n = {10, 10};
    m.degrees_m = {10, 10};
    m.coeff_factors = {Eigen::MatrixXd::Random(11, 2), Eigen::MatrixXd::Random(11, 3)};
    m.tt.cores.resize(2);
    m.tt.cores[0] = {Eigen::MatrixXd::Random(1, 2), Eigen::MatrixXd::Random(1, 2)};
    m.tt.cores[1] = {Eigen::MatrixXd::Random(2, 1), Eigen::MatrixXd::Random(2, 1),
                     Eigen::MatrixXd::Random(2, 1)};
    m.eval_count = 123;
    return m;
}

}  // namespace

TEST_CASE("separable product, adaptive degrees") {
    auto f = [](const std::vector<double>& x) {
        return std::exp(0.7 * x[0]) * std::cos(x[1]) * (2.0 + x[2]) / (2.5 + x[3]);
    };
    auto m = model::eftt_approximate(f, 4, ApproxOptions{}, 5);
    CHECK(m.max_R() == 1);
    CHECK(m.max_r() == 1);
    auto err = model::mc_l2_error(
        [&m](const std::vector<double>& x) { return model::eftt_eval(m, x); }, f, 4, 2000, 99);
    CHECK(err.value <= 1e-9);
    CHECK_FALSE(err.absolute);
}

TEST_CASE("exponential benchmark at fixed degree 100 is rank one") {
    auto f = [](const std::vector<double>& x) {
        double sq = 0.0;
        for (double xi : x) sq += xi * xi;
        return -std::exp(-0.5 * sq);
    };
    ApproxOptions opt;
    opt.adaptive = false;
    opt.fixed_degree = 100;
    auto m = model::eftt_approximate(f, 7, opt, 1);
    CHECK(m.max_R() == 1);
    CHECK(m.max_r() == 1);
    // storage formula: sum R r R + sum (n+1) r = 7 + 707
    auto dofs = model::eftt_dofs(m);
    CHECK(dofs.core_dofs == 7);
    CHECK(dofs.factor_dofs == 707);
}

TEST_CASE("direct TT of a rank-1 function matches at random points") {
    auto f = [](const std::vector<double>& x) {
        return (1.0 + 0.5 * x[0]) * std::exp(x[1]) * (2.0 - x[2]);
    };
    auto m = model::direct_tt_approximate(f, 3, 16, ApproxOptions{}, 3);
    CHECK(m.max_R() == 1);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(-1, 1);
    for (int p = 0; p < 1000; ++p) {
        std::vector<double> x = {unit(rng), unit(rng), unit(rng)};
        CHECK(model::ftt_eval(m, x) == doctest::Approx(f(x)).epsilon(1e-10));
    }
}

TEST_CASE("direct TT of the sin-sum evaluation grid has ranks two") {
    const int d = 5;
    auto f = [d](const std::vector<double>& x) {
        double s = 0.0;
        for (double xi : x) s += (xi + 1.0) / 2.0;
        return std::sin(s);
    };
    auto m = model::direct_tt_approximate(f, d, 20, ApproxOptions{}, 7);
    auto ranks = m.tt.ranks();
    for (int l = 1; l < d; ++l) CHECK(ranks[l] == 2);
}

TEST_CASE("eval of simple models") {
    auto one = model::eftt_approximate([](const std::vector<double>&) { return 1.0; }, 3,
                                       ApproxOptions{}, 2);
    for (auto x : {std::vector<double>{0, 0, 0}, {0.3, -0.9, 1.0}, {-1, -1, -1}})
        CHECK(model::eftt_eval(one, x) == doctest::Approx(1.0).epsilon(1e-13));

    auto prod = model::eftt_approximate(
        [](const std::vector<double>& x) { return x[0] * x[1]; }, 2, ApproxOptions{}, 4);
    CHECK(model::eftt_eval(prod, {0.3, -0.5}) == doctest::Approx(-0.15).epsilon(1e-12));
    CHECK_THROWS(model::eftt_eval(prod, {0.3, -1.5}));
    CHECK_THROWS(model::eftt_eval(prod, {0.3}));
}

TEST_CASE("model at the interpolation node tuple equals the core TT entry") {
    auto f = [](const std::vector<double>& x) {
        return std::sin(x[0] + 0.5 * x[1]) + x[2] * x[1];
    };
    auto m = model::eftt_approximate(f, 3, ApproxOptions{}, 8);
    REQUIRE(m.deim_sets.size() == 3);
    MultiIndex k(3, 0);
    bool more = true;
    while (more) {
        std::vector<double> x(3);
        for (int l = 0; l < 3; ++l)
            x[l] = cheb::cheb_points(m.degrees_n[l]).nodes[m.deim_sets[l][k[l]]];
        CHECK(model::eftt_eval(m, x) ==
              doctest::Approx(tt::tt_entry(m.tt, k)).epsilon(1e-10));
        more = false;
        for (int l = 0; l < 3; ++l) {
            if (++k[l] < static_cast<int>(m.deim_sets[l].size())) {
                more = true;
                break;
            }
            k[l] = 0;
        }
    }
}

TEST_CASE("integration of simple models") {
    auto one = model::eftt_approximate([](const std::vector<double>&) { return 1.0; }, 3,
                                       ApproxOptions{}, 2);
    CHECK(model::eftt_integrate(one) == doctest::Approx(8.0).epsilon(1e-12));

    auto odd = model::eftt_approximate(
        [](const std::vector<double>& x) { return x[0]; }, 2, ApproxOptions{}, 3);
    CHECK(std::abs(model::eftt_integrate(odd)) < 1e-12);
}

TEST_CASE("integral equals dense quadrature of the surrogate") {
    auto f = [](const std::vector<double>& x) {
        return std::exp(0.3 * x[0]) / (2.0 + x[1]) + std::cos(x[2]);
    };
    auto m = model::eftt_approximate(f, 3, ApproxOptions{}, 6);
    // tensorized Clenshaw-Curtis-style quadrature of eftt_eval via coefficients
    // oracle: Simpson rule per mode at high resolution
    const int g = 64;
    double acc = 0.0;
    auto weight = [g](int i) { return i == 0 || i == g ? 1.0 : (i % 2 ? 4.0 : 2.0); };
    for (int a = 0; a <= g; ++a)
        for (int b = 0; b <= g; ++b)
            for (int c = 0; c <= g; ++c) {
                std::vector<double> x = {-1.0 + 2.0 * a / g, -1.0 + 2.0 * b / g,
                                         -1.0 + 2.0 * c / g};
                acc += weight(a) * weight(b) * weight(c) * model::eftt_eval(m, x);
            }
    acc *= std::pow(2.0 / g / 3.0, 3);
    // Simpson at g=64 carries ~1e-7 discretization error of its own
    CHECK(model::eftt_integrate(m) == doctest::Approx(acc).epsilon(1e-5));
}

TEST_CASE("dof accounting") {
    auto m = hand_model_d2();
    auto d = model::eftt_dofs(m);
    CHECK(d.core_dofs == 1 * 2 * 2 + 2 * 3 * 1);
    CHECK(d.factor_dofs == 11 * 2 + 11 * 3);
    CHECK(d.total() == 65);
}

TEST_CASE("mc_l2_error") {
    auto c = [](const std::vector<double>&) { return 2.5; };
    CHECK(model::mc_l2_error(c, c, 3, 500, 1).value == 0.0);

    auto zero = [](const std::vector<double>&) { return 0.0; };
    auto onef = [](const std::vector<double>&) { return 1.0; };
    CHECK(model::mc_l2_error(zero, onef, 3, 500, 1).value == doctest::Approx(1.0));

    auto pert = [](const std::vector<double>&) { return 1.0 + 1e-3; };
    auto e = model::mc_l2_error(pert, onef, 3, 2000, 1);
    CHECK(e.value == doctest::Approx(1e-3).epsilon(0.05));

    auto flagged = model::mc_l2_error(onef, zero, 2, 100, 7);
    CHECK(flagged.absolute);
    CHECK(flagged.value == doctest::Approx(1.0));
    CHECK_THROWS(model::mc_l2_error(c, c, 3, 0, 1));
}

TEST_CASE("interpolation-error bound holds") {
    // trilinear rank-1: both sides vanish
    auto trilinear = [](const std::vector<double>& x) { return x[0] * x[1] * x[2]; };
    auto chk = model::lemma1_bound_check(trilinear, 3, 8, 1e-12, 9, 4);
    CHECK(chk.lhs <= 1e-12);
    CHECK(chk.rhs() <= 1e-11);

    // exact recovery: tensor term vanishes, lhs equals the interpolation error
    auto smooth = [](const std::vector<double>& x) {
        return std::exp(x[0]) * std::cos(2.0 * x[1]);
    };
    auto exact = model::lemma1_bound_check(smooth, 2, 16, 1e-13, 33, 5);
    CHECK(exact.tensor_err <= 1e-12);
    CHECK(exact.lhs == doctest::Approx(exact.interp_err).epsilon(1e-8));

    // Runge-type product under a loose tolerance: inequality still holds
    auto runge = [](const std::vector<double>& x) {
        return 1.0 / (1.0 + 16.0 * x[0] * x[0]) / (1.0 + 9.0 * x[1] * x[1]);
    };
    for (double tol : {1e-2, 1e-4, 1e-6}) {
        auto c = model::lemma1_bound_check(runge, 2, 16, tol, 33, 6);
        CHECK(c.lhs <= c.rhs() + 1e-13);
    }
    CHECK_THROWS(model::lemma1_bound_check(runge, 4, 8, 1e-8, 9, 1));
    CHECK_THROWS(model::lemma1_bound_check(runge, 2, 40, 1e-8, 9, 1));
}

TEST_CASE("end-to-end exactness for low-degree polynomials") {
    auto f = [](const std::vector<double>& x) {
        return (x[0] * x[0] - 0.5) * (x[1] + 1.0) + x[2] * x[2] * x[2];
    };
    auto m = model::eftt_approximate(f, 3, ApproxOptions{}, 12);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(-1, 1);
    for (int p = 0; p < 1000; ++p) {
        std::vector<double> x = {unit(rng), unit(rng), unit(rng)};
        CHECK(model::eftt_eval(m, x) == doctest::Approx(f(x)).epsilon(1e-10));
    }
}

TEST_CASE("evaluation-count bound") {
    auto f = [](const std::vector<double>& x) {
        return std::sin(x[0] + x[1]) * std::exp(-x[2] * x[2]) + x[3];
    };
    const int d = 4, s = 17;
    ApproxOptions opt;
    opt.samples = s;
    auto m = model::eftt_approximate(f, d, opt, 19);
    double budget = 0.0;
    for (int l = 0; l < d; ++l) {
        double r = static_cast<double>(m.coeff_factors[l].cols());
        double big_r = static_cast<double>(m.tt.cores[l].front().cols());
        budget += r * r * r + (m.degrees_n[l] + 1) * r + s * r * r + r * big_r * big_r;
    }
    CHECK(static_cast<double>(m.eval_count) <= 10.0 * budget);
}

TEST_CASE("Chebyshev and Legendre EFTT agree on smooth functions") {
    auto f = [](const std::vector<double>& x) {
        return std::exp(0.4 * x[0]) * std::cos(x[1]) + 0.3 * x[1];
    };
    auto mc = model::eftt_approximate(f, 2, ApproxOptions{}, 21);
    ApproxOptions lopt;
    lopt.basis = BasisKind::LegendreCC;
    auto ml = model::eftt_approximate(f, 2, lopt, 21);
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> unit(-1, 1);
    for (int p = 0; p < 200; ++p) {
        std::vector<double> x = {unit(rng), unit(rng)};
        CHECK(model::eftt_eval(mc, x) == doctest::Approx(model::eftt_eval(ml, x)).epsilon(1e-8));
    }
}

TEST_CASE("serialization round trip is bitwise") {
    auto m = model::eftt_approximate(
        [](const std::vector<double>& x) { return std::cos(x[0]) + x[1] * x[0]; }, 2,
        ApproxOptions{}, 31);
    auto bytes = model::serialize(m);
    auto back = model::deserialize(bytes);
    CHECK(back.basis == m.basis);
    CHECK(back.degrees_n == m.degrees_n);
    CHECK(back.degrees_m == m.degrees_m);
    CHECK(back.eval_count == m.eval_count);
    REQUIRE(back.coeff_factors.size() == m.coeff_factors.size());
    for (std::size_t l = 0; l < m.coeff_factors.size(); ++l)
        CHECK((back.coeff_factors[l].array() == m.coeff_factors[l].array()).all());
    REQUIRE(back.tt.cores.size() == m.tt.cores.size());
    for (std::size_t l = 0; l < m.tt.cores.size(); ++l) {
        REQUIRE(back.tt.cores[l].size() == m.tt.cores[l].size());
        for (std::size_t i = 0; i < m.tt.cores[l].size(); ++i)
            CHECK((back.tt.cores[l][i].array() == m.tt.cores[l][i].array()).all());
    }
    CHECK(model::serialize(back) == bytes);

    // truncated stream -> structured error
    for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{9},
                            bytes.size() - 1}) {
        std::vector<std::uint8_t> trunc(bytes.begin(), bytes.begin() + cut);
        CHECK_THROWS_AS(model::deserialize(trunc), std::runtime_error);
    }
    auto corrupted = bytes;
    corrupted[0] = 'X';
    CHECK_THROWS_AS(model::deserialize(corrupted), std::runtime_error);

    auto j = model::to_json(m);
    CHECK(j.find("\"basis\"") != std::string::npos);
    CHECK(j.find("data_base64") != std::string::npos);
}

TEST_CASE("committed fixture loads and evaluates identically") {
    std::ifstream in(std::string(FIXTURE_DIR) + "/model_d3.eftt", std::ios::binary);
    REQUIRE(in);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    auto m = model::deserialize(bytes);

    std::ifstream ref(std::string(FIXTURE_DIR) + "/model_d3_evals.txt");
    REQUIRE(ref);
    double x0, x1, x2, expected;
    int checked = 0;
    while (ref >> x0 >> x1 >> x2 >> expected) {
        CHECK(model::eftt_eval(m, {x0, x1, x2}) == doctest::Approx(expected).epsilon(1e-13));
        ++checked;
    }
    CHECK(checked == 10);
}
