#include "eftt/bench.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

namespace eftt::bench {

namespace {

using std::numbers::pi;
using Box = std::vector<std::pair<double, double>>;

Box uniform_box(int d, double lo, double hi) { return Box(d, {lo, hi}); }

double ackley(const std::vector<double>& x) {
    double sq = 0.0, cs = 0.0;
    for (double xi : x) {
        sq += xi * xi;
        cs += std::cos(2.0 * pi * xi);
    }
    const double d = static_cast<double>(x.size());
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 + std::exp(1.0);
}

// standard Alpine N.1 with 0.1*x_i inside every term; the variant coupling
// all terms to x_1 would destroy the rank-2 structure of the sum
double alpine(const std::vector<double>& x) {
    double s = 0.0;
    for (double xi : x) s += std::abs(xi * std::sin(xi) + 0.1 * xi);
    return s;
}

double dixon(const std::vector<double>& x) {
    double s = (x[0] - 1.0) * (x[0] - 1.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        double t = 2.0 * x[i] * x[i] - x[i - 1];
        s += static_cast<double>(i + 1) * t * t;
    }
    return s;
}

double exponential(const std::vector<double>& x) {
    double sq = 0.0;
    for (double xi : x) sq += xi * xi;
    return -std::exp(-0.5 * sq);
}

double griewank(const std::vector<double>& x) {
    double s = 0.0, p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * x[i] / 4000.0;
        p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return s - p + 1.0;
}

double michalewicz(const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double arg = static_cast<double>(i + 1) * x[i] * x[i] / pi;
        s += std::sin(x[i]) * std::pow(std::sin(arg), 20.0);
    }
    return -s;
}

// (M, S, V0, k, P0, Ta, T0)
double piston(const std::vector<double>& x) {
    const double m = x[0], s = x[1], v0 = x[2], k = x[3], p0 = x[4], ta = x[5], t0 = x[6];
    const double a = p0 * s + 19.62 * m - k * v0 / s;
    const double v = s / (2.0 * k) * (std::sqrt(a * a + 4.0 * k * p0 * v0 * ta / t0) - a);
    return 2.0 * pi * std::sqrt(m / (k + s * s * (p0 * v0 / t0) * (ta / (v * v))));
}

double qing(const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = x[i] * x[i] - static_cast<double>(i + 1);
        s += t * t;
    }
    return s;
}

double rastrigin(const std::vector<double>& x) {
    double s = 70.0;
    for (double xi : x) s += xi * xi - 10.0 * std::cos(2.0 * pi * xi);
    return s;
}

double rosenbrock(const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double a = x[i + 1] - x[i] * x[i];
        double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double schaffer(const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double r2 = x[i] * x[i] + x[i + 1] * x[i + 1];
        double num = std::sin(std::sqrt(r2));
        double den = 1.0 + 0.001 * r2;
        s += 0.5 + (num * num - 0.5) / (den * den);
    }
    return s;
}

double schwefel(const std::vector<double>& x) {
    double s = 2932.8803;
    for (double xi : x) s -= xi * std::sin(std::sqrt(std::abs(xi)));
    return s;
}

// (r_w, r, T_u, H_u, T_l, H_l, L, K_w)
double borehole(const std::vector<double>& x) {
    const double rw = x[0], r = x[1], tu = x[2], hu = x[3], tl = x[4], hl = x[5], l = x[6],
                 kw = x[7];
    const double lg = std::log(r / rw);
    return 2.0 * pi * tu * (hu - hl) /
           (lg * (1.0 + 2.0 * l * tu / (lg * rw * rw * kw) + tu / tl));
}

// (b1, b2, f, c1, c2, beta)
double otl_circuit(const std::vector<double>& x) {
    const double b1 = x[0], b2 = x[1], f = x[2], c1 = x[3], c2 = x[4], beta = x[5];
    const double vb1 = 12.0 * b2 / (b1 + b2);
    const double bc = beta * (c2 + 9.0);
    return (vb1 + 0.74) * bc / (bc + f) + 11.35 * f / (bc + f) + 0.74 * f * bc / ((bc + f) * c1);
}

// (theta_1..theta_4, L_1..L_4)
double robot_arm_impl(const std::vector<double>& x, bool cumulative) {
    double u = 0.0, v = 0.0, angle = 0.0;
    for (int i = 0; i < 4; ++i) {
        angle = cumulative ? angle + x[i] : 4.0 * x[i];
        u += x[4 + i] * std::cos(angle);
        v += x[4 + i] * std::sin(angle);
    }
    return std::sqrt(u * u + v * v);
}

// (S_w, W_f, A, Delta[deg], q, lambda, t_c, N_z, W_d, W_p)
double wing_weight(const std::vector<double>& x) {
    const double sw = x[0], wf = x[1], a = x[2], delta = x[3] * pi / 180.0, q = x[4],
                 lambda = x[5], tc = x[6], nz = x[7], wd = x[8], wp = x[9];
    const double cd = std::cos(delta);
    return 0.036 * std::pow(sw, 0.758) * std::pow(wf, 0.0035) * std::pow(a / (cd * cd), 0.6) *
               std::pow(q, 0.006) * std::pow(lambda, 0.04) * std::pow(100.0 * tc / cd, -0.3) *
               std::pow(nz * wd, 0.49) +
           sw * wp;
}

double friedman(const std::vector<double>& x) {
    return 10.0 * std::sin(pi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) +
           10.0 * x[3] + 5.0 * x[4];
}

double gramacy_lee(const std::vector<double>& x) {
    return std::exp(std::sin(std::pow(0.9 * (x[0] + 0.48), 10.0))) + x[1] * x[2] + x[3];
}

double dette_pepelyshev_8d(const std::vector<double>& x) {
    double a = x[0] - 2.0 + 8.0 * x[1] - 8.0 * x[1] * x[1];
    double b = 3.0 - 4.0 * x[1];
    double s = 4.0 * a * a + b * b +
               16.0 * std::sqrt(x[2] + 1.0) * (2.0 * x[2] - 1.0) * (2.0 * x[2] - 1.0);
    for (int i = 4; i <= 8; ++i) {
        double inner = 1.0;
        for (int j = 3; j <= i; ++j) inner += x[j - 1];
        s += static_cast<double>(i) * std::log(inner);
    }
    return s;
}

double dette_pepelyshev_exp(const std::vector<double>& x) {
    return 100.0 * (std::exp(-2.0 / std::pow(x[0], 1.75)) + std::exp(-2.0 / std::pow(x[1], 1.5)) +
                    std::exp(-2.0 / std::pow(x[2], 1.25)));
}

std::vector<TestFunction> build_registry() {
    std::vector<TestFunction> fns;
    auto add = [&fns](std::string name, int d, Box box, model::PointFn f,
                      std::optional<std::pair<Index, Index>> ranks = std::nullopt) {
        fns.push_back({std::move(name), d, std::move(box), std::move(f), std::nullopt, ranks});
    };
    add("ackley", 7, uniform_box(7, -32.768, 32.768), ackley);
    add("alpine", 7, uniform_box(7, -10.0, 10.0), alpine, {{2, 2}});
    add("dixon", 7, uniform_box(7, -10.0, 10.0), dixon);
    add("exponential", 7, uniform_box(7, -1.0, 1.0), exponential, {{1, 1}});
    add("griewank", 7, uniform_box(7, -600.0, 600.0), griewank);
    add("michalewicz", 7, uniform_box(7, 0.0, pi), michalewicz, {{2, 2}});
    add("piston", 7,
        {{30, 60}, {0.005, 0.02}, {0.002, 0.01}, {1000, 5000}, {90000, 110000}, {290, 296},
         {340, 360}},
        piston);
    add("qing", 7, uniform_box(7, 0.0, 500.0), qing);
    add("rastrigin", 7, uniform_box(7, -5.12, 5.12), rastrigin);
    add("rosenbrock", 7, uniform_box(7, -2.048, 2.048), rosenbrock);
    add("schaffer", 7, uniform_box(7, -100.0, 100.0), schaffer);
    add("schwefel", 7, uniform_box(7, -500.0, 500.0), schwefel, {{2, 2}});
    add("borehole", 8,
        {{0.05, 0.15}, {100, 50000}, {63070, 115600}, {990, 1110}, {63.1, 116}, {700, 820},
         {1120, 1680}, {9855, 12045}},
        borehole);
    add("otl-circuit", 6, {{50, 150}, {25, 70}, {0.5, 3}, {1.2, 2.5}, {0.25, 1.2}, {50, 300}},
        otl_circuit);
    fns.push_back(robot_arm(false));
    add("wing-weight", 10,
        {{150, 200}, {220, 300}, {6, 10}, {-10, 10}, {16, 45}, {0.5, 1}, {0.08, 0.18},
         {2.5, 6}, {1700, 2500}, {0.025, 0.08}},
        wing_weight);
    add("friedman", 5, uniform_box(5, 0.0, 1.0), friedman);
    add("g-and-l", 6, uniform_box(6, 0.0, 1.0), gramacy_lee);
    add("d-and-p-8d", 8, uniform_box(8, 0.0, 1.0), dette_pepelyshev_8d);
    add("d-and-p-exp", 3, uniform_box(3, 0.0, 1.0), dette_pepelyshev_exp);
    return fns;
}

}  // namespace

double TestFunction::volume_factor() const {
    double v = 1.0;
    for (const auto& [lo, hi] : box) v *= (hi - lo) / 2.0;
    return v;
}

model::PointFn TestFunction::on_cube() const { return affine_to_cube(f, box); }

model::PointFn affine_to_cube(const model::PointFn& f_on_box, const Box& box) {
    return [f_on_box, box](const std::vector<double>& x) {
        std::vector<double> y(x.size());
        for (std::size_t l = 0; l < x.size(); ++l)
            y[l] = box[l].first + (x[l] + 1.0) * (box[l].second - box[l].first) / 2.0;
        return f_on_box(y);
    };
}

const std::vector<TestFunction>& registry() {
    static const std::vector<TestFunction> fns = build_registry();
    return fns;
}

const TestFunction& lookup(const std::string& name) {
    for (const auto& fn : registry()) {
        if (fn.name == name) return fn;
    }
    std::string names;
    for (const auto& fn : registry()) names += (names.empty() ? "" : ", ") + fn.name;
    throw std::invalid_argument("unknown function '" + name + "'; available: " + names);
}

std::pair<GenzSpec, model::PointFn> genz(GenzFamily family, int d, std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("genz: d must be positive");
    GenzSpec spec;
    spec.family = family;
    spec.d = d;
    switch (family) {
        case GenzFamily::Oscillatory: spec.b = 284.6, spec.h = 1.5; break;
        case GenzFamily::CornerPeak: spec.b = 185.0, spec.h = 2.0; break;
        case GenzFamily::Continuous: spec.b = 2040.0, spec.h = 2.0; break;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    spec.w.resize(d);
    spec.c.resize(d);
    double c_sum = 0.0;
    for (int i = 0; i < d; ++i) {
        spec.w[i] = unit(rng);
        spec.c[i] = unit(rng);
        c_sum += spec.c[i];
    }
    const double target = spec.b / std::pow(static_cast<double>(d), spec.h);
    for (double& ci : spec.c) ci *= target / c_sum;

    model::PointFn f;
    switch (family) {
        case GenzFamily::Oscillatory:
            f = [spec](const std::vector<double>& x) {
                double s = 2.0 * pi * spec.w[0];
                for (int i = 0; i < spec.d; ++i) s += spec.c[i] * (x[i] + 1.0) / 2.0;
                return std::cos(s);
            };
            break;
        case GenzFamily::CornerPeak:
            f = [spec](const std::vector<double>& x) {
                double s = 1.0;
                for (int i = 0; i < spec.d; ++i) s += spec.c[i] * (x[i] + 1.0) / 2.0;
                return std::pow(s, -(spec.d + 1.0));
            };
            break;
        case GenzFamily::Continuous:
            f = [spec](const std::vector<double>& x) {
                double s = 0.0;
                for (int i = 0; i < spec.d; ++i)
                    s += spec.c[i] * spec.c[i] * std::abs((x[i] + 1.0) / 2.0 - spec.w[i]);
                return std::exp(-s);
            };
            break;
    }
    return {std::move(spec), std::move(f)};
}

TestFunction sin_sum(int d) {
    if (d < 1) throw std::invalid_argument("sin_sum: d must be positive");
    TestFunction fn;
    fn.name = "sin-sum";
    fn.d = d;
    fn.box = uniform_box(d, 0.0, 1.0);
    fn.f = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double xi : x) s += xi;
        return std::sin(s);
    };
    const std::complex<double> i_unit(0.0, 1.0);
    fn.analytic_integral =
        std::imag(std::pow((std::exp(i_unit) - 1.0) / i_unit, static_cast<double>(d)));
    fn.known_ranks = {{2, 2}};
    return fn;
}

TestFunction robot_arm(bool cumulative) {
    TestFunction fn;
    fn.name = cumulative ? "robot-arm-cumulative" : "robot-arm";
    fn.d = 8;
    fn.box = Box(8, {0.0, 2.0 * pi});
    for (int i = 4; i < 8; ++i) fn.box[i] = {0.0, 1.0};
    fn.f = [cumulative](const std::vector<double>& x) { return robot_arm_impl(x, cumulative); };
    return fn;
}

}  // namespace eftt::bench
